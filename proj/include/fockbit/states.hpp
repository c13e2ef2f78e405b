// Field-state constructors (thermal, coherent, number) and ingestion of raw matrices as
// density operators. All states live in a Fock window [0, D); constructors record how much
// probability weight the window cuts off (tail_mass) instead of silently dropping it.
#pragma once

#include <cstddef>

#include "fockbit/matrix.hpp"

namespace fockbit {

struct DensityOperator {
    std::size_t dim = 0;
    ComplexMatrix matrix;
    // Estimated probability weight of the untruncated state beyond the window. Survives
    // renormalization: it keeps recording how severe the truncation was.
    double tail_mass = 0.0;

    double trace_real() const;
    // Rescaled to unit trace; tail_mass carried over unchanged.
    DensityOperator renormalized() const;
};

struct PureState {
    std::size_t dim = 0;
    std::vector<cplx> amplitudes; // unit norm
    double tail_mass = 0.0;       // pre-normalization weight beyond the window
};

// One converted qubit: ground population alpha (index 0 is the ground/|-> level) and
// coherence beta = <ground| rho |excited>.
struct QubitState {
    double alpha = 1.0;
    cplx beta = 0.0;

    ComplexMatrix matrix() const; // [[alpha, beta], [conj(beta), 1-alpha]]
    double entropy_bits() const;
};

// Thermal (geometric) state with mean photon number N: diagonal (1-v) v^m, v = N/(N+1).
// Not renormalized unless asked: trace is 1 - v^D and tail_mass = v^D.
DensityOperator thermal_state(double mean_photons, std::size_t dim, bool renormalize = false);
// v = N/(N+1) helper shared with the closed-form metrics.
double thermal_v(double mean_photons);

// Coherent state truncated to the window and renormalized; tail_mass records the
// pre-normalization deficit. Amplitudes follow amp_{n+1} = amp_n * alpha / sqrt(n+1).
PureState coherent_state(cplx alpha, std::size_t dim);

// Fock basis state |m>, m in [0, dim).
PureState number_state(std::size_t m, std::size_t dim);

DensityOperator density_from_pure(const PureState& psi);

// Ingestion gate for raw matrices: square, Hermitian within kHermitianTol, eigenvalues
// >= -tolerance, trace in [0, 1 + 1e-9]. Records any trace deficit as tail_mass.
DensityOperator validate_density(const ComplexMatrix& rho, double tolerance = 1e-10);

} // namespace fockbit
