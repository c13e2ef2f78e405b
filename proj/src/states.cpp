#include "fockbit/states.hpp"

#include <cmath>

#include "fockbit/errors.hpp"
#include "fockbit/numerics.hpp"

namespace fockbit {

double DensityOperator::trace_real() const { return trace(matrix).real(); }

DensityOperator DensityOperator::renormalized() const {
    const double tr = trace_real();
    if (tr <= 0.0) throw ValidationError("renormalize: non-positive trace");
    DensityOperator out = *this;
    scale_in_place(out.matrix, cplx(1.0 / tr, 0.0));
    return out;
}

ComplexMatrix QubitState::matrix() const {
    ComplexMatrix m(2, 2);
    m.at(0, 0) = alpha;
    m.at(0, 1) = beta;
    m.at(1, 0) = std::conj(beta);
    m.at(1, 1) = 1.0 - alpha;
    return m;
}

double QubitState::entropy_bits() const {
    // Spectrum of [[a, b], [conj(b), 1-a]]: 1/2 +- sqrt((a - 1/2)^2 + |b|^2).
    const double r = std::sqrt((alpha - 0.5) * (alpha - 0.5) + std::norm(beta));
    double s = 0.0;
    for (double mu : {0.5 + r, 0.5 - r}) {
        mu = std::min(1.0, std::max(0.0, mu));
        if (mu > 1e-15) s -= mu * std::log2(mu);
    }
    return s;
}

double thermal_v(double mean_photons) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
        throw ValidationError("thermal_state: mean photon number must be finite and >= 0");
    return mean_photons / (mean_photons + 1.0);
}

DensityOperator thermal_state(double mean_photons, std::size_t dim, bool renormalize) {
    if (dim == 0) throw ValidationError("thermal_state: dimension must be positive");
    const double v = thermal_v(mean_photons);
    DensityOperator rho;
    rho.dim = dim;
    rho.matrix = ComplexMatrix(dim, dim);
    double weight = 1.0 - v; // (1 - v) v^m
    for (std::size_t m = 0; m < dim; ++m) {
        rho.matrix.at(m, m) = weight;
        weight *= v;
    }
    rho.tail_mass = std::pow(v, static_cast<double>(dim));
    if (renormalize) {
        // Exact geometric normalization: trace was 1 - v^dim.
        const double tr = 1.0 - rho.tail_mass;
        if (tr > 0.0) scale_in_place(rho.matrix, cplx(1.0 / tr, 0.0));
    }
    return rho;
}

PureState coherent_state(cplx alpha, std::size_t dim) {
    if (dim == 0) throw ValidationError("coherent_state: dimension must be positive");
    PureState psi;
    psi.dim = dim;
    psi.amplitudes.resize(dim);
    // amp_0 = e^{-|alpha|^2/2}, amp_{n+1} = amp_n * alpha / sqrt(n+1)
    cplx amp = std::exp(cplx(-0.5 * std::norm(alpha), 0.0));
    double captured = 0.0;
    for (std::size_t n = 0; n < dim; ++n) {
        psi.amplitudes[n] = amp;
        captured += std::norm(amp);
        amp *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    psi.tail_mass = std::max(0.0, 1.0 - captured);
    if (captured <= 0.0) throw ValidationError("coherent_state: window captures no weight");
    const double inv = 1.0 / std::sqrt(captured);
    for (cplx& a : psi.amplitudes) a *= inv;
    return psi;
}

PureState number_state(std::size_t m, std::size_t dim) {
    if (dim == 0) throw ValidationError("number_state: dimension must be positive");
    if (m >= dim) throw ValidationError("number_state: level outside the Fock window");
    PureState psi;
    psi.dim = dim;
    psi.amplitudes.assign(dim, cplx(0.0, 0.0));
    psi.amplitudes[m] = 1.0;
    psi.tail_mass = 0.0;
    return psi;
}

DensityOperator density_from_pure(const PureState& psi) {
    DensityOperator rho;
    rho.dim = psi.dim;
    rho.tail_mass = psi.tail_mass;
    rho.matrix = ComplexMatrix(psi.dim, psi.dim);
    for (std::size_t i = 0; i < psi.dim; ++i) {
        if (psi.amplitudes[i] == cplx(0.0, 0.0)) continue;
        for (std::size_t j = 0; j < psi.dim; ++j)
            rho.matrix.at(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
    }
    return rho;
}

DensityOperator validate_density(const ComplexMatrix& rho, double tolerance) {
    if (!rho.square()) throw ValidationError("validate_density: matrix not square");
    if (rho.rows == 0) throw ValidationError("validate_density: empty matrix");
    if (!all_finite(rho)) throw ValidationError("validate_density: non-finite entries");
    if (hermiticity_defect(rho) > kHermitianTol)
        throw ValidationError("validate_density: not Hermitian within 1e-10");

    const HermitianEigenResult eig = eigh(rho);
    for (double lambda : eig.eigenvalues)
        if (lambda < -tolerance)
            throw ValidationError("validate_density: negative eigenvalue beyond tolerance");

    const cplx tr = trace(rho);
    if (std::abs(tr.imag()) > 1e-9)
        throw ValidationError("validate_density: trace has an imaginary part");
    if (tr.real() < 0.0 || tr.real() > 1.0 + 1e-9)
        throw ValidationError("validate_density: trace outside [0, 1 + 1e-9]");

    DensityOperator out;
    out.dim = rho.rows;
    out.matrix = rho;
    out.tail_mass = std::max(0.0, 1.0 - tr.real());
    return out;
}

} // namespace fockbit
