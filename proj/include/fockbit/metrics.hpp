// Entropy and fidelity metrics, plus the closed forms they are checked against.
// All entropies are in bits (base-2 logarithms).
#pragma once

#include <vector>

#include "fockbit/states.hpp"

namespace fockbit {

// Eigenvalues below this are treated as exact zeros inside entropy sums.
inline constexpr double kEntropyEigenCutoff = 1e-15;

// -sum lambda log2 lambda over the spectrum of rho. Eigenvalues in [-1e-10, cutoff) are
// dropped; anything below -1e-10 rejects the input.
double von_neumann_entropy(const ComplexMatrix& rho);
double von_neumann_entropy(const DensityOperator& rho);

// Uhlmann fidelity Tr sqrt( sqrt(rho) sigma sqrt(rho) ). Symmetric in its arguments up to
// numerics. Both inputs must carry unit trace within 1e-7 (renormalize first if truncated).
double uhlmann_fidelity(const DensityOperator& rho, const DensityOperator& sigma);

// F' = sqrt(<0| residue |0>). The (0,0) entry may carry a tiny negative dust (clamped);
// anything below -1e-12 rejects the input.
double vacuum_closeness(const DensityOperator& residue);

// Closed forms for a thermal input with parameter v = N/(N+1):
//   per-qubit entropy   S_k = log2(1 + v^(2^(k-1))) - v^(2^(k-1))/(1 + v^(2^(k-1))) * log2 v^(2^(k-1))
//   residue entropy     -log2(1 - v^(2^K)) - (2^K v^(2^K)/(1 - v^(2^K))) * log2 v
//   conversion fidelity sqrt(1 - v^(2^K))
struct ThermalClosedForms {
    std::vector<double> qubit_entropies; // k = 1..K
    double residue_entropy = 0.0;
    double fidelity = 1.0;
};
ThermalClosedForms thermal_closed_forms(double v, int K);

// Closed-form F' for a coherent input: sqrt( e^{-|alpha|^2} sum_{j<2^K} |alpha|^(2j)/j! ).
double coherent_fprime_closed(double alpha_abs, int K);

// Entropy bookkeeping for one conversion: per-qubit entropies, residue entropy, input
// entropy, and the balance gap |sum_k S_k + S(residue) - S(input)|.
struct EntropyReport {
    std::vector<double> per_qubit;
    double residue = 0.0;
    double input = 0.0;
    double balance_gap = 0.0;
};
EntropyReport entropy_balance(const std::vector<QubitState>& per_qubit,
                              const DensityOperator& residue,
                              const DensityOperator& input);

} // namespace fockbit
