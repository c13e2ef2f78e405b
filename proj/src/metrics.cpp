#include "fockbit/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "fockbit/errors.hpp"
#include "fockbit/numerics.hpp"

namespace fockbit {

double von_neumann_entropy(const ComplexMatrix& rho) {
    const HermitianEigenResult eig = eigh(rho);
    double s = 0.0;
    for (double lam : eig.eigenvalues) {
        if (lam < -1e-10) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "entropy: eigenvalue %.3e below -1e-10", lam);
            throw ValidationError(buf);
        }
        if (lam < kEntropyEigenCutoff) continue;
        s -= lam * std::log2(lam);
    }
    return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
    return von_neumann_entropy(rho.matrix);
}

double uhlmann_fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim != sigma.dim)
        throw ValidationError("fidelity: dimension mismatch");
    if (std::abs(rho.trace_real() - 1.0) > 1e-7 || std::abs(sigma.trace_real() - 1.0) > 1e-7)
        throw ValidationError("fidelity: inputs must carry unit trace within 1e-7");
    const ComplexMatrix root = sqrt_psd(rho.matrix);
    // Dust from the two products can leave tiny asymmetry; fold it out before eigh.
    const ComplexMatrix prod = mul(mul(root, sigma.matrix), root);
    ComplexMatrix inner = add_scaled(prod, cplx(1.0, 0.0), adjoint(prod));
    scale_in_place(inner, cplx(0.5, 0.0));
    const HermitianEigenResult eig = eigh(inner);
    double f = 0.0;
    for (double lam : eig.eigenvalues)
        if (lam > 0.0) f += std::sqrt(lam);
    return f;
}

double vacuum_closeness(const DensityOperator& residue) {
    if (residue.dim == 0)
        throw ValidationError("vacuum closeness: empty operator");
    const double w = residue.matrix.at(0, 0).real();
    if (w < -1e-12)
        throw ValidationError("vacuum closeness: ground weight below -1e-12");
    return std::sqrt(w > 0.0 ? w : 0.0);
}

ThermalClosedForms thermal_closed_forms(double v, int K) {
    if (!(v >= 0.0) || v >= 1.0)
        throw ValidationError("thermal closed forms: v must lie in [0, 1)");
    if (K < 1)
        throw ValidationError("thermal closed forms: K must be at least 1");
    ThermalClosedForms out;
    out.qubit_entropies.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
        const double w = std::pow(v, std::ldexp(1.0, k - 1));
        double sk = std::log2(1.0 + w);
        if (w > 0.0) sk -= w / (1.0 + w) * std::log2(w);
        out.qubit_entropies.push_back(sk);
    }
    const double u = std::pow(v, std::ldexp(1.0, K));
    out.fidelity = std::sqrt(1.0 - u);
    out.residue_entropy = -std::log2(1.0 - u);
    if (v > 0.0) out.residue_entropy -= std::ldexp(1.0, K) * u / (1.0 - u) * std::log2(v);
    return out;
}

double coherent_fprime_closed(double alpha_abs, int K) {
    if (!(alpha_abs >= 0.0))
        throw ValidationError("coherent closed form: |alpha| must be nonnegative");
    if (K < 1 || K > 62)
        throw ValidationError("coherent closed form: K out of range");
    const double a2 = alpha_abs * alpha_abs;
    double term = std::exp(-a2); // e^{-|a|^2} |a|^{2j} / j! at j = 0
    double sum = 0.0;
    const std::size_t terms = std::size_t{1} << K;
    for (std::size_t j = 0; j < terms; ++j) {
        sum += term;
        term *= a2 / static_cast<double>(j + 1);
    }
    if (sum > 1.0) sum = 1.0; // rounding can push the Poisson partial sum past 1
    return std::sqrt(sum);
}

EntropyReport entropy_balance(const std::vector<QubitState>& per_qubit,
                              const DensityOperator& residue,
                              const DensityOperator& input) {
    EntropyReport rep;
    rep.per_qubit.reserve(per_qubit.size());
    double total = 0.0;
    for (const QubitState& q : per_qubit) {
        const double s = q.entropy_bits();
        rep.per_qubit.push_back(s);
        total += s;
    }
    // Entropies are of states, so sub-unit traces from truncation are folded out first.
    rep.residue = von_neumann_entropy(residue.renormalized());
    rep.input = von_neumann_entropy(input.renormalized());
    rep.balance_gap = std::abs(total + rep.residue - rep.input);
    return rep;
}

} // namespace fockbit
