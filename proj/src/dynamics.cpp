#include "fockbit/dynamics.hpp"

#include <cmath>

#include "fockbit/errors.hpp"

namespace fockbit {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void validate_k(int k) {
    if (k < 1 || k > 62) throw ValidationError("step: k must be in [1, 62]");
}

} // namespace

StepSpec StepSpec::protocol_step(int k) {
    validate_k(k);
    StepSpec s;
    s.k = k;
    s.p = std::size_t{1} << (k - 1);
    s.theta = kPi / std::ldexp(1.0, k); // pi / 2^k
    s.protocol_exact = true;
    return s;
}

StepSpec StepSpec::with_angle(int k, double theta) {
    validate_k(k);
    if (!std::isfinite(theta)) throw ValidationError("step: angle must be finite");
    StepSpec s;
    s.k = k;
    s.p = std::size_t{1} << (k - 1);
    s.theta = theta;
    s.protocol_exact = false;
    return s;
}

void StepSpec::rotation(std::size_t m, double& c, double& s) const {
    if (protocol_exact) {
        // m * pi/2^k reduced mod 2*pi: arg in [0, 2^(k+1)) quarter-period units of pi/2^k.
        const std::size_t period = std::size_t{1} << (k + 1);
        const std::size_t arg = m & (period - 1);
        const std::size_t quarter = std::size_t{1} << (k - 1); // arg multiples of this hit n*pi/2
        if ((arg & (quarter - 1)) == 0) {
            switch (arg >> (k - 1)) {
                case 0: c = 1.0;  s = 0.0;  return;
                case 1: c = 0.0;  s = 1.0;  return;
                case 2: c = -1.0; s = 0.0;  return;
                default: c = 0.0; s = -1.0; return;
            }
        }
        const double phi = static_cast<double>(arg) * theta;
        c = std::cos(phi);
        s = std::sin(phi);
        return;
    }
    const double phi = static_cast<double>(m) * theta;
    c = std::cos(phi);
    s = std::sin(phi);
}

StepAction step_action(const StepSpec& spec, JointIndex in, std::size_t fock_dim, Direction dir) {
    if (in.fock >= fock_dim) throw ValidationError("step_action: Fock index out of range");
    if (in.qubit != 0 && in.qubit != 1) throw ValidationError("step_action: qubit bit must be 0 or 1");

    StepAction out;
    const double sign = (dir == Direction::forward) ? -1.0 : 1.0; // -i sin vs +i sin
    if (in.qubit == 0) {
        if (in.fock < spec.p) {
            // Lowering annihilates: |m,-> is stationary below the first coupled level.
            out.terms[0] = {in, cplx(1.0, 0.0)};
            out.count = 1;
            return out;
        }
        double c, s;
        spec.rotation(in.fock, c, s);
        out.terms[0] = {in, cplx(c, 0.0)};
        out.terms[1] = {{in.fock - spec.p, 1}, cplx(0.0, sign * s)};
        out.count = 2;
        return out;
    }
    // qubit == 1: partner is |fock + p, ->.
    if (in.fock + spec.p >= fock_dim) {
        // Truncation guard: the partner level is outside the window; freeze the state so
        // the truncated step stays exactly unitary.
        out.terms[0] = {in, cplx(1.0, 0.0)};
        out.count = 1;
        return out;
    }
    double c, s;
    spec.rotation(in.fock + spec.p, c, s);
    out.terms[0] = {in, cplx(c, 0.0)};
    out.terms[1] = {{in.fock + spec.p, 0}, cplx(0.0, sign * s)};
    out.count = 2;
    return out;
}

ComplexMatrix step_unitary(const StepSpec& spec, std::size_t fock_dim, Direction dir) {
    if (fock_dim == 0) throw ValidationError("step_unitary: empty Fock window");
    const std::size_t dim = 2 * fock_dim;
    ComplexMatrix u(dim, dim);
    for (std::size_t f = 0; f < fock_dim; ++f) {
        for (int b = 0; b < 2; ++b) {
            const std::size_t col = 2 * f + static_cast<std::size_t>(b);
            const StepAction act = step_action(spec, {f, b}, fock_dim, dir);
            for (int t = 0; t < act.count; ++t) {
                const std::size_t row =
                    2 * act.terms[t].index.fock + static_cast<std::size_t>(act.terms[t].index.qubit);
                u.at(row, col) = act.terms[t].amp;
            }
        }
    }
    return u;
}

JointState JointState::pure(std::size_t fock_dim, int num_qubits, std::vector<cplx> amplitudes) {
    JointState st;
    st.fock_dim = fock_dim;
    st.num_qubits = num_qubits;
    if (amplitudes.size() != (fock_dim << num_qubits))
        throw ValidationError("JointState: amplitude count does not match fock_dim * 2^Q");
    st.vec = std::move(amplitudes);
    return st;
}

JointState JointState::density(std::size_t fock_dim, int num_qubits, ComplexMatrix rho) {
    JointState st;
    st.fock_dim = fock_dim;
    st.num_qubits = num_qubits;
    if (rho.rows != (fock_dim << num_qubits) || !rho.square())
        throw ValidationError("JointState: matrix shape does not match fock_dim * 2^Q");
    st.mat = std::move(rho);
    return st;
}

namespace {

// The step couples flat indices f*2^Q + b  <->  (f-p)*2^Q + (b | mask) for f >= p and
// bit (target-1) of b clear. The rotation angle depends only on f (the Fock level of the
// |-> member), so the coefficients are hoisted out of the register loop.
template <typename PairFn>
void walk_pairs(const JointState& st, const StepSpec& spec, Direction dir, int target_qubit,
                PairFn&& fn) {
    if (target_qubit < 1 || target_qubit > st.num_qubits)
        throw ValidationError("apply_step: target qubit outside the register");
    const std::size_t reg_dim = std::size_t{1} << st.num_qubits;
    const std::size_t mask = std::size_t{1} << (target_qubit - 1);
    const double sign = (dir == Direction::forward) ? -1.0 : 1.0;
    for (std::size_t f = spec.p; f < st.fock_dim; ++f) {
        double c, s;
        spec.rotation(f, c, s);
        const cplx is(0.0, sign * s);
        const std::size_t base0 = f * reg_dim;
        const std::size_t base1 = (f - spec.p) * reg_dim;
        for (std::size_t b = 0; b < reg_dim; ++b) {
            if (b & mask) continue;
            fn(cplx(c, 0.0), is, base0 + b, base1 + (b | mask));
        }
    }
}

} // namespace

void apply_step(JointState& state, const StepSpec& spec, Direction dir, int target_qubit) {
    if (state.is_pure()) {
        std::vector<cplx>& psi = state.vec;
        walk_pairs(state, spec, dir, target_qubit,
                   [&](cplx c, cplx is, std::size_t i0, std::size_t i1) {
                       const cplx v0 = psi[i0];
                       const cplx v1 = psi[i1];
                       psi[i0] = c * v0 + is * v1;
                       psi[i1] = is * v0 + c * v1;
                   });
        return;
    }
    // rho <- U rho U^dag via two row passes: X = U rho (rotate row pairs), then
    // rho' = X U^dag = (U X^dag)^dag (flip, rotate rows again, flip back).
    ComplexMatrix& rho = state.mat;
    auto rotate_rows = [&] {
        walk_pairs(state, spec, dir, target_qubit,
                   [&](cplx c, cplx is, std::size_t i0, std::size_t i1) {
                       kern::rot2(c, is, is, c, rho.row(i0), rho.row(i1), rho.cols);
                   });
    };
    rotate_rows();
    adjoint_in_place(rho);
    rotate_rows();
    adjoint_in_place(rho);
}

double guard_block_mass(const JointState& state, const StepSpec& spec, int target_qubit) {
    if (target_qubit < 1 || target_qubit > state.num_qubits)
        throw ValidationError("guard_block_mass: target qubit outside the register");
    const std::size_t reg_dim = std::size_t{1} << state.num_qubits;
    const std::size_t mask = std::size_t{1} << (target_qubit - 1);
    // Levels f with f + p >= fock_dim have no raising partner inside the window, so any
    // target-excited weight there is frozen by the step. When p exceeds the window that
    // covers every level.
    const std::size_t first_guard = (state.fock_dim > spec.p) ? state.fock_dim - spec.p : 0;
    double mass = 0.0;
    for (std::size_t f = first_guard; f < state.fock_dim; ++f)
        for (std::size_t b = 0; b < reg_dim; ++b) {
            if (!(b & mask)) continue;
            const std::size_t idx = f * reg_dim + b;
            mass += state.is_pure() ? std::norm(state.vec[idx]) : state.mat.at(idx, idx).real();
        }
    return mass;
}

} // namespace fockbit
