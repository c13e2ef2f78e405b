// Single-step dynamics of the nonlinear Jaynes-Cummings ladder. Step k couples the joint
// basis states |m,-> and |m-p,+> (p = 2^(k-1)) into a 2x2 rotation by angle m*theta; only
// the dimensionless angle theta = Omega*t enters anywhere. The protocol step uses
// theta_k = pi/2^k, which turns every rotation into an exact quarter-turn multiple on the
// levels that matter, so those coefficients are produced exactly (0, +-1) rather than via
// cos/sin of an accumulated argument.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fockbit/matrix.hpp"

namespace fockbit {

enum class Direction { forward, reverse };

struct StepSpec {
    int k = 1;          // step index, >= 1
    std::size_t p = 1;  // 2^(k-1), Fock-shift of the coupled pair
    double theta = 0.0; // interaction angle Omega*t
    bool protocol_exact = false;

    // theta = pi/2^k (the bit-extraction angle).
    static StepSpec protocol_step(int k);
    // Arbitrary angle, same coupling structure.
    static StepSpec with_angle(int k, double theta);

    // cos/sin of m*theta. At protocol angles, multiples of a quarter turn are exact.
    void rotation(std::size_t m, double& c, double& s) const;
};

// One joint basis label: Fock level and qubit bit (0 = ground/|->, 1 = excited/|+>).
struct JointIndex {
    std::size_t fock = 0;
    int qubit = 0;
};

struct StepTerm {
    JointIndex index;
    cplx amp;
};

// Closed-form step action on a joint basis state, at most two output terms.
//   |m,->   -> cos(m theta)|m,->   - i sin(m theta)|m-p,+>   (m >= p)
//   |m-p,+> -> cos(m theta)|m-p,+> - i sin(m theta)|m,->
//   |m,->   -> |m,->                                          (m < p: lowering annihilates)
//   |m,+>   -> |m,+>                                          (m+p >= D: truncation guard)
// direction == reverse applies the adjoint (sign of the -i flips).
struct StepAction {
    StepTerm terms[2];
    int count = 0;
};
StepAction step_action(const StepSpec& spec, JointIndex in, std::size_t fock_dim,
                       Direction dir = Direction::forward);

// Dense (2D x 2D) matrix of the step on field (x) single qubit, joint index = 2*fock + bit.
// Exactly unitary by construction, including the truncation-guard identity blocks.
ComplexMatrix step_unitary(const StepSpec& spec, std::size_t fock_dim,
                           Direction dir = Direction::forward);

// Joint state over field (x) a register of `num_qubits` qubits. Flat index layout:
// fock * 2^Q + b where bit (k-1) of b belongs to qubit k (qubit 1 is the least significant).
// Exactly one of `vec` (pure) / `mat` (density) is populated.
struct JointState {
    std::size_t fock_dim = 0;
    int num_qubits = 0;
    std::vector<cplx> vec;
    ComplexMatrix mat;

    bool is_pure() const { return !vec.empty(); }
    std::size_t joint_dim() const { return fock_dim << num_qubits; }

    static JointState pure(std::size_t fock_dim, int num_qubits, std::vector<cplx> amplitudes);
    static JointState density(std::size_t fock_dim, int num_qubits, ComplexMatrix rho);
};

// Apply the step unitary (or its adjoint) to `state`, acting on the field and qubit
// `target_qubit` (1-based), leaving the other qubits alone. Works in place; the density
// path applies the rotation to row pairs twice via an adjoint flip so every inner loop is
// a contiguous kernel rot2.
void apply_step(JointState& state, const StepSpec& spec, Direction dir, int target_qubit);

// Probability mass sitting in the truncation-guard blocks of step `spec` (states |f,+> on
// the target qubit with f + p >= D). These blocks are frozen by the truncated unitary, so
// any mass here means the run left the regime where truncation is exact.
double guard_block_mass(const JointState& state, const StepSpec& spec, int target_qubit);

} // namespace fockbit
