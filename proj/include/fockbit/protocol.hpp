// The conversion protocol: K sequential steps move the K low binary digits of the photon
// number into K appended qubits (qubit k takes digit k); what remains in the field is the
// residue, supported on Fock multiples of 2^K. Three interchangeable engines compute the
// forward conversion:
//   joint   - density-matrix evolution of field (x) full register (oracle; memory-bound),
//   mixture - eigendecompose the input and propagate pure joint vectors (default),
//   formula - closed-form block sums with the bit-dependent phases.
// The reverse conversion unwinds a register into the field exactly (an isometry onto
// Fock levels [0, 2^K)), leaving every qubit back in the ground projector.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fockbit/dynamics.hpp"
#include "fockbit/metrics.hpp"
#include "fockbit/states.hpp"

namespace fockbit {

enum class Engine { joint, mixture, formula };

struct ProtocolConfig {
    int K = 1;                       // number of qubits to extract, 1..16
    std::size_t D = 64;              // Fock window; positive multiple of 2^K
    Engine engine = Engine::mixture;
    bool renormalize_input = false;

    std::size_t register_dim() const { return std::size_t{1} << K; }
    void validate() const; // throws ValidationError
};

// Guard thresholds (see also dynamics::guard_block_mass). The input band check admits
// geometrically decaying tails but rejects states parked against the truncation edge.
inline constexpr double kGuardBlockTol = 1e-10;
inline constexpr double kGuardBandAbsTol = 1e-9;
inline constexpr double kGuardBandTailFactor = 4096.0;

struct QubitRegisterState {
    int K = 0;
    ComplexMatrix matrix; // 2^K x 2^K, trace 1 within 1e-9
};

struct ConversionDiagnostics {
    double input_tail_mass = 0.0;
    double guard_band_mass = 0.0;        // input mass in the top band [D - 2^K, D)
    double guard_block_mass = 0.0;       // max over steps of mass in frozen guard blocks
    double trace_drift = 0.0;            // max |tr - tr_0| (joint) or |norm^2 - 1| (mixture)
    double residue_off_support_mass = 0.0; // max |entry| off the 2^K-multiple support grid
};

struct ConversionResult {
    QubitRegisterState qubit_register;
    std::vector<QubitState> per_qubit; // k = 1..K
    DensityOperator residue_field;
    Engine engine_used = Engine::mixture;
    ConversionDiagnostics diagnostics;
};

// Forward conversion. Validates the config, the dimension match, and the guard band
// (when D >= 2*2^K): mass in [D - 2^K, D) must stay below
// kGuardBandAbsTol + kGuardBandTailFactor * tail_mass, else NumericGuardError.
ConversionResult convert_forward(const DensityOperator& rho, const ProtocolConfig& cfg);

// Closed-form register (the `formula` engine's core): entry (j, l) sums the input blocks
// c[2^K m + j][2^K m + l] with phase (-1)^(j1+l1) i^(popcount j) (-i)^(popcount l).
QubitRegisterState qubit_state_formula(const DensityOperator& rho, int K);
// Closed-form residue: entry (2^K n, 2^K m) = (-1)^(n+m) sum_j c[2^K n + j][2^K m + j].
DensityOperator residue_formula(const DensityOperator& rho, int K);

struct ReverseResult {
    DensityOperator field;           // supported on Fock [0, 2^K)
    QubitRegisterState final_qubits; // ground projector for any input register
};

// Reverse conversion: vacuum field, apply adjoint steps K..1. Engine formula falls back to
// mixture (there is no separate closed form to run); joint is available as the oracle.
ReverseResult convert_reverse(const QubitRegisterState& reg, const ProtocolConfig& cfg);

// reverse(forward(rho)): the operational reconstruction.
DensityOperator reconstruct(const DensityOperator& rho, const ProtocolConfig& cfg);

// Closed-form reconstruction candidate, single block sum: c'_nm = sum_m' c[2^K m'+n][2^K m'+m]
// for n,m < 2^K. Matches the operational reconstruction (trace-preserving).
ComplexMatrix reconstruct_single_sum(const DensityOperator& rho, int K);
// The literal double block sum c'_nm = sum_{n',m'} c[2^K n'+n][2^K m'+m]. Not trace-preserving
// in general; kept so reports can document its trace deviation.
ComplexMatrix reconstruct_double_sum(const DensityOperator& rho, int K);

// Joint-engine composite state after each forward step (index 0 = after step 1). Oracle
// surface for separability/spectrum checks; memory-bound like the joint engine.
std::vector<ComplexMatrix> forward_step_states(const DensityOperator& rho,
                                               const ProtocolConfig& cfg);

// Convenience overload matching the metrics module.
EntropyReport entropy_balance(const ConversionResult& result, const DensityOperator& input);

struct CrossCheck {
    double register_delta = 0.0; // max-abs vs the joint engine
    double residue_delta = 0.0;
};

// Everything a round-trip produces: forward conversion, operational reconstruction, the
// fidelity/entropy metrics, cross-checks against the joint oracle (auto-run when the
// engine is not joint and D*2^K <= 1024), and the reconstruction-formula deltas.
struct ConversionReport {
    ConversionResult forward;
    DensityOperator reconstruction;
    double fidelity = 0.0;          // F(renorm(input), renorm(reconstruction))
    double vacuum_fidelity = 0.0;   // F' = sqrt(<0|residue|0>)
    EntropyReport entropies;
    std::optional<CrossCheck> cross_check;
    double single_sum_delta = 0.0;        // max-abs, operational vs single-sum formula
    double double_sum_trace_deviation = 0.0;
};
ConversionReport roundtrip(const DensityOperator& rho, const ProtocolConfig& cfg);

} // namespace fockbit
