#include "fockbit/protocol.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <utility>

#include "fockbit/errors.hpp"
#include "fockbit/kernels.hpp"
#include "fockbit/numerics.hpp"

namespace fockbit {

namespace {

// Joint density matrices scale as (D * 2^K)^2 entries; past this the engines that need one
// would silently eat gigabytes, so refuse instead.
constexpr std::size_t kJointDimCap = 4096;

// Mixture components below this weight cannot move any reported figure; skipping them also
// drops the negative dust a zero eigenvalue leaves behind.
constexpr double kComponentWeightCutoff = 1e-15;

const cplx kIPow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};

// Per-basis-ket phase the conversion attaches to register pattern b:
// (-1)^(bit 1 of b) * i^(popcount b).
cplx register_phase(std::size_t b) {
    const cplx ip = kIPow[std::popcount(static_cast<unsigned long long>(b)) & 3];
    return (b & 1) ? -ip : ip;
}

void check_register_shape(const QubitRegisterState& reg, const ProtocolConfig& cfg) {
    if (reg.K != cfg.K)
        throw ValidationError("reverse: register qubit count does not match the config");
    const std::size_t q = cfg.register_dim();
    if (reg.matrix.rows != q || reg.matrix.cols != q)
        throw ValidationError("reverse: register matrix is not 2^K square");
    if (hermiticity_defect(reg.matrix) > kHermitianTol)
        throw ValidationError("reverse: register matrix is not Hermitian within 1e-10");
    const double t = trace(reg.matrix).real();
    if (!(t > 0.0) || t > 1.0 + 1e-9)
        throw ValidationError("reverse: register trace must lie in (0, 1 + 1e-9]");
}

void check_joint_size(std::size_t joint_dim) {
    if (joint_dim > kJointDimCap) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "joint engine: D * 2^K = %zu exceeds the cap %zu",
                      joint_dim, kJointDimCap);
        throw ValidationError(buf);
    }
}

void check_guard_block(double mass, int k) {
    if (mass > kGuardBlockTol) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "step %d: guard-block mass %.3e exceeds 1e-10", k, mass);
        throw NumericGuardError(buf);
    }
}

// Shared mixture-path reducers: fold one propagated joint vector (weight w) into the
// register and field accumulators.
void fold_register(const std::vector<cplx>& psi, double w, std::size_t fock_dim,
                   std::size_t reg_dim, ComplexMatrix& reg, std::vector<cplx>& row_conj) {
    for (std::size_t f = 0; f < fock_dim; ++f) {
        const cplx* block = psi.data() + f * reg_dim;
        bool any = false;
        for (std::size_t j = 0; j < reg_dim; ++j) {
            row_conj[j] = std::conj(block[j]);
            if (block[j] != cplx(0.0, 0.0)) any = true;
        }
        if (!any) continue;
        for (std::size_t j = 0; j < reg_dim; ++j) {
            if (block[j] == cplx(0.0, 0.0)) continue;
            kern::axpy(w * block[j], row_conj.data(), reg.row(j), reg_dim);
        }
    }
}

void fold_field(const std::vector<cplx>& psi, double w, std::size_t fock_dim,
                std::size_t reg_dim, ComplexMatrix& field, std::vector<cplx>& col,
                std::vector<cplx>& col_conj) {
    for (std::size_t j = 0; j < reg_dim; ++j) {
        bool any = false;
        for (std::size_t n = 0; n < fock_dim; ++n) {
            col[n] = psi[n * reg_dim + j];
            if (col[n] != cplx(0.0, 0.0)) any = true;
        }
        if (!any) continue;
        for (std::size_t n = 0; n < fock_dim; ++n) col_conj[n] = std::conj(col[n]);
        for (std::size_t n = 0; n < fock_dim; ++n) {
            if (col[n] == cplx(0.0, 0.0)) continue;
            kern::axpy(w * col[n], col_conj.data(), field.row(n), fock_dim);
        }
    }
}

double vector_norm2(const std::vector<cplx>& psi) {
    double n2 = 0.0;
    for (const cplx& a : psi) n2 += std::norm(a);
    return n2;
}

// Eigendecompose a Hermitian PSD matrix and hand each kept component to visit(w, column).
template <typename Visit>
void for_each_component(const ComplexMatrix& m, const char* what, Visit&& visit) {
    const HermitianEigenResult eig = eigh(m);
    for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
        const double w = eig.eigenvalues[i];
        if (w < -kPsdClampTol) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s: eigenvalue %.3e below -1e-10", what, w);
            throw ValidationError(buf);
        }
        if (w <= kComponentWeightCutoff) continue;
        visit(w, i, eig.eigenvectors);
    }
}

struct EngineOutput {
    ComplexMatrix register_matrix;
    ComplexMatrix field_matrix;
};

// Direction-agnostic step sequence: forward runs qubits 1..K, reverse runs K..1.
struct StepPlan {
    Direction dir;
    int K = 0;

    int qubit(int i) const { return dir == Direction::forward ? i + 1 : K - i; }
};

// Propagate the full joint density matrix through the step sequence. `initial` places the
// input at the correct corner: field blocks at register pattern 0 (forward) or the register
// block at Fock level 0 (reverse).
EngineOutput run_joint(const ComplexMatrix& initial, const ProtocolConfig& cfg, StepPlan plan,
                       ConversionDiagnostics& diag, std::vector<ComplexMatrix>* steps_out) {
    JointState st = JointState::density(cfg.D, cfg.K, initial);
    const double tr0 = trace(st.mat).real();
    for (int i = 0; i < cfg.K; ++i) {
        const int k = plan.qubit(i);
        const StepSpec spec = StepSpec::protocol_step(k);
        const double gm = guard_block_mass(st, spec, k);
        if (gm > diag.guard_block_mass) diag.guard_block_mass = gm;
        check_guard_block(gm, k);
        apply_step(st, spec, plan.dir, k);
        const double drift = std::abs(trace(st.mat).real() - tr0);
        if (drift > diag.trace_drift) diag.trace_drift = drift;
        if (steps_out) steps_out->push_back(st.mat);
    }
    const std::vector<std::size_t> dims = {cfg.D, cfg.register_dim()};
    EngineOutput out;
    out.register_matrix = partial_trace(st.mat, dims, {1});
    out.field_matrix = partial_trace(st.mat, dims, {0});
    return out;
}

// Eigendecompose the boundary state and propagate each component as a pure joint vector.
// `seed` writes one eigenvector column into the joint vector layout.
template <typename Seed>
EngineOutput run_mixture(const ComplexMatrix& boundary, const char* what,
                         const ProtocolConfig& cfg, StepPlan plan,
                         ConversionDiagnostics& diag, Seed&& seed) {
    const std::size_t q = cfg.register_dim();
    EngineOutput out;
    out.register_matrix = ComplexMatrix(q, q);
    out.field_matrix = ComplexMatrix(cfg.D, cfg.D);

    std::vector<cplx> psi(cfg.D * q);
    std::vector<cplx> col(cfg.D), col_conj(cfg.D), row_conj(q);
    std::vector<double> guard_by_step(static_cast<std::size_t>(cfg.K), 0.0);

    JointState st; // reuses one buffer across components
    st.fock_dim = cfg.D;
    st.num_qubits = cfg.K;

    for_each_component(boundary, what, [&](double w, std::size_t i, const ComplexMatrix& v) {
        psi.assign(psi.size(), cplx(0.0, 0.0));
        seed(psi, v, i);
        st.vec = std::move(psi);
        for (int s = 0; s < cfg.K; ++s) {
            const int k = plan.qubit(s);
            const StepSpec spec = StepSpec::protocol_step(k);
            guard_by_step[static_cast<std::size_t>(s)] +=
                w * guard_block_mass(st, spec, k);
            apply_step(st, spec, plan.dir, k);
        }
        psi = std::move(st.vec);
        const double drift = std::abs(vector_norm2(psi) - 1.0);
        if (drift > diag.trace_drift) diag.trace_drift = drift;
        fold_register(psi, w, cfg.D, q, out.register_matrix, row_conj);
        fold_field(psi, w, cfg.D, q, out.field_matrix, col, col_conj);
    });

    for (int s = 0; s < cfg.K; ++s) {
        const double gm = guard_by_step[static_cast<std::size_t>(s)];
        if (gm > diag.guard_block_mass) diag.guard_block_mass = gm;
        check_guard_block(gm, plan.qubit(s));
    }
    return out;
}

// Largest off-grid entry of a field matrix that should live on Fock multiples of 2^K.
double off_support_mass(const ComplexMatrix& field, std::size_t q) {
    double worst = 0.0;
    for (std::size_t n = 0; n < field.rows; ++n)
        for (std::size_t m = 0; m < field.cols; ++m) {
            if (n % q == 0 && m % q == 0) continue;
            const double a = std::abs(field.at(n, m));
            if (a > worst) worst = a;
        }
    return worst;
}

std::vector<QubitState> per_qubit_from_register(const QubitRegisterState& reg) {
    const std::vector<std::size_t> dims(static_cast<std::size_t>(reg.K), 2);
    std::vector<QubitState> out;
    out.reserve(static_cast<std::size_t>(reg.K));
    for (int k = 1; k <= reg.K; ++k) {
        // Qubit k sits at bit k-1, i.e. subsystem K-k in most-significant-first order.
        const ComplexMatrix red =
            partial_trace(reg.matrix, dims, {static_cast<std::size_t>(reg.K - k)});
        const double t = red.at(0, 0).real() + red.at(1, 1).real();
        if (!(t > 0.0))
            throw ValidationError("per-qubit reduction has nonpositive trace");
        QubitState qs;
        qs.alpha = red.at(0, 0).real() / t;
        if (qs.alpha < 0.0) qs.alpha = 0.0;
        if (qs.alpha > 1.0) qs.alpha = 1.0;
        qs.beta = red.at(0, 1) / t;
        out.push_back(qs);
    }
    return out;
}

DensityOperator gate_input(const DensityOperator& rho, const ProtocolConfig& cfg,
                           ConversionDiagnostics& diag) {
    if (rho.dim != cfg.D)
        throw ValidationError("forward: state dimension does not match the config window");
    if (hermiticity_defect(rho.matrix) > kHermitianTol)
        throw ValidationError("forward: input matrix is not Hermitian within 1e-10");
    DensityOperator in = cfg.renormalize_input ? rho.renormalized() : rho;
    diag.input_tail_mass = in.tail_mass;

    const std::size_t q = cfg.register_dim();
    double band = 0.0;
    for (std::size_t m = cfg.D - q; m < cfg.D; ++m) band += in.matrix.at(m, m).real();
    diag.guard_band_mass = band;
    // With D = 2^K the band is the whole window, so the check only makes sense when the
    // window leaves room above the extracted digits.
    if (cfg.D >= 2 * q && band > kGuardBandAbsTol + kGuardBandTailFactor * in.tail_mass) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "forward: mass %.3e in the top band [D - 2^K, D) risks truncation "
                      "artifacts (tail %.3e)", band, in.tail_mass);
        throw NumericGuardError(buf);
    }
    return in;
}

ConversionResult assemble_forward(EngineOutput&& eo, const DensityOperator& in,
                                  const ProtocolConfig& cfg, Engine used,
                                  ConversionDiagnostics diag) {
    ConversionResult res;
    res.engine_used = used;
    res.qubit_register = QubitRegisterState{cfg.K, std::move(eo.register_matrix)};
    res.per_qubit = per_qubit_from_register(res.qubit_register);
    res.residue_field = DensityOperator{cfg.D, std::move(eo.field_matrix), in.tail_mass};
    diag.residue_off_support_mass =
        off_support_mass(res.residue_field.matrix, cfg.register_dim());
    if (diag.residue_off_support_mass > kGuardBlockTol)
        throw NumericGuardError("forward: residue mass off the 2^K support grid");
    res.diagnostics = diag;
    return res;
}

} // namespace

void ProtocolConfig::validate() const {
    if (K < 1 || K > 16)
        throw ValidationError("config: K must lie in [1, 16]");
    if (D == 0)
        throw ValidationError("config: D must be positive");
    if (D % register_dim() != 0)
        throw ValidationError("config: D must be a multiple of 2^K");
}

ConversionResult convert_forward(const DensityOperator& rho, const ProtocolConfig& cfg) {
    cfg.validate();
    ConversionDiagnostics diag;
    const DensityOperator in = gate_input(rho, cfg, diag);
    const StepPlan plan{Direction::forward, cfg.K};

    if (cfg.engine == Engine::formula) {
        EngineOutput eo;
        eo.register_matrix = qubit_state_formula(in, cfg.K).matrix;
        eo.field_matrix = residue_formula(in, cfg.K).matrix;
        return assemble_forward(std::move(eo), in, cfg, Engine::formula, diag);
    }
    if (cfg.engine == Engine::joint) {
        check_joint_size(cfg.D * cfg.register_dim());
        ComplexMatrix initial(cfg.D * cfg.register_dim(), cfg.D * cfg.register_dim());
        const std::size_t q = cfg.register_dim();
        for (std::size_t f = 0; f < cfg.D; ++f)
            for (std::size_t g = 0; g < cfg.D; ++g)
                initial.at(f * q, g * q) = in.matrix.at(f, g);
        EngineOutput eo = run_joint(initial, cfg, plan, diag, nullptr);
        return assemble_forward(std::move(eo), in, cfg, Engine::joint, diag);
    }
    const std::size_t q = cfg.register_dim();
    EngineOutput eo = run_mixture(in.matrix, "forward input", cfg, plan, diag,
                                  [&](std::vector<cplx>& psi, const ComplexMatrix& v,
                                      std::size_t i) {
                                      for (std::size_t f = 0; f < cfg.D; ++f)
                                          psi[f * q] = v.at(f, i);
                                  });
    return assemble_forward(std::move(eo), in, cfg, Engine::mixture, diag);
}

QubitRegisterState qubit_state_formula(const DensityOperator& rho, int K) {
    if (K < 1 || K > 16)
        throw ValidationError("register formula: K must lie in [1, 16]");
    const std::size_t q = std::size_t{1} << K;
    if (rho.dim == 0 || rho.dim % q != 0)
        throw ValidationError("register formula: dimension must be a positive multiple of 2^K");
    const std::size_t blocks = rho.dim / q;
    ComplexMatrix reg(q, q);
    for (std::size_t j = 0; j < q; ++j) {
        const cplx pj = register_phase(j);
        for (std::size_t l = 0; l < q; ++l) {
            cplx sum(0.0, 0.0);
            for (std::size_t m = 0; m < blocks; ++m)
                sum += rho.matrix.at(m * q + j, m * q + l);
            reg.at(j, l) = pj * std::conj(register_phase(l)) * sum;
        }
    }
    return QubitRegisterState{K, std::move(reg)};
}

DensityOperator residue_formula(const DensityOperator& rho, int K) {
    if (K < 1 || K > 16)
        throw ValidationError("residue formula: K must lie in [1, 16]");
    const std::size_t q = std::size_t{1} << K;
    if (rho.dim == 0 || rho.dim % q != 0)
        throw ValidationError("residue formula: dimension must be a positive multiple of 2^K");
    const std::size_t blocks = rho.dim / q;
    ComplexMatrix res(rho.dim, rho.dim);
    for (std::size_t n = 0; n < blocks; ++n)
        for (std::size_t m = 0; m < blocks; ++m) {
            cplx sum(0.0, 0.0);
            for (std::size_t j = 0; j < q; ++j)
                sum += rho.matrix.at(n * q + j, m * q + j);
            res.at(n * q, m * q) = ((n + m) & 1) ? -sum : sum;
        }
    return DensityOperator{rho.dim, std::move(res), rho.tail_mass};
}

ReverseResult convert_reverse(const QubitRegisterState& reg, const ProtocolConfig& cfg) {
    cfg.validate();
    check_register_shape(reg, cfg);
    const std::size_t q = cfg.register_dim();
    const StepPlan plan{Direction::reverse, cfg.K};
    ConversionDiagnostics diag;

    EngineOutput eo;
    if (cfg.engine == Engine::joint) {
        check_joint_size(cfg.D * q);
        ComplexMatrix initial(cfg.D * q, cfg.D * q);
        // Fock level 0 block sits at flat indices [0, 2^K).
        for (std::size_t b = 0; b < q; ++b)
            for (std::size_t c = 0; c < q; ++c) initial.at(b, c) = reg.matrix.at(b, c);
        eo = run_joint(initial, cfg, plan, diag, nullptr);
    } else {
        // The formula engine has no separate reverse closed form; the mixture path is it.
        eo = run_mixture(reg.matrix, "reverse register", cfg, plan, diag,
                         [&](std::vector<cplx>& psi, const ComplexMatrix& v, std::size_t i) {
                             for (std::size_t b = 0; b < q; ++b) psi[b] = v.at(b, i);
                         });
    }

    ReverseResult out;
    const double t = trace(eo.field_matrix).real();
    out.field = DensityOperator{cfg.D, std::move(eo.field_matrix),
                                t < 1.0 ? 1.0 - t : 0.0};
    out.final_qubits = QubitRegisterState{cfg.K, std::move(eo.register_matrix)};
    return out;
}

DensityOperator reconstruct(const DensityOperator& rho, const ProtocolConfig& cfg) {
    const ConversionResult fwd = convert_forward(rho, cfg);
    return convert_reverse(fwd.qubit_register, cfg).field;
}

ComplexMatrix reconstruct_single_sum(const DensityOperator& rho, int K) {
    if (K < 1 || K > 16)
        throw ValidationError("reconstruction formula: K must lie in [1, 16]");
    const std::size_t q = std::size_t{1} << K;
    if (rho.dim == 0 || rho.dim % q != 0)
        throw ValidationError("reconstruction formula: dimension must be a multiple of 2^K");
    const std::size_t blocks = rho.dim / q;
    ComplexMatrix out(q, q);
    for (std::size_t n = 0; n < q; ++n)
        for (std::size_t m = 0; m < q; ++m) {
            cplx sum(0.0, 0.0);
            for (std::size_t b = 0; b < blocks; ++b)
                sum += rho.matrix.at(b * q + n, b * q + m);
            out.at(n, m) = sum;
        }
    return out;
}

ComplexMatrix reconstruct_double_sum(const DensityOperator& rho, int K) {
    if (K < 1 || K > 16)
        throw ValidationError("reconstruction formula: K must lie in [1, 16]");
    const std::size_t q = std::size_t{1} << K;
    if (rho.dim == 0 || rho.dim % q != 0)
        throw ValidationError("reconstruction formula: dimension must be a multiple of 2^K");
    const std::size_t blocks = rho.dim / q;
    ComplexMatrix out(q, q);
    for (std::size_t n = 0; n < q; ++n)
        for (std::size_t m = 0; m < q; ++m) {
            cplx sum(0.0, 0.0);
            for (std::size_t bn = 0; bn < blocks; ++bn)
                for (std::size_t bm = 0; bm < blocks; ++bm)
                    sum += rho.matrix.at(bn * q + n, bm * q + m);
            out.at(n, m) = sum;
        }
    return out;
}

std::vector<ComplexMatrix> forward_step_states(const DensityOperator& rho,
                                               const ProtocolConfig& cfg) {
    cfg.validate();
    check_joint_size(cfg.D * cfg.register_dim());
    ConversionDiagnostics diag;
    const DensityOperator in = gate_input(rho, cfg, diag);
    const std::size_t q = cfg.register_dim();
    ComplexMatrix initial(cfg.D * q, cfg.D * q);
    for (std::size_t f = 0; f < cfg.D; ++f)
        for (std::size_t g = 0; g < cfg.D; ++g)
            initial.at(f * q, g * q) = in.matrix.at(f, g);
    std::vector<ComplexMatrix> steps;
    steps.reserve(static_cast<std::size_t>(cfg.K));
    run_joint(initial, cfg, StepPlan{Direction::forward, cfg.K}, diag, &steps);
    return steps;
}

EntropyReport entropy_balance(const ConversionResult& result, const DensityOperator& input) {
    return entropy_balance(result.per_qubit, result.residue_field, input);
}

ConversionReport roundtrip(const DensityOperator& rho, const ProtocolConfig& cfg) {
    cfg.validate();
    ConversionReport rep;
    rep.forward = convert_forward(rho, cfg);
    const DensityOperator in = cfg.renormalize_input ? rho.renormalized() : rho;

    ReverseResult rev = convert_reverse(rep.forward.qubit_register, cfg);
    rep.reconstruction = std::move(rev.field);

    rep.fidelity = uhlmann_fidelity(in.renormalized(), rep.reconstruction.renormalized());
    rep.vacuum_fidelity = vacuum_closeness(rep.forward.residue_field);
    rep.entropies = entropy_balance(rep.forward, in);

    const std::size_t q = cfg.register_dim();
    const ComplexMatrix single = reconstruct_single_sum(in, cfg.K);
    ComplexMatrix embedded(cfg.D, cfg.D);
    for (std::size_t n = 0; n < q; ++n)
        for (std::size_t m = 0; m < q; ++m) embedded.at(n, m) = single.at(n, m);
    rep.single_sum_delta = max_abs_diff(embedded, rep.reconstruction.matrix);

    const ComplexMatrix dbl = reconstruct_double_sum(in, cfg.K);
    rep.double_sum_trace_deviation = std::abs(trace(dbl) - trace(in.matrix));

    if (cfg.engine != Engine::joint && cfg.D * q <= 1024) {
        ProtocolConfig jcfg = cfg;
        jcfg.engine = Engine::joint;
        const ConversionResult oracle = convert_forward(rho, jcfg);
        CrossCheck cc;
        cc.register_delta =
            max_abs_diff(oracle.qubit_register.matrix, rep.forward.qubit_register.matrix);
        cc.residue_delta =
            max_abs_diff(oracle.residue_field.matrix, rep.forward.residue_field.matrix);
        rep.cross_check = cc;
    }
    return rep;
}

} // namespace fockbit
