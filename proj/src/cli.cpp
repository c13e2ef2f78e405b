#include "fockbit/cli.hpp"

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "fockbit/errors.hpp"
#include "fockbit/kernels.hpp"
#include "fockbit/metrics.hpp"
#include "fockbit/numerics.hpp"

namespace fockbit::cli {

namespace {

using nlohmann::json;

double parse_double(const std::string& text, const char* what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || errno == ERANGE || !std::isfinite(v))
        throw UsageError(std::string(what) + ": cannot parse number from '" + text + "'");
    while (*end == ' ') ++end;
    if (*end != '\0')
        throw UsageError(std::string(what) + ": trailing characters in '" + text + "'");
    return v;
}

long long parse_integer(const std::string& text, const char* what) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() || errno == ERANGE)
        throw UsageError(std::string(what) + ": cannot parse integer from '" + text + "'");
    while (*end == ' ') ++end;
    if (*end != '\0')
        throw UsageError(std::string(what) + ": trailing characters in '" + text + "'");
    return v;
}

// "<re>" or "<re><+/-><im>i", e.g. "1.5", "0.5+0.25i", "-1-2i".
cplx parse_complex(const std::string& text, const char* what) {
    errno = 0;
    char* end = nullptr;
    const double re = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || errno == ERANGE)
        throw UsageError(std::string(what) + ": cannot parse '" + text + "'");
    if (*end == '\0') return cplx(re, 0.0);
    if (*end != '+' && *end != '-')
        throw UsageError(std::string(what) + ": expected '+' or '-' before the imaginary part");
    char* end2 = nullptr;
    errno = 0;
    const double im = std::strtod(end, &end2);
    if (end2 == end || errno == ERANGE || *end2 != 'i' || *(end2 + 1) != '\0')
        throw UsageError(std::string(what) + ": imaginary part must look like '+0.25i'");
    return cplx(re, im);
}

std::string require_key(const std::string& rest, const char* key, const char* scheme) {
    const std::string prefix = std::string(key) + "=";
    if (rest.rfind(prefix, 0) != 0)
        throw UsageError(std::string(scheme) + " spec must look like " + scheme + ":" + prefix +
                         "<value>");
    return rest.substr(prefix.size());
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError("state file: complex entries must be [re, im] pairs");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

std::string iso_utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::joint: return "joint";
        case Engine::mixture: return "mixture";
        default: return "formula";
    }
}

const char* command_name(Command c) {
    switch (c) {
        case Command::convert: return "convert";
        case Command::reverse: return "reverse";
        case Command::roundtrip: return "roundtrip";
        case Command::sweep: return "sweep";
        default: return "validate";
    }
}

const char* kind_name(StateSpec::Kind k) {
    switch (k) {
        case StateSpec::Kind::thermal: return "thermal";
        case StateSpec::Kind::coherent: return "coherent";
        case StateSpec::Kind::fock: return "fock";
        default: return "file";
    }
}

json state_meta(const StateSpec& spec) {
    json j;
    j["kind"] = kind_name(spec.kind);
    switch (spec.kind) {
        case StateSpec::Kind::thermal: j["mean_photons"] = spec.mean_photons; break;
        case StateSpec::Kind::coherent: j["alpha"] = complex_to_json(spec.alpha); break;
        case StateSpec::Kind::fock: j["m"] = spec.fock_m; break;
        case StateSpec::Kind::file: j["path"] = spec.path; break;
    }
    return j;
}

json meta_block(const RunSpec& rs, const StateSpec* state) {
    json meta;
    meta["command"] = command_name(rs.command);
    meta["version"] = kVersion;
    meta["kernel_backend"] = kern::active_backend();
    meta["engine"] = engine_name(rs.engine);
    meta["K"] = rs.K;
    meta["dim"] = rs.dim;
    meta["renormalize"] = rs.renormalize;
    meta["timestamp"] = iso_utc_now();
    if (state) meta["state"] = state_meta(*state);
    return meta;
}

json qubit_to_json(const QubitState& q) {
    json j;
    j["alpha"] = q.alpha;
    j["beta"] = complex_to_json(q.beta);
    j["entropy_bits"] = q.entropy_bits();
    return j;
}

json diagnostics_to_json(const ConversionDiagnostics& d) {
    json j;
    j["input_tail_mass"] = d.input_tail_mass;
    j["guard_band_mass"] = d.guard_band_mass;
    j["guard_block_mass"] = d.guard_block_mass;
    j["trace_drift"] = d.trace_drift;
    j["residue_off_support_mass"] = d.residue_off_support_mass;
    return j;
}

json entropies_to_json(const EntropyReport& e) {
    json j;
    j["per_qubit"] = e.per_qubit;
    j["residue"] = e.residue;
    j["input"] = e.input;
    j["balance_gap"] = e.balance_gap;
    return j;
}

// Closed-form reference block for analytic input states. File states get none.
json closed_form_block(const StateSpec& spec, int K) {
    json j;
    const std::size_t q = std::size_t{1} << K;
    switch (spec.kind) {
        case StateSpec::Kind::thermal: {
            const double v = thermal_v(spec.mean_photons);
            const ThermalClosedForms cf = thermal_closed_forms(v, K);
            j["fidelity"] = cf.fidelity;
            j["qubit_entropies"] = cf.qubit_entropies;
            j["residue_entropy"] = cf.residue_entropy;
            json weights = json::array();
            for (int k = 1; k <= K; ++k)
                weights.push_back(1.0 / (1.0 + std::pow(v, std::ldexp(1.0, k - 1))));
            j["qubit_ground_weights"] = weights;
            break;
        }
        case StateSpec::Kind::coherent:
            j["vacuum_fidelity"] = coherent_fprime_closed(std::abs(spec.alpha), K);
            break;
        case StateSpec::Kind::fock: {
            const bool inside = spec.fock_m >= 0 &&
                                static_cast<unsigned long long>(spec.fock_m) < q;
            j["fidelity"] = inside ? 1.0 : 0.0;
            if (inside) {
                json bits = json::array();
                for (int k = 1; k <= K; ++k) bits.push_back((spec.fock_m >> (k - 1)) & 1);
                j["register_bits"] = bits;
            }
            break;
        }
        case StateSpec::Kind::file:
            break;
    }
    return j;
}

ProtocolConfig make_config(const RunSpec& rs) {
    ProtocolConfig cfg;
    cfg.K = rs.K;
    cfg.D = rs.dim;
    cfg.engine = rs.engine;
    cfg.renormalize_input = rs.renormalize;
    cfg.validate();
    return cfg;
}

void maybe_emit_state(const RunSpec& rs, const DensityOperator& field) {
    if (rs.emit_state_path.empty()) return;
    json j;
    j["dim"] = field.dim;
    j["entries"] = matrix_to_json(field.matrix);
    write_file_atomic(rs.emit_state_path, j.dump(2) + "\n");
}

json run_convert(const RunSpec& rs, const StateSpec& spec) {
    const ProtocolConfig cfg = make_config(rs);
    const DensityOperator rho = build_state(spec, cfg.D, rs.renormalize);
    const ConversionResult res = convert_forward(rho, cfg);
    const DensityOperator input_used = rs.renormalize ? rho.renormalized() : rho;

    json metrics;
    json qubits = json::array();
    for (const QubitState& q : res.per_qubit) qubits.push_back(qubit_to_json(q));
    metrics["per_qubit"] = qubits;
    metrics["vacuum_fidelity"] = vacuum_closeness(res.residue_field);
    metrics["entropies"] = entropies_to_json(entropy_balance(res, input_used));
    metrics["register_trace"] = trace(res.qubit_register.matrix).real();
    metrics["diagnostics"] = diagnostics_to_json(res.diagnostics);

    json rep;
    rep["meta"] = meta_block(rs, &spec);
    rep["metrics"] = metrics;
    const json cf = closed_form_block(spec, rs.K);
    if (!cf.empty()) rep["closed_form"] = cf;
    if (rs.emit_matrices) {
        rep["matrices"]["register"] = matrix_to_json(res.qubit_register.matrix);
        rep["matrices"]["residue"] = matrix_to_json(res.residue_field.matrix);
    }
    maybe_emit_state(rs, res.residue_field);
    return rep;
}

json run_reverse(const RunSpec& rs) {
    const ProtocolConfig cfg = make_config(rs);
    std::string path = rs.state_spec;
    if (path.rfind("file:", 0) == 0) path = path.substr(5);
    if (path.empty())
        throw UsageError("reverse needs a register file (--state file:<path>)");
    const QubitRegisterState reg = load_register(path);
    if (reg.K != rs.K)
        throw ValidationError("register file K does not match --qubits");
    const ReverseResult res = convert_reverse(reg, cfg);

    const double field_trace = res.field.trace_real();
    const double final_trace = trace(res.final_qubits.matrix).real();
    json metrics;
    metrics["field_trace"] = field_trace;
    metrics["field_entropy_bits"] = von_neumann_entropy(res.field.renormalized());
    metrics["register_entropy_bits"] = von_neumann_entropy(reg.matrix);
    metrics["final_ground_weight"] = res.final_qubits.matrix.at(0, 0).real() / final_trace;
    metrics["final_excited_mass"] =
        final_trace - res.final_qubits.matrix.at(0, 0).real();

    json rep;
    rep["meta"] = meta_block(rs, nullptr);
    rep["meta"]["state"] = {{"kind", "register_file"}, {"path", path}};
    rep["metrics"] = metrics;
    if (rs.emit_matrices) {
        rep["matrices"]["field"] = matrix_to_json(res.field.matrix);
        rep["matrices"]["final_register"] = matrix_to_json(res.final_qubits.matrix);
    }
    maybe_emit_state(rs, res.field);
    return rep;
}

json run_roundtrip(const RunSpec& rs, const StateSpec& spec) {
    const ProtocolConfig cfg = make_config(rs);
    const DensityOperator rho = build_state(spec, cfg.D, rs.renormalize);
    const ConversionReport rep = roundtrip(rho, cfg);

    json metrics;
    metrics["fidelity"] = rep.fidelity;
    metrics["vacuum_fidelity"] = rep.vacuum_fidelity;
    metrics["entropies"] = entropies_to_json(rep.entropies);
    json qubits = json::array();
    for (const QubitState& q : rep.forward.per_qubit) qubits.push_back(qubit_to_json(q));
    metrics["per_qubit"] = qubits;
    metrics["single_sum_delta"] = rep.single_sum_delta;
    metrics["double_sum_trace_deviation"] = rep.double_sum_trace_deviation;
    metrics["diagnostics"] = diagnostics_to_json(rep.forward.diagnostics);

    json out;
    out["meta"] = meta_block(rs, &spec);
    out["metrics"] = metrics;
    if (rep.cross_check) {
        out["cross_check"] = {{"register_delta", rep.cross_check->register_delta},
                              {"residue_delta", rep.cross_check->residue_delta}};
    }
    const json cf = closed_form_block(spec, rs.K);
    if (!cf.empty()) out["closed_form"] = cf;
    if (rs.emit_matrices) {
        out["matrices"]["register"] = matrix_to_json(rep.forward.qubit_register.matrix);
        out["matrices"]["residue"] = matrix_to_json(rep.forward.residue_field.matrix);
        out["matrices"]["reconstruction"] = matrix_to_json(rep.reconstruction.matrix);
    }
    maybe_emit_state(rs, rep.reconstruction);
    return out;
}

json run_validate(const RunSpec& rs, const StateSpec& spec) {
    const ProtocolConfig cfg = make_config(rs);
    const DensityOperator rho = build_state(spec, cfg.D, rs.renormalize);
    const double defect = hermiticity_defect(rho.matrix);
    if (defect > kHermitianTol)
        throw ValidationError("state is not Hermitian within 1e-10");

    const std::size_t q = cfg.register_dim();
    double band = 0.0;
    for (std::size_t m = cfg.D - q; m < cfg.D; ++m) band += rho.matrix.at(m, m).real();
    if (cfg.D >= 2 * q && band > kGuardBandAbsTol + kGuardBandTailFactor * rho.tail_mass)
        throw NumericGuardError("state parks too much weight against the truncation edge");

    json metrics;
    metrics["trace"] = rho.trace_real();
    metrics["tail_mass"] = rho.tail_mass;
    metrics["hermiticity_defect"] = defect;
    metrics["guard_band_mass"] = band;
    metrics["entropy_bits"] = von_neumann_entropy(rho.renormalized());

    json rep;
    rep["meta"] = meta_block(rs, &spec);
    rep["metrics"] = metrics;
    rep["valid"] = true;
    return rep;
}

// One sweep row: a roundtrip at K with the window widened to fit 8 levels per extracted
// pattern (and rounded up to a multiple of 2^K).
struct SweepRow {
    int K = 0;
    std::size_t D = 0;
    json report;
};

std::size_t sweep_window(std::size_t base_dim, int K) {
    const std::size_t q = std::size_t{1} << K;
    std::size_t want = 8 * q;
    if (base_dim > want) want = base_dim;
    return ((want + q - 1) / q) * q;
}

json sweep_row_json(const SweepRow& row) {
    const json& m = row.report.at("metrics");
    json j;
    j["K"] = row.K;
    j["D"] = row.D;
    j["fidelity"] = m.at("fidelity");
    j["vacuum_fidelity"] = m.at("vacuum_fidelity");
    j["input_entropy"] = m.at("entropies").at("input");
    j["residue_entropy"] = m.at("entropies").at("residue");
    j["balance_gap"] = m.at("entropies").at("balance_gap");
    j["single_sum_delta"] = m.at("single_sum_delta");
    return j;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "K,D,fidelity,vacuum_fidelity,input_entropy,residue_entropy,"
                      "balance_gap,single_sum_delta\n";
    for (const SweepRow& row : rows) {
        const json j = sweep_row_json(row);
        out += std::to_string(row.K);
        out += ',';
        out += std::to_string(row.D);
        for (const char* key : {"fidelity", "vacuum_fidelity", "input_entropy",
                                "residue_entropy", "balance_gap", "single_sum_delta"}) {
            out += ',';
            out += format_csv_value(j.at(key).get<double>());
        }
        out += '\n';
    }
    return out;
}

struct FirstError {
    std::mutex mu;
    int row = -1;
    int exit_code = kExitOk;
    std::string message;

    void offer(int r, int code, const std::string& msg) {
        std::lock_guard<std::mutex> lock(mu);
        if (row < 0 || r < row) {
            row = r;
            exit_code = code;
            message = msg;
        }
    }
};

json run_sweep(const RunSpec& rs, const StateSpec& spec, std::vector<SweepRow>& rows) {
    if (rs.sweep_begin < 1 || rs.sweep_end > 16 || rs.sweep_begin > rs.sweep_end)
        throw UsageError("sweep range must satisfy 1 <= begin <= end <= 16");
    const int count = rs.sweep_end - rs.sweep_begin + 1;
    rows.assign(static_cast<std::size_t>(count), SweepRow{});

    int jobs = rs.jobs < 1 ? 1 : rs.jobs;
    if (jobs > count) jobs = count;

    std::atomic<int> next{0};
    FirstError first;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            RunSpec row_spec = rs;
            row_spec.command = Command::roundtrip;
            row_spec.K = rs.sweep_begin + i;
            row_spec.dim = sweep_window(rs.dim, row_spec.K);
            row_spec.out_path.clear();
            row_spec.emit_state_path.clear();
            row_spec.emit_matrices = false;
            try {
                SweepRow row;
                row.K = row_spec.K;
                row.D = row_spec.dim;
                row.report = run_roundtrip(row_spec, spec);
                rows[static_cast<std::size_t>(i)] = std::move(row);
            } catch (const UsageError& e) {
                first.offer(i, kExitUsage, e.what());
            } catch (const NumericGuardError& e) {
                first.offer(i, kExitGuard, e.what());
            } catch (const ValidationError& e) {
                first.offer(i, kExitValidation, e.what());
            } catch (const std::exception& e) {
                first.offer(i, kExitGuard, e.what());
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    if (first.row >= 0) {
        const std::string msg = "sweep row K=" + std::to_string(rs.sweep_begin + first.row) +
                                ": " + first.message;
        if (first.exit_code == kExitUsage) throw UsageError(msg);
        if (first.exit_code == kExitValidation) throw ValidationError(msg);
        throw NumericGuardError(msg);
    }

    json rep;
    rep["meta"] = meta_block(rs, &spec);
    json arr = json::array();
    for (const SweepRow& row : rows) arr.push_back(sweep_row_json(row));
    rep["rows"] = arr;
    return rep;
}

} // namespace

StateSpec parse_state_spec(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("state spec needs a scheme, e.g. thermal:N=1 or file:state.json");
    const std::string scheme = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);

    StateSpec spec;
    if (scheme == "thermal") {
        spec.kind = StateSpec::Kind::thermal;
        spec.mean_photons = parse_double(require_key(rest, "N", "thermal"), "thermal N");
        if (spec.mean_photons < 0.0)
            throw UsageError("thermal N must be nonnegative");
    } else if (scheme == "coherent") {
        spec.kind = StateSpec::Kind::coherent;
        spec.alpha = parse_complex(require_key(rest, "alpha", "coherent"), "coherent alpha");
    } else if (scheme == "fock") {
        spec.kind = StateSpec::Kind::fock;
        spec.fock_m = parse_integer(require_key(rest, "m", "fock"), "fock m");
        if (spec.fock_m < 0)
            throw UsageError("fock m must be nonnegative");
    } else if (scheme == "file") {
        spec.kind = StateSpec::Kind::file;
        spec.path = rest;
        if (spec.path.empty())
            throw UsageError("file spec needs a path, e.g. file:state.json");
    } else {
        throw UsageError("unknown state scheme '" + scheme +
                         "' (expected thermal, coherent, fock, or file)");
    }
    return spec;
}

DensityOperator build_state(const StateSpec& spec, std::size_t dim, bool renormalize) {
    switch (spec.kind) {
        case StateSpec::Kind::thermal:
            return thermal_state(spec.mean_photons, dim, renormalize);
        case StateSpec::Kind::coherent:
            return density_from_pure(coherent_state(spec.alpha, dim));
        case StateSpec::Kind::fock: {
            if (spec.fock_m < 0 ||
                static_cast<unsigned long long>(spec.fock_m) >= dim)
                throw ValidationError("fock level lies outside the window [0, D)");
            return density_from_pure(
                number_state(static_cast<std::size_t>(spec.fock_m), dim));
        }
        case StateSpec::Kind::file:
            break;
    }

    const json j = load_json_file(spec.path);
    if (!j.is_object() || !j.contains("dim") || !j.at("dim").is_number_unsigned())
        throw ValidationError("state file needs an unsigned 'dim'");
    const std::size_t file_dim = j.at("dim").get<std::size_t>();
    if (file_dim != dim)
        throw ValidationError("state file dim does not match --dim");

    if (j.contains("amplitudes")) {
        const json& amps = j.at("amplitudes");
        if (!amps.is_array() || amps.size() != file_dim)
            throw ValidationError("state file amplitudes must have dim entries");
        PureState psi;
        psi.dim = file_dim;
        psi.amplitudes.resize(file_dim);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < file_dim; ++i) {
            psi.amplitudes[i] = complex_from_json(amps[i]);
            norm2 += std::norm(psi.amplitudes[i]);
        }
        if (std::abs(norm2 - 1.0) > 1e-6)
            throw ValidationError("state file amplitudes are not normalized within 1e-6");
        const double inv = 1.0 / std::sqrt(norm2);
        for (cplx& a : psi.amplitudes) a *= inv;
        return density_from_pure(psi);
    }
    if (!j.contains("entries"))
        throw ValidationError("state file needs 'entries' or 'amplitudes'");
    const ComplexMatrix m = matrix_from_json(j.at("entries"));
    if (m.rows != file_dim)
        throw ValidationError("state file entries do not match dim");
    DensityOperator rho = validate_density(m);
    if (renormalize) rho = rho.renormalized();
    return rho;
}

QubitRegisterState load_register(const std::string& path) {
    const json j = load_json_file(path);
    if (!j.is_object() || !j.contains("dim") || !j.contains("K") || !j.contains("entries"))
        throw ValidationError("register file needs 'dim', 'K', and 'entries'");
    if (!j.at("K").is_number_integer())
        throw ValidationError("register file K must be an integer");
    const int K = j.at("K").get<int>();
    if (K < 1 || K > 16)
        throw ValidationError("register file K must lie in [1, 16]");
    const std::size_t q = std::size_t{1} << K;
    if (!j.at("dim").is_number_unsigned() || j.at("dim").get<std::size_t>() != q)
        throw ValidationError("register file dim must equal 2^K");
    const ComplexMatrix m = matrix_from_json(j.at("entries"));
    if (m.rows != q || m.cols != q)
        throw ValidationError("register file entries must be 2^K square");
    if (hermiticity_defect(m) > kHermitianTol)
        throw ValidationError("register file matrix is not Hermitian within 1e-10");
    if (std::abs(trace(m).real() - 1.0) > 1e-9)
        throw ValidationError("register file trace must be 1 within 1e-9");
    return QubitRegisterState{K, m};
}

RunOutcome run(const RunSpec& spec) {
    RunOutcome out;
    try {
        json rep;
        std::vector<SweepRow> rows;
        StateSpec state;
        const bool needs_state = spec.command != Command::reverse;
        if (needs_state) {
            if (spec.state_spec.empty())
                throw UsageError("missing --state");
            state = parse_state_spec(spec.state_spec);
        }
        switch (spec.command) {
            case Command::convert: rep = run_convert(spec, state); break;
            case Command::reverse: rep = run_reverse(spec); break;
            case Command::roundtrip: rep = run_roundtrip(spec, state); break;
            case Command::sweep: rep = run_sweep(spec, state, rows); break;
            case Command::validate: rep = run_validate(spec, state); break;
        }
        out.report = rep;
        if (spec.format == OutputFormat::csv) {
            if (spec.command != Command::sweep)
                throw UsageError("csv output is only available for sweep");
            out.output = sweep_csv(rows);
        } else {
            out.output = rep.dump(2) + "\n";
        }
        if (!spec.out_path.empty()) write_file_atomic(spec.out_path, out.output);
    } catch (const UsageError& e) {
        out.exit_code = kExitUsage;
        out.output = std::string("error: ") + e.what() + "\n";
    } catch (const NumericGuardError& e) {
        out.exit_code = kExitGuard;
        out.output = std::string("error: ") + e.what() + "\n";
    } catch (const ValidationError& e) {
        out.exit_code = kExitValidation;
        out.output = std::string("error: ") + e.what() + "\n";
    } catch (const std::exception& e) {
        out.exit_code = kExitGuard;
        out.output = std::string("internal error: ") + e.what() + "\n";
    }
    return out;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t jx = 0; jx < m.cols; ++jx) row.push_back(complex_to_json(m.at(i, jx)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw ValidationError("matrix JSON must be a nonempty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0)
        throw ValidationError("matrix JSON rows must be nonempty arrays");
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ValidationError("matrix JSON rows must all have the same length");
        for (std::size_t k = 0; k < cols; ++k) m.at(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

std::string format_csv_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ValidationError("cannot write file: " + tmp);
        out << content;
        out.flush();
        if (!out)
            throw ValidationError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ValidationError("cannot replace file: " + path);
    }
}

std::pair<int, int> parse_sweep_range(const std::string& text) {
    if (text.rfind("K=", 0) != 0)
        throw UsageError("sweep range must look like K=1..6");
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos || dots < 2)
        throw UsageError("sweep range must look like K=1..6");
    const long long a = parse_integer(text.substr(2, dots - 2), "sweep begin");
    const long long b = parse_integer(text.substr(dots + 2), "sweep end");
    if (a < 1 || b > 16 || a > b)
        throw UsageError("sweep range must satisfy 1 <= begin <= end <= 16");
    return {static_cast<int>(a), static_cast<int>(b)};
}

} // namespace fockbit::cli
