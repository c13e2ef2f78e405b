// Command pipeline behind the fockbit binary: state-spec mini-language, report assembly,
// JSON/CSV emission, atomic file writes, and the sweep runner. Kept in the library so the
// pieces are unit-testable without spawning processes.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "fockbit/protocol.hpp"

namespace fockbit::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { convert, reverse, roundtrip, sweep, validate };
enum class OutputFormat { json, csv };

// Exit codes: 0 success, 1 usage, 2 input validation, 3 numerical guard/tolerance.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitGuard = 3;

// Usage-level problem (bad spec syntax, unknown scheme, malformed sweep range).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Parsed `--state` value. Schemes: thermal:N=<float>, coherent:alpha=<re>[<+/-im>i],
// fock:m=<int>, file:<path>.
struct StateSpec {
    enum class Kind { thermal, coherent, fock, file };
    Kind kind = Kind::thermal;
    double mean_photons = 0.0; // thermal
    cplx alpha = 0.0;          // coherent
    long long fock_m = 0;      // fock (range-checked against the window later)
    std::string path;          // file
};
StateSpec parse_state_spec(const std::string& text);

// Materialize the spec in a D-dimensional window. File states may hold a density matrix
// ({dim, entries}) or a pure state ({dim, amplitudes}).
DensityOperator build_state(const StateSpec& spec, std::size_t dim, bool renormalize);

// Register file for `reverse`: {dim, K, entries} with dim = 2^K.
QubitRegisterState load_register(const std::string& path);

struct RunSpec {
    Command command = Command::roundtrip;
    std::string state_spec;
    int K = 1;
    std::size_t dim = 64;
    Engine engine = Engine::mixture;
    bool renormalize = false;
    std::string out_path;        // empty: stdout
    OutputFormat format = OutputFormat::json;
    bool emit_matrices = false;
    std::string emit_state_path; // reverse/roundtrip: write the output field state here
    int sweep_begin = 1;
    int sweep_end = 1;
    int jobs = 1;
    std::uint64_t seed = 0;
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::string output;      // rendered report (JSON or CSV) or error message
    nlohmann::json report;   // structured form when applicable
};

// Execute a run spec end to end (no process exit; the binary maps exit_code itself).
RunOutcome run(const RunSpec& spec);

// Serialization helpers (exposed for tests).
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
std::string format_csv_value(double v); // 12 significant digits
// Atomically replace `path` (write temp file, rename). Throws ValidationError on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);
// Parse "K=<a>..<b>".
std::pair<int, int> parse_sweep_range(const std::string& text);

} // namespace fockbit::cli
