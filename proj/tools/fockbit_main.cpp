// fockbit: convert a single-mode field state into qubits (and back) from the shell.
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "fockbit/cli.hpp"
#include "fockbit/errors.hpp"
#include "fockbit/kernels.hpp"

namespace {

fockbit::cli::Command to_command(const std::string& s) {
    using fockbit::cli::Command;
    if (s == "convert") return Command::convert;
    if (s == "reverse") return Command::reverse;
    if (s == "roundtrip") return Command::roundtrip;
    if (s == "sweep") return Command::sweep;
    return Command::validate;
}

fockbit::Engine to_engine(const std::string& s) {
    if (s == "joint") return fockbit::Engine::joint;
    if (s == "formula") return fockbit::Engine::formula;
    return fockbit::Engine::mixture;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Field-to-qubit conversion simulator"};
    app.set_version_flag("--version", fockbit::cli::kVersion);

    std::string command;
    std::string state;
    std::string engine = "mixture";
    std::string format = "json";
    std::string range;
    std::string kernels = "auto";
    fockbit::cli::RunSpec rs;

    app.add_option("command", command, "convert | reverse | roundtrip | sweep | validate")
        ->required()
        ->check(CLI::IsMember({"convert", "reverse", "roundtrip", "sweep", "validate"}));
    app.add_option("--state", state,
                   "input state: thermal:N=<f>, coherent:alpha=<c>, fock:m=<n>, file:<path>; "
                   "for reverse, the register file");
    app.add_option("-K,--qubits", rs.K, "number of qubits to extract")
        ->check(CLI::Range(1, 16));
    app.add_option("-D,--dim", rs.dim, "Fock window size (multiple of 2^K)");
    app.add_option("--engine", engine, "joint | mixture | formula")
        ->check(CLI::IsMember({"joint", "mixture", "formula"}));
    app.add_flag("--renormalize", rs.renormalize, "renormalize the truncated input");
    app.add_option("--out", rs.out_path, "write the report here instead of stdout");
    app.add_option("--format", format, "json | csv (csv: sweep only)")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--emit-matrices", rs.emit_matrices, "include matrices in the JSON report");
    app.add_option("--emit-state", rs.emit_state_path,
                   "write the output field state (JSON) here");
    app.add_option("--range", range, "sweep range, e.g. K=1..6");
    app.add_option("--jobs", rs.jobs, "sweep worker threads")->check(CLI::Range(1, 64));
    app.add_option("--seed", rs.seed, "seed recorded in the report meta");
    CLI::Option* kernels_opt = app.add_option("--kernels", kernels, "auto | scalar | avx2")
                                   ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fockbit::cli::kExitUsage;
    }

    rs.command = to_command(command);
    rs.state_spec = state;
    rs.engine = to_engine(engine);
    rs.format = (format == "csv") ? fockbit::cli::OutputFormat::csv
                                  : fockbit::cli::OutputFormat::json;

    try {
        // Only override the startup selection (best available, or FOCKBIT_KERNELS)
        // when the flag was actually given.
        if (kernels_opt->count() > 0) fockbit::kern::force_backend(kernels);
        if (!range.empty()) {
            const auto [begin, end] = fockbit::cli::parse_sweep_range(range);
            rs.sweep_begin = begin;
            rs.sweep_end = end;
        } else if (rs.command == fockbit::cli::Command::sweep) {
            rs.sweep_begin = 1;
            rs.sweep_end = rs.K;
        }
    } catch (const fockbit::cli::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return fockbit::cli::kExitUsage;
    } catch (const fockbit::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return fockbit::cli::kExitValidation;
    }

    const fockbit::cli::RunOutcome outcome = fockbit::cli::run(rs);
    if (outcome.exit_code != fockbit::cli::kExitOk) {
        std::fputs(outcome.output.c_str(), stderr);
    } else if (rs.out_path.empty()) {
        std::fputs(outcome.output.c_str(), stdout);
    }
    return outcome.exit_code;
}
