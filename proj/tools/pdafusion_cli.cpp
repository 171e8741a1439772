// Command-line front end: simulate, montecarlo, check.
//
// Exit codes: 0 success, 2 validation/parse error, 3 numerical degeneracy,
// 4 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pdafusion/errors.hpp"
#include "pdafusion/harness.hpp"
#include "pdafusion/io.hpp"
#include "pdafusion/scenario.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

pdaf::OutputFormat resolve_format(const std::string& flag, const std::string& out) {
    return flag.empty() ? pdaf::format_from_path(out) : pdaf::parse_format(flag);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-radar PDA fusion tracker and Bayesian CRLB toolkit"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::uint64_t run_index = 0;
    int runs = 100;

    auto* simulate = app.add_subcommand("simulate", "Run one seeded simulation and write its run record");
    simulate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--seed", seed, "Master seed (overrides the scenario's master_seed)");
    simulate->add_option("--run-index", run_index, "Run index used in seed derivation");
    simulate->add_option("--out", out_path, "Output path")->required();
    simulate->add_option("--format", format, "csv or json (default: from extension)")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* montecarlo = app.add_subcommand("montecarlo", "Run seeded Monte Carlo replicas and write the summary");
    montecarlo->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    montecarlo->add_option("--runs", runs, "Number of runs")->required()->check(CLI::PositiveNumber);
    montecarlo->add_option("--seed", seed, "Master seed (overrides the scenario's master_seed)");
    montecarlo->add_option("--out", out_path, "Output path")->required();
    montecarlo->add_option("--format", format, "csv or json (default: from extension)")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* check = app.add_subcommand("check", "Validate a scenario file");
    check->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        pdaf::Scenario scenario = pdaf::load_scenario(scenario_path);
        if (seed) {
            scenario.master_seed = *seed;
        }

        if (*check) {
            std::cout << "ok: " << scenario.targets.size() << " targets, " << scenario.radars.size()
                      << " radars, " << scenario.frame_count << " frames, hash "
                      << pdaf::scenario_hash(scenario) << "\n";
            return 0;
        }

        if (*simulate) {
            const pdaf::RunRecord record = pdaf::run_once(scenario, run_index);
            if (record.gate_overlap_warnings > 0) {
                std::cerr << "warning: target gates may overlap in " << record.gate_overlap_warnings
                          << " (frame, radar) pairs; targets should be well separated\n";
            }
            pdaf::emit(record, resolve_format(format, out_path), out_path);
            return 0;
        }

        const pdaf::MonteCarloResult result = pdaf::monte_carlo(scenario, runs);
        const auto& summary = result.summary;
        for (const auto& f : summary.failures) {
            std::cerr << "run failed: " << f << "\n";
        }
        if (summary.aborted) {
            std::cerr << "error: " << summary.runs_failed << " of " << summary.runs_requested
                      << " runs failed (more than 10%); summary aborted\n";
            return kExitNumerical;
        }
        pdaf::emit(summary, resolve_format(format, out_path), out_path);
        return 0;
    } catch (const pdaf::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const pdaf::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const pdaf::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const pdaf::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    }
}
