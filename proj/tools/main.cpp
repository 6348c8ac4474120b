#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "feasflow/presets.hpp"
#include "feasflow/runner.hpp"

namespace {

/// Resolve --config / --preset into a loaded configuration.
feasflow::ExperimentConfig resolve(const std::string& config_path, const std::string& preset_name) {
    if (!config_path.empty()) {
        return feasflow::load_config(config_path);
    }
    return feasflow::preset(preset_name);
}

void add_source_options(CLI::App* cmd, std::string& config_path, std::string& preset_name) {
    auto* config_opt = cmd->add_option("--config", config_path, "Path to a JSON experiment config");
    auto* preset_opt =
        cmd->add_option("--preset", preset_name,
                        "Shipped preset: example1 | example2 | infeasible1d | consensus-only");
    config_opt->excludes(preset_opt);
    cmd->callback([cmd]() {
        if (cmd->count("--config") == 0 && cmd->count("--preset") == 0) {
            throw CLI::RequiredError("--config or --preset");
        }
    });
}

bool parse_grid(const std::string& spec, double& start, double& stop, int& count) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        return false;
    }
    try {
        start = std::stod(spec.substr(0, first));
        stop = std::stod(spec.substr(first + 1, second - first - 1));
        count = std::stoi(spec.substr(second + 1));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-time multi-agent flows for convex inequalities and "
                 "inequality-constrained optimization over switching digraphs"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_path;

    auto* simulate = app.add_subcommand("simulate", "Run an experiment and write its CSV trace");
    add_source_options(simulate, config_path, preset_name);
    simulate->add_option("--out", out_path, "Output CSV path (overrides the config)");

    auto* check = app.add_subcommand("check-graph", "Report balance, persistent edges, "
                                                    "connectivity and contraction constants");
    add_source_options(check, config_path, preset_name);

    std::string pairs_spec = "0:20:5";
    double bound_step = 1e-3;
    auto* verify = app.add_subcommand("verify-bound", "Check the transition-matrix deviation "
                                                      "bound on a grid of (s, t) pairs");
    add_source_options(verify, config_path, preset_name);
    verify->add_option("--pairs", pairs_spec, "Time grid start:stop:count (default 0:20:5)");
    verify->add_option("--step", bound_step, "Integration step (default 1e-3)");

    auto* write = app.add_subcommand("write-config", "Write a preset or normalized config as JSON");
    add_source_options(write, config_path, preset_name);
    write->add_option("--out", out_path, "Output JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        feasflow::ExperimentConfig config = resolve(config_path, preset_name);
        if (simulate->parsed()) {
            if (!out_path.empty()) {
                config.output_path = out_path;
            }
            return feasflow::run_experiment(config, std::cout, std::cerr);
        }
        if (check->parsed()) {
            return feasflow::check_graph(config, std::cout);
        }
        if (verify->parsed()) {
            double start = 0.0, stop = 20.0;
            int count = 5;
            if (!parse_grid(pairs_spec, start, stop, count)) {
                std::cerr << "invalid --pairs; expected start:stop:count\n";
                return feasflow::kExitValidation;
            }
            const auto pairs = feasflow::pair_grid(start, stop, count);
            return feasflow::verify_bound(config, pairs, bound_step, std::cout, std::cerr);
        }
        feasflow::save_config(config, out_path);
        std::cout << "wrote " << out_path << "\n";
        return feasflow::kExitOk;
    } catch (const feasflow::ParseError& e) {
        std::cerr << e.what() << "\n";
        return feasflow::kExitValidation;
    } catch (const feasflow::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return feasflow::kExitValidation;
    } catch (const feasflow::UnknownPreset& e) {
        std::cerr << e.what() << "\n";
        return feasflow::kExitValidation;
    } catch (const feasflow::Error& e) {
        std::cerr << e.what() << "\n";
        return feasflow::kExitRuntime;
    }
}
