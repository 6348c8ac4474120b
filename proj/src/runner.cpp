#include "feasflow/runner.hpp"

#include <iomanip>

#include "feasflow/analysis.hpp"
#include "feasflow/csv.hpp"
#include "feasflow/simulate.hpp"

namespace feasflow {

namespace {

void print_constants(const GraphSchedule& schedule, std::ostream& out) {
    try {
        const ContractionConstants c = contraction_constants(schedule);
        const auto old_precision = out.precision(15);
        out << "contraction constants: lambda = " << c.lambda << ", gamma = " << c.gamma
            << ", H = " << c.H << ", delta = " << c.delta << ", T = " << c.T << "\n";
        out.precision(old_precision);
    } catch (const DegenerateNetwork&) {
        out << "contraction constants: undefined for a single agent\n";
    } catch (const NotBalanced&) {
        out << "contraction constants: unavailable (schedule is not balanced)\n";
    } catch (const NotConnected&) {
        out << "contraction constants: unavailable (delta-graph is not strongly connected)\n";
    }
}

}  // namespace

int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (!config.name.empty()) {
            out << "experiment: " << config.name << "\n";
        }
        if (!config.description.empty()) {
            out << config.description << "\n";
        }
        const Trace trace = run(config.schedule, config.problem, config.gain, config.sim,
                                config.initial_state());

        const std::string out_path = config.output_path.empty() ? "trace.csv" : config.output_path;
        write_trace_csv(trace, out_path);
        out << "trace: " << trace.sample_count() << " samples -> " << out_path << "\n";

        out << std::setprecision(10);
        const auto diam = diameter(trace);
        if (auto t_consensus = detect_consensus(trace, 1e-2)) {
            out << "consensus time (diameter <= 1e-2): t = " << *t_consensus << "\n";
        } else {
            out << "consensus time (diameter <= 1e-2): not reached\n";
        }
        out << "final diameter: " << diam.back() << "\n";

        const auto& x_final = trace.states().back();
        const Eigen::RowVectorXd mean = x_final.colwise().mean();
        out << "final mean state:";
        for (Eigen::Index mu = 0; mu < mean.size(); ++mu) {
            out << ' ' << mean(mu);
        }
        out << "\n";

        if (trace.mode() == SimMode::feasibility) {
            const auto q = infeasibility(trace);
            out << "final total violation Q: " << q.back() << "\n";
        } else if (trace.mode() == SimMode::optimization) {
            const auto& opt = std::get<ConstrainedOptProblem>(trace.problem());
            const double f_val =
                lagrangian(opt, mean.transpose(), trace.multipliers().back());
            out << "final Lagrangian at mean state: " << f_val << "\n";
        }
        print_constants(config.schedule, out);
        return kExitOk;
    } catch (const ValidationError& e) {
        err << e.what() << "\n";
        return kExitValidation;
    } catch (const Interrupted& e) {
        err << "run aborted: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const Error& e) {
        err << "run failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int check_graph(const ExperimentConfig& config, std::ostream& out) {
    const GraphSchedule& schedule = config.schedule;
    out << "agents: " << schedule.agent_count() << ", period: " << schedule.period() << "\n";
    bool all_balanced = true;
    for (std::size_t s = 0; s < schedule.segments().size(); ++s) {
        const auto& seg = schedule.segments()[s];
        const GraphSchedule single({seg});
        const bool balanced = is_balanced(single, 1e-9);
        all_balanced = all_balanced && balanced;
        out << "segment " << s + 1 << " (duration " << seg.duration
            << "): balanced = " << (balanced ? "yes" : "no") << "\n";
    }
    out << "schedule balanced: " << (all_balanced ? "yes" : "no") << "\n";

    const DeltaGraph dg = delta_graph(schedule);
    out << "persistent edges (delta = " << dg.delta << ", T = " << dg.T << "):";
    for (const auto& e : dg.edges) {
        out << " " << e.from + 1 << "->" << e.to + 1;
    }
    out << "\n";
    const bool connected = is_strongly_connected(dg.edges, schedule.agent_count());
    out << "strongly connected: " << (connected ? "yes" : "no") << "\n";
    print_constants(schedule, out);
    return kExitOk;
}

int verify_bound(const ExperimentConfig& config, const std::vector<std::pair<double, double>>& pairs,
                 double h, std::ostream& out, std::ostream& err) {
    try {
        const BoundReport report = verify_contraction_bound(config.schedule, pairs, h);
        out << std::setprecision(12);
        out << "lambda = " << report.constants.lambda << ", gamma = " << report.constants.gamma
            << ", H = " << report.constants.H << "\n";
        out << std::setprecision(8);
        out << std::left << std::setw(10) << "s" << std::setw(10) << "t" << std::setw(16)
            << "max|Phi-1/n|" << std::setw(16) << "bound" << std::setw(16) << "slack"
            << "verdict\n";
        for (const auto& sample : report.samples) {
            out << std::left << std::setw(10) << sample.s << std::setw(10) << sample.t
                << std::setw(16) << sample.max_deviation << std::setw(16) << sample.bound
                << std::setw(16) << sample.slack << (sample.pass ? "pass" : "FAIL") << "\n";
        }
        out << "overall: " << (report.all_pass ? "pass" : "FAIL") << "\n";
        return report.all_pass ? kExitOk : kExitRuntime;
    } catch (const DegenerateNetwork& e) {
        err << "verify-bound: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NotBalanced& e) {
        err << "verify-bound: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NotConnected& e) {
        err << "verify-bound: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        err << "verify-bound failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

std::vector<std::pair<double, double>> pair_grid(double start, double stop, int count) {
    if (count < 2 || !(stop > start) || start < 0.0) {
        throw Error("pair grid: need start >= 0, stop > start, count >= 2");
    }
    std::vector<double> times(count);
    for (int k = 0; k < count; ++k) {
        times[k] = start + (stop - start) * k / (count - 1);
    }
    std::vector<std::pair<double, double>> pairs;
    for (int a = 0; a < count; ++a) {
        for (int b = a; b < count; ++b) {
            pairs.emplace_back(times[a], times[b]);
        }
    }
    return pairs;
}

}  // namespace feasflow
