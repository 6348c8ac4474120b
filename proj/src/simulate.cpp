#include "feasflow/simulate.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace feasflow {

namespace {

struct WeightedEdge {
    int to = 0;    // receiving agent i
    int from = 0;  // sending agent j
    double w = 0.0;
};

// Scan order (i-major, j ascending) fixes the floating-point summation
// order; the public rhs functions and the run engine share these helpers,
// so both produce bit-identical results.
std::vector<WeightedEdge> weighted_edges(const WeightedDigraph& g) {
    std::vector<WeightedEdge> edges;
    const int n = g.agent_count();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double w = g.weight(i, j);
            if (w > 0.0) {
                edges.push_back({i, j, w});
            }
        }
    }
    return edges;
}

// States and rhs are row-major (agent i occupies [i*m, (i+1)*m)).
void consensus_raw(const std::vector<WeightedEdge>& edges, const double* x, double* rhs, int m) {
    for (const auto& e : edges) {
        const double* from = x + static_cast<std::size_t>(e.from) * m;
        const double* to = x + static_cast<std::size_t>(e.to) * m;
        double* r = rhs + static_cast<std::size_t>(e.to) * m;
        for (int mu = 0; mu < m; ++mu) {
            r[mu] += e.w * (from[mu] - to[mu]);
        }
    }
}

void feasibility_raw(const std::vector<const FunctionEvaluator*>& constraints, double b_val,
                     const double* x, double* rhs, int m, double* grad_buf) {
    if (b_val == 0.0) {
        return;
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const double* xi = x + i * m;
        if (constraints[i]->value(xi) > 0.0) {
            constraints[i]->subgradient(xi, grad_buf);
            double* r = rhs + i * m;
            for (int mu = 0; mu < m; ++mu) {
                r[mu] -= b_val * grad_buf[mu];
            }
        }
    }
}

void optimization_raw(const std::vector<const FunctionEvaluator*>& costs,
                      const std::vector<const FunctionEvaluator*>& constraints, const double* caps,
                      double b_val, const double* x, const double* z, double* rhs, double* z_rhs,
                      int m, double* cost_buf, double* cons_buf) {
    for (std::size_t i = 0; i < costs.size(); ++i) {
        const double* xi = x + i * m;
        costs[i]->subgradient(xi, cost_buf);
        constraints[i]->subgradient(xi, cons_buf);
        double* r = rhs + i * m;
        for (int mu = 0; mu < m; ++mu) {
            r[mu] -= b_val * (cost_buf[mu] + z[i] * cons_buf[mu]);
        }
        z_rhs[i] = tangent_cone_projection(z[i], caps[i], b_val * constraints[i]->value(xi));
    }
}

void euler_update_raw(double h_eff, const double* rhs, double* x, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
        x[k] += h_eff * rhs[k];
    }
}

void multiplier_update_raw(double h_eff, const double* z_rhs, const double* caps, double* z,
                           std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
        z[k] = std::min(std::max(z[k] + h_eff * z_rhs[k], 0.0), caps[k]);
    }
}

bool all_finite(const double* values, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
        if (!std::isfinite(values[k])) {
            return false;
        }
    }
    return true;
}

std::vector<const FunctionEvaluator*> evaluators(const std::vector<ConvexScalarFunction>& fs) {
    std::vector<const FunctionEvaluator*> out;
    out.reserve(fs.size());
    for (const auto& f : fs) {
        out.push_back(&f.evaluator());
    }
    return out;
}

// Every gain family evaluates as num / (k*t + den) without changing any
// floating-point result (1.0*t == t and c/(0*t + 1) == c exactly).
struct GainParams {
    double num = 0.0;
    double k = 0.0;
    double den = 1.0;

    explicit GainParams(const StepSizeSchedule& gain) {
        std::visit(
            [this](const auto& g) {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, Harmonic>) {
                    num = g.a0;
                    k = 1.0;
                    den = g.b0;
                } else if constexpr (std::is_same_v<T, GeneralizedHarmonic>) {
                    num = g.a0;
                    k = g.scale;
                    den = g.b0;
                } else {
                    num = g.c;
                    k = 0.0;
                    den = 1.0;
                }
            },
            gain.variant());
    }

    double operator()(double t) const { return num / (k * t + den); }
};

void check_state_shape(const SimState& state, int n, int m) {
    if (state.x.rows() != n || state.x.cols() != m) {
        throw DimensionMismatch("state is " + std::to_string(state.x.rows()) + "x" +
                                std::to_string(state.x.cols()) + ", expected " + std::to_string(n) +
                                "x" + std::to_string(m));
    }
}

void check_schedule(const GraphSchedule& schedule, int agents) {
    if (schedule.agent_count() != agents) {
        throw DimensionMismatch("schedule has " + std::to_string(schedule.agent_count()) +
                                " agents, problem has " + std::to_string(agents));
    }
}

}  // namespace

StateMatrix feasibility_rhs(const SimState& state, const GraphSchedule& schedule,
                            const FeasibilityProblem& problem, double b_val) {
    check_state_shape(state, problem.agent_count(), problem.dimension());
    check_schedule(schedule, problem.agent_count());
    const auto edges = weighted_edges(adjacency_at(schedule, state.t));
    const int m = problem.dimension();
    StateMatrix rhs = StateMatrix::Zero(state.x.rows(), m);
    consensus_raw(edges, state.x.data(), rhs.data(), m);
    std::vector<double> grad_buf(m);
    feasibility_raw(evaluators(problem.constraints()), b_val, state.x.data(), rhs.data(), m,
                    grad_buf.data());
    return rhs;
}

double tangent_cone_projection(double z, double z_cap, double v) {
    if (z < -1e-12 || z > z_cap + 1e-12) {
        throw OutOfBox("multiplier " + std::to_string(z) + " outside [0, " + std::to_string(z_cap) +
                       "]");
    }
    if ((z <= 0.0 && v < 0.0) || (z >= z_cap && v > 0.0)) {
        return 0.0;
    }
    return v;
}

std::pair<StateMatrix, Eigen::VectorXd> optimization_rhs(const SimState& state,
                                                         const GraphSchedule& schedule,
                                                         const ConstrainedOptProblem& problem,
                                                         double b_val) {
    check_state_shape(state, problem.agent_count(), problem.dimension());
    check_schedule(schedule, problem.agent_count());
    if (!state.z.has_value() || state.z->size() != problem.agent_count()) {
        throw DimensionMismatch("optimization mode needs a multiplier per agent");
    }
    const auto edges = weighted_edges(adjacency_at(schedule, state.t));
    const int m = problem.dimension();
    StateMatrix rhs = StateMatrix::Zero(state.x.rows(), m);
    consensus_raw(edges, state.x.data(), rhs.data(), m);
    Eigen::VectorXd z_rhs(problem.agent_count());
    std::vector<double> cost_buf(m), cons_buf(m);
    optimization_raw(evaluators(problem.costs()), evaluators(problem.constraints()),
                     problem.multiplier_caps().data(), b_val, state.x.data(), state.z->data(),
                     rhs.data(), z_rhs.data(), m, cost_buf.data(), cons_buf.data());
    return {std::move(rhs), std::move(z_rhs)};
}

SimState step(const SimState& state, const GraphSchedule& schedule, const Problem& problem,
              const StepSizeSchedule& gain, double h_eff) {
    if (!(h_eff > 0.0)) {
        throw Error("step: h_eff must be positive");
    }
    const double b_val = gain.value(state.t);
    SimState next;
    next.t = state.t + h_eff;
    next.x = state.x;
    if (const auto* feas = std::get_if<FeasibilityProblem>(&problem)) {
        const StateMatrix rhs = feasibility_rhs(state, schedule, *feas, b_val);
        euler_update_raw(h_eff, rhs.data(), next.x.data(), next.x.size());
    } else if (const auto* opt = std::get_if<ConstrainedOptProblem>(&problem)) {
        const auto [rhs_x, rhs_z] = optimization_rhs(state, schedule, *opt, b_val);
        euler_update_raw(h_eff, rhs_x.data(), next.x.data(), next.x.size());
        Eigen::VectorXd z = *state.z;
        multiplier_update_raw(h_eff, rhs_z.data(), opt->multiplier_caps().data(), z.data(),
                              z.size());
        next.z = std::move(z);
    } else {
        check_state_shape(state, schedule.agent_count(),
                          std::get<ConsensusOnlyProblem>(problem).dimension);
        const auto edges = weighted_edges(adjacency_at(schedule, state.t));
        StateMatrix rhs = StateMatrix::Zero(state.x.rows(), state.x.cols());
        consensus_raw(edges, state.x.data(), rhs.data(), static_cast<int>(state.x.cols()));
        euler_update_raw(h_eff, rhs.data(), next.x.data(), next.x.size());
    }
    return next;
}

Trace run(const GraphSchedule& schedule, const Problem& problem, const StepSizeSchedule& gain,
          const SimConfig& config, const SimState& initial) {
    const int n = schedule.agent_count();
    const int m = dimension_of(problem);
    const SimMode mode = mode_of(problem);

    std::vector<std::string> issues;
    if (!(config.h > 0.0)) {
        issues.push_back("sim.step: must be positive");
    } else if (config.h > schedule.min_segment_duration()) {
        issues.push_back("sim.step: exceeds the shortest schedule segment duration");
    }
    if (config.record_stride < 1) {
        issues.push_back("sim.record_stride: must be >= 1");
    }
    if (initial.t < 0.0) {
        issues.push_back("initial state: time must be nonnegative");
    }
    if (config.t_end < initial.t) {
        issues.push_back("sim.t_end: must be >= the initial time");
    }
    const int problem_n = agent_count_of(problem);
    if (problem_n != -1 && problem_n != n) {
        issues.push_back("problem: declares " + std::to_string(problem_n) + " agents, schedule has " +
                         std::to_string(n));
    }
    if (initial.x.rows() != n || initial.x.cols() != m) {
        issues.push_back("initial state: expected " + std::to_string(n) + "x" + std::to_string(m) +
                         ", got " + std::to_string(initial.x.rows()) + "x" +
                         std::to_string(initial.x.cols()));
    }
    if (mode != SimMode::consensus_only && !gain.validate().admissible()) {
        issues.push_back("gain: violates the admissibility conditions (positive, non-increasing, "
                         "divergent integral, square-integrable); only consensus-only mode accepts "
                         "such gains");
    }

    Eigen::VectorXd z;
    const auto* opt = std::get_if<ConstrainedOptProblem>(&problem);
    if (opt != nullptr) {
        z = initial.z.value_or(Eigen::VectorXd::Zero(n));
        if (z.size() != n) {
            issues.push_back("initial multipliers: expected " + std::to_string(n) + " entries");
        } else if ((z.array() < 0.0).any() || (z.array() > opt->multiplier_caps().array()).any()) {
            issues.push_back("initial multipliers: must lie in [0, cap] per agent");
        }
    } else if (initial.z.has_value()) {
        issues.push_back("initial multipliers: only valid in optimization mode");
    }
    if (!issues.empty()) {
        throw ValidationError(std::move(issues));
    }

    Trace trace(schedule, problem);
    StateMatrix x = initial.x;
    auto record = [&](double t) {
        if (opt != nullptr) {
            trace.append(t, x, z);
        } else {
            trace.append(t, x);
        }
    };
    record(initial.t);
    if (config.t_end == initial.t) {
        return trace;
    }

    std::vector<std::vector<WeightedEdge>> segment_edges;
    segment_edges.reserve(schedule.segments().size());
    for (const auto& seg : schedule.segments()) {
        segment_edges.push_back(weighted_edges(seg.graph));
    }

    std::vector<const FunctionEvaluator*> cost_evals, constraint_evals;
    const double* caps = nullptr;
    const auto* feas = std::get_if<FeasibilityProblem>(&problem);
    if (feas != nullptr) {
        constraint_evals = evaluators(feas->constraints());
    } else if (opt != nullptr) {
        cost_evals = evaluators(opt->costs());
        constraint_evals = evaluators(opt->constraints());
        caps = opt->multiplier_caps().data();
    }

    const std::size_t state_size = static_cast<std::size_t>(n) * m;
    std::vector<double> rhs(state_size);
    std::vector<double> z_rhs(n);
    std::vector<double> cost_buf(m), cons_buf(m);
    double* xd = x.data();
    const GainParams b_of(gain);

    ScheduleWalker walker(schedule, initial.t);
    double t = initial.t;
    // Step targets are anchored to the segment start (not accumulated), so
    // roundoff cannot drift steps off the switch instants.
    double anchor = t;
    long steps_in_segment = 0;
    int since_record = 0;
    double seg_end = walker.segment_end();
    const std::vector<WeightedEdge>* edges = &segment_edges[walker.segment_index()];
    const double snap = config.h * 1e-9;
    while (t < config.t_end) {
        double target = anchor + static_cast<double>(steps_in_segment + 1) * config.h;
        if (target >= seg_end - snap) {
            target = seg_end;
        }
        if (target >= config.t_end - snap) {
            target = config.t_end;
        }
        if (target > seg_end) {
            target = seg_end;
        }
        const double h_eff = target - t;
        const double b_val = b_of(t);
        std::fill(rhs.begin(), rhs.end(), 0.0);
        consensus_raw(*edges, xd, rhs.data(), m);
        if (feas != nullptr) {
            feasibility_raw(constraint_evals, b_val, xd, rhs.data(), m, cons_buf.data());
        } else if (opt != nullptr) {
            optimization_raw(cost_evals, constraint_evals, caps, b_val, xd, z.data(), rhs.data(),
                             z_rhs.data(), m, cost_buf.data(), cons_buf.data());
        }
        euler_update_raw(h_eff, rhs.data(), xd, state_size);
        if (opt != nullptr) {
            multiplier_update_raw(h_eff, z_rhs.data(), caps, z.data(), static_cast<std::size_t>(n));
        }
        if (!all_finite(xd, state_size) ||
            (opt != nullptr && !all_finite(z.data(), static_cast<std::size_t>(n)))) {
            throw Interrupted("simulation produced a non-finite state at t = " +
                                  std::to_string(target),
                              target);
        }
        t = target;
        if (++since_record == config.record_stride) {
            record(t);
            since_record = 0;
        }
        if (t >= seg_end) {
            if (t < config.t_end) {
                walker.advance();
                seg_end = walker.segment_end();
                edges = &segment_edges[walker.segment_index()];
            }
            anchor = t;
            steps_in_segment = 0;
        } else {
            ++steps_in_segment;
        }
    }
    if (trace.times().back() != config.t_end) {
        record(config.t_end);
    }
    return trace;
}

}  // namespace feasflow
