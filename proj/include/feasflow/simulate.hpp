#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "feasflow/graph.hpp"
#include "feasflow/problem.hpp"
#include "feasflow/step_schedule.hpp"
#include "feasflow/trace.hpp"

namespace feasflow {

/// Agent states x (rows) and, in optimization mode, multipliers z at time t.
struct SimState {
    double t = 0.0;
    StateMatrix x;
    std::optional<Eigen::VectorXd> z;
};

struct SimConfig {
    double h = 1e-3;        // base step; must not exceed the shortest segment
    double t_end = 0.0;     // horizon
    int record_stride = 1;  // record every k-th executed step
};

/// Right-hand side of the feasibility flow: row i is
///   sum_j a_ij (x_j - x_i) - b * subgradient of max(g_i, 0) at x_i
/// with weights from the schedule's graph at state.t.
StateMatrix feasibility_rhs(const SimState& state, const GraphSchedule& schedule,
                            const FeasibilityProblem& problem, double b_val);

/// Velocity restriction keeping a multiplier inside [0, z_cap]: zero when
/// pushing outward at either face, v otherwise. Throws OutOfBox when z is
/// outside the box by more than 1e-12.
double tangent_cone_projection(double z, double z_cap, double v);

/// Right-hand side of the constrained-optimization flow: the state part is
///   consensus - b (subgrad f_i + z_i subgrad g_i),
/// the multiplier part is the projected velocity of b * g_i(x_i).
std::pair<StateMatrix, Eigen::VectorXd> optimization_rhs(const SimState& state,
                                                         const GraphSchedule& schedule,
                                                         const ConstrainedOptProblem& problem,
                                                         double b_val);

/// One explicit forward-Euler step of length h_eff with the gain sampled at
/// the step's left endpoint; multipliers are clamped back into their box
/// after the update. The caller must not step across a graph-switch instant
/// (run subdivides automatically).
SimState step(const SimState& state, const GraphSchedule& schedule, const Problem& problem,
              const StepSizeSchedule& gain, double h_eff);

/// Integrate from `initial` to config.t_end, subdividing steps at every
/// switch instant, recording the initial state, every record_stride-th
/// executed step and the final state. Deterministic for fixed inputs.
/// Throws Interrupted when a non-finite value appears.
Trace run(const GraphSchedule& schedule, const Problem& problem, const StepSizeSchedule& gain,
          const SimConfig& config, const SimState& initial);

}  // namespace feasflow
