#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "feasflow/graph.hpp"
#include "feasflow/problem.hpp"
#include "feasflow/trace.hpp"

namespace feasflow {

/// Per recorded time, the vector of distances of each agent from the
/// instantaneous mean state: R_i(t) = |x_i(t) - mean(x)(t)|.
std::vector<Eigen::VectorXd> consensus_residuals(const Trace& trace);

/// Per recorded time, the total constraint violation sum_i max(g_i(x_i), 0).
/// Only defined for feasibility-mode traces.
std::vector<double> infeasibility(const Trace& trace);

/// Per recorded time, the largest pairwise Euclidean distance between
/// agent states.
std::vector<double> diameter(const Trace& trace);

/// Per recorded time, the per-coordinate spread max_i x_i - min_i x_i;
/// the scalar form of the disagreement used by the contraction estimate.
std::vector<Eigen::VectorXd> coordinate_ranges(const Trace& trace);

/// F(x, z) = sum_i (f_i(x) + z_i g_i(x)) for a common point x and
/// multipliers z in [0, caps].
double lagrangian(const ConstrainedOptProblem& problem, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& z);

/// Earliest recorded time after which the diameter stays <= eps through the
/// end of the trace; absent when the final diameter still exceeds eps.
std::optional<double> detect_consensus(const Trace& trace, double eps);

/// One sampled (s, t) pair of the transition-matrix deviation check.
struct BoundSample {
    double s = 0.0;
    double t = 0.0;
    double max_deviation = 0.0;  // max_ij |Phi_ij - 1/n|
    double bound = 0.0;          // H * gamma^(t-s)
    double slack = 0.0;          // bound - max_deviation
    bool pass = false;
};

struct BoundReport {
    ContractionConstants constants;
    std::vector<BoundSample> samples;
    bool all_pass = false;
};

/// Check |Phi_ij(t,s) - 1/n| <= H gamma^(t-s) on the given (s, t) pairs,
/// with Phi integrated at step h. Pass allows integration tolerance 1e-9.
/// Throws NotBalanced / NotConnected if the schedule fails the assumptions.
BoundReport verify_contraction_bound(const GraphSchedule& schedule,
                                     const std::vector<std::pair<double, double>>& sample_pairs,
                                     double h);

}  // namespace feasflow
