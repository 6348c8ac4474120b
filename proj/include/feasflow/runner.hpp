#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "feasflow/config.hpp"

namespace feasflow {

/// Process exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Execute the configured run, write the CSV trace and print a summary
/// (consensus time at eps = 1e-2, final diameter, final violation or
/// Lagrangian, contraction constants). Returns an exit code instead of
/// throwing.
int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Print per-segment balance verdicts, the persistent-edge graph with its
/// delta and window, the connectivity verdict and (when defined) the
/// contraction constants. Verdicts, not errors: always returns kExitOk for
/// a structurally valid config.
int check_graph(const ExperimentConfig& config, std::ostream& out);

/// Evaluate the transition-matrix deviation bound on a grid of (s, t)
/// pairs and print one line per pair. Returns kExitOk only if every pair
/// passes.
int verify_bound(const ExperimentConfig& config, const std::vector<std::pair<double, double>>& pairs,
                 double h, std::ostream& out, std::ostream& err);

/// All ordered pairs (s <= t) from `count` evenly spaced times in
/// [start, stop]; the default grid for verify_bound.
std::vector<std::pair<double, double>> pair_grid(double start, double stop, int count);

}  // namespace feasflow
