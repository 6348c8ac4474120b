#pragma once

#include <string>
#include <vector>

#include "feasflow/config.hpp"

namespace feasflow {

/// Balanced periodic schedule switching between two unit-weight directed
/// rings on n agents: segment one connects i -> i+1, segment two i -> i+2
/// (indices mod n). Each ring is balanced; their union is strongly
/// connected, so the persistent-edge graph is too.
GraphSchedule two_ring_schedule(int n, double first_duration, double second_duration);

/// Shipped experiment configurations:
///   example1       nine-agent linear-inequality feasibility run
///   example2       five-agent constrained optimization run
///   infeasible1d   two agents with incompatible scalar inequalities
///   consensus-only nine agents, zero gain, pure consensus
ExperimentConfig preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace feasflow
