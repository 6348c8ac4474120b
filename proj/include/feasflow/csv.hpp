#pragma once

#include <ostream>
#include <string>

#include "feasflow/trace.hpp"

namespace feasflow {

/// Column schema for a trace: "t", per-agent state columns x_<i>_<mu>,
/// multiplier columns z_<i> (optimization mode), residual columns R_<i>,
/// the total violation Q (when the problem has constraints) and the
/// disagreement diameter. Indices are 1-based.
std::string csv_header(const Trace& trace);

/// One row per recorded sample, full double precision.
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv(const Trace& trace, const std::string& path);

}  // namespace feasflow
