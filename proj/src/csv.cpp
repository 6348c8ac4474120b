#include "feasflow/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "feasflow/analysis.hpp"

namespace feasflow {

namespace {

std::string full_precision(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const std::vector<ConvexScalarFunction>* constraints_of(const Problem& problem) {
    if (const auto* feas = std::get_if<FeasibilityProblem>(&problem)) {
        return &feas->constraints();
    }
    if (const auto* opt = std::get_if<ConstrainedOptProblem>(&problem)) {
        return &opt->constraints();
    }
    return nullptr;
}

}  // namespace

std::string csv_header(const Trace& trace) {
    const int n = trace.agent_count();
    const int m = trace.dimension();
    std::string header = "t";
    for (int i = 1; i <= n; ++i) {
        for (int mu = 1; mu <= m; ++mu) {
            header += ",x_" + std::to_string(i) + "_" + std::to_string(mu);
        }
    }
    if (trace.mode() == SimMode::optimization) {
        for (int i = 1; i <= n; ++i) {
            header += ",z_" + std::to_string(i);
        }
    }
    for (int i = 1; i <= n; ++i) {
        header += ",R_" + std::to_string(i);
    }
    if (constraints_of(trace.problem()) != nullptr) {
        header += ",Q";
    }
    header += ",diameter";
    return header;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
    if (trace.empty()) {
        throw Error("write_trace_csv: trace is empty");
    }
    out << csv_header(trace) << "\n";
    const auto residuals = consensus_residuals(trace);
    const auto diameters = diameter(trace);
    const auto* constraints = constraints_of(trace.problem());
    const bool with_z = trace.mode() == SimMode::optimization;
    for (std::size_t k = 0; k < trace.sample_count(); ++k) {
        const auto& x = trace.states()[k];
        out << full_precision(trace.times()[k]);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (Eigen::Index mu = 0; mu < x.cols(); ++mu) {
                out << ',' << full_precision(x(i, mu));
            }
        }
        if (with_z) {
            const auto& z = trace.multipliers()[k];
            for (Eigen::Index i = 0; i < z.size(); ++i) {
                out << ',' << full_precision(z(i));
            }
        }
        for (Eigen::Index i = 0; i < residuals[k].size(); ++i) {
            out << ',' << full_precision(residuals[k](i));
        }
        if (constraints != nullptr) {
            double q = 0.0;
            for (std::size_t i = 0; i < constraints->size(); ++i) {
                q += std::max((*constraints)[i].value(x.row(static_cast<Eigen::Index>(i)).transpose()),
                              0.0);
            }
            out << ',' << full_precision(q);
        }
        out << ',' << full_precision(diameters[k]) << "\n";
    }
}

void write_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open for writing: " + path);
    }
    write_trace_csv(trace, out);
}

}  // namespace feasflow
