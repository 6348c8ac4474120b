#include "feasflow/analysis.hpp"

#include <cmath>

namespace feasflow {

namespace {

void require_nonempty(const Trace& trace) {
    if (trace.empty()) {
        throw Error("analysis: trace is empty");
    }
}

}  // namespace

std::vector<Eigen::VectorXd> consensus_residuals(const Trace& trace) {
    require_nonempty(trace);
    std::vector<Eigen::VectorXd> out;
    out.reserve(trace.sample_count());
    for (const auto& x : trace.states()) {
        const Eigen::RowVectorXd mean = x.colwise().mean();
        Eigen::VectorXd r(x.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            r(i) = (x.row(i) - mean).norm();
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<double> infeasibility(const Trace& trace) {
    require_nonempty(trace);
    const auto* feas = std::get_if<FeasibilityProblem>(&trace.problem());
    if (feas == nullptr) {
        throw ModeMismatch("infeasibility is defined for feasibility-mode traces");
    }
    std::vector<double> out;
    out.reserve(trace.sample_count());
    for (const auto& x : trace.states()) {
        double q = 0.0;
        for (int i = 0; i < feas->agent_count(); ++i) {
            q += std::max(feas->constraints()[i].value(x.row(i).transpose()), 0.0);
        }
        out.push_back(q);
    }
    return out;
}

std::vector<double> diameter(const Trace& trace) {
    require_nonempty(trace);
    std::vector<double> out;
    out.reserve(trace.sample_count());
    for (const auto& x : trace.states()) {
        double d = 0.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
                d = std::max(d, (x.row(i) - x.row(j)).norm());
            }
        }
        out.push_back(d);
    }
    return out;
}

std::vector<Eigen::VectorXd> coordinate_ranges(const Trace& trace) {
    require_nonempty(trace);
    std::vector<Eigen::VectorXd> out;
    out.reserve(trace.sample_count());
    for (const auto& x : trace.states()) {
        out.push_back((x.colwise().maxCoeff() - x.colwise().minCoeff()).transpose());
    }
    return out;
}

double lagrangian(const ConstrainedOptProblem& problem, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& z) {
    if (z.size() != problem.agent_count()) {
        throw DimensionMismatch("lagrangian: one multiplier per agent required");
    }
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (z(i) < -1e-12 || z(i) > problem.multiplier_caps()(i) + 1e-12) {
            throw OutOfBox("lagrangian: multiplier " + std::to_string(i + 1) + " outside its box");
        }
    }
    double total = 0.0;
    for (int i = 0; i < problem.agent_count(); ++i) {
        total += problem.costs()[i].value(x) + z(i) * problem.constraints()[i].value(x);
    }
    return total;
}

std::optional<double> detect_consensus(const Trace& trace, double eps) {
    require_nonempty(trace);
    if (!(eps > 0.0)) {
        throw Error("detect_consensus: eps must be positive");
    }
    const auto diam = diameter(trace);
    // Walk backwards: the answer is the start of the maximal suffix with
    // diameter <= eps.
    if (diam.back() > eps) {
        return std::nullopt;
    }
    std::size_t k = diam.size();
    while (k > 0 && diam[k - 1] <= eps) {
        --k;
    }
    return trace.times()[k];
}

BoundReport verify_contraction_bound(const GraphSchedule& schedule,
                                     const std::vector<std::pair<double, double>>& sample_pairs,
                                     double h) {
    BoundReport report;
    report.constants = contraction_constants(schedule);
    const double n = schedule.agent_count();
    report.all_pass = true;
    const double integration_tol = 1e-9;
    for (const auto& [s, t] : sample_pairs) {
        const Eigen::MatrixXd phi = transition_matrix(schedule, s, t, h);
        BoundSample sample;
        sample.s = s;
        sample.t = t;
        sample.max_deviation = (phi.array() - 1.0 / n).abs().maxCoeff();
        sample.bound = report.constants.H * std::pow(report.constants.gamma, t - s);
        sample.slack = sample.bound - sample.max_deviation;
        sample.pass = sample.max_deviation <= sample.bound + integration_tol;
        report.all_pass = report.all_pass && sample.pass;
        report.samples.push_back(sample);
    }
    return report;
}

}  // namespace feasflow
