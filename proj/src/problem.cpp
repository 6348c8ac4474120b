#include "feasflow/problem.hpp"

namespace feasflow {

FeasibilityProblem::FeasibilityProblem(int dimension, std::vector<ConvexScalarFunction> constraints)
    : dimension_(dimension), constraints_(std::move(constraints)) {
    if (dimension_ < 1) {
        throw Error("FeasibilityProblem: dimension must be >= 1");
    }
    if (constraints_.empty()) {
        throw Error("FeasibilityProblem: needs at least one constraint");
    }
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        if (constraints_[i].dimension() != dimension_) {
            throw DimensionMismatch("constraint " + std::to_string(i + 1) +
                                    " does not accept dimension " + std::to_string(dimension_));
        }
    }
}

ConstrainedOptProblem::ConstrainedOptProblem(int dimension, std::vector<ConvexScalarFunction> costs,
                                             std::vector<ConvexScalarFunction> constraints,
                                             Eigen::VectorXd multiplier_caps)
    : dimension_(dimension),
      costs_(std::move(costs)),
      constraints_(std::move(constraints)),
      caps_(std::move(multiplier_caps)) {
    if (dimension_ < 1) {
        throw Error("ConstrainedOptProblem: dimension must be >= 1");
    }
    if (costs_.empty() || costs_.size() != constraints_.size() ||
        static_cast<Eigen::Index>(costs_.size()) != caps_.size()) {
        throw Error("ConstrainedOptProblem: costs, constraints and caps must have equal size >= 1");
    }
    for (std::size_t i = 0; i < costs_.size(); ++i) {
        if (costs_[i].dimension() != dimension_ || constraints_[i].dimension() != dimension_) {
            throw DimensionMismatch("agent " + std::to_string(i + 1) +
                                    " functions do not accept dimension " +
                                    std::to_string(dimension_));
        }
        if (!(caps_(static_cast<Eigen::Index>(i)) > 0.0)) {
            throw Error("ConstrainedOptProblem: multiplier caps must be positive");
        }
    }
}

SimMode mode_of(const Problem& p) {
    if (std::holds_alternative<ConsensusOnlyProblem>(p)) {
        return SimMode::consensus_only;
    }
    if (std::holds_alternative<FeasibilityProblem>(p)) {
        return SimMode::feasibility;
    }
    return SimMode::optimization;
}

int dimension_of(const Problem& p) {
    return std::visit(
        [](const auto& prob) -> int {
            using T = std::decay_t<decltype(prob)>;
            if constexpr (std::is_same_v<T, ConsensusOnlyProblem>) {
                return prob.dimension;
            } else {
                return prob.dimension();
            }
        },
        p);
}

int agent_count_of(const Problem& p) {
    return std::visit(
        [](const auto& prob) -> int {
            using T = std::decay_t<decltype(prob)>;
            if constexpr (std::is_same_v<T, ConsensusOnlyProblem>) {
                return -1;
            } else {
                return prob.agent_count();
            }
        },
        p);
}

bool operator==(const ConsensusOnlyProblem& a, const ConsensusOnlyProblem& b) {
    return a.dimension == b.dimension;
}

bool problems_equal(const Problem& a, const Problem& b) {
    if (a.index() != b.index()) {
        return false;
    }
    return std::visit(
        [&b](const auto& pa) -> bool {
            using T = std::decay_t<decltype(pa)>;
            return pa == std::get<T>(b);
        },
        a);
}

}  // namespace feasflow
