#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "feasflow/convex.hpp"
#include "feasflow/errors.hpp"

namespace feasflow {

/// Agent states as rows: row i is agent i's state in R^m. Row-major so a
/// single agent's state is contiguous.
using StateMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class SimMode { consensus_only, feasibility, optimization };

/// Pure consensus flow; no cost or constraint terms.
struct ConsensusOnlyProblem {
    int dimension = 1;
};

/// Find a common point satisfying every agent's inequality g_i(x) <= 0.
class FeasibilityProblem {
  public:
    FeasibilityProblem(int dimension, std::vector<ConvexScalarFunction> constraints);

    int dimension() const { return dimension_; }
    int agent_count() const { return static_cast<int>(constraints_.size()); }
    const std::vector<ConvexScalarFunction>& constraints() const { return constraints_; }

    bool operator==(const FeasibilityProblem&) const = default;

  private:
    int dimension_;
    std::vector<ConvexScalarFunction> constraints_;
};

/// Minimize sum_i f_i(x) subject to g_i(x) <= 0 for every i, with each
/// multiplier confined to [0, cap_i].
class ConstrainedOptProblem {
  public:
    ConstrainedOptProblem(int dimension, std::vector<ConvexScalarFunction> costs,
                          std::vector<ConvexScalarFunction> constraints,
                          Eigen::VectorXd multiplier_caps);

    int dimension() const { return dimension_; }
    int agent_count() const { return static_cast<int>(costs_.size()); }
    const std::vector<ConvexScalarFunction>& costs() const { return costs_; }
    const std::vector<ConvexScalarFunction>& constraints() const { return constraints_; }
    const Eigen::VectorXd& multiplier_caps() const { return caps_; }

    bool operator==(const ConstrainedOptProblem& other) const {
        return dimension_ == other.dimension_ && costs_ == other.costs_ &&
               constraints_ == other.constraints_ && caps_ == other.caps_;
    }

  private:
    int dimension_;
    std::vector<ConvexScalarFunction> costs_;
    std::vector<ConvexScalarFunction> constraints_;
    Eigen::VectorXd caps_;
};

using Problem = std::variant<ConsensusOnlyProblem, FeasibilityProblem, ConstrainedOptProblem>;

SimMode mode_of(const Problem& p);
int dimension_of(const Problem& p);
/// Agent count implied by the problem, or -1 when unconstrained
/// (consensus-only works for any network size).
int agent_count_of(const Problem& p);

bool operator==(const ConsensusOnlyProblem& a, const ConsensusOnlyProblem& b);
bool problems_equal(const Problem& a, const Problem& b);

}  // namespace feasflow
