#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "feasflow/errors.hpp"

namespace feasflow {

/// c . x + d
struct Affine {
    Eigen::VectorXd c;
    double d = 0.0;
};

/// 0.5 x^T Q x + c . x + d with Q positive semidefinite.
struct ConvexQuadratic {
    Eigen::MatrixXd Q;
    Eigen::VectorXd c;
    double d = 0.0;
};

/// Scalar quadratic bowl with linear extensions beyond |x| = radius:
///   0.5 w x^2            for |x| <= radius
///   w radius |x| - 0.5 w radius^2   outside.
/// Value and slope of the two pieces match at |x| = radius. 1-D only.
struct HuberQuadratic {
    double weight = 1.0;
    double radius = 1.0;
};

/// max_k (c_k . x + d_k); ties resolved toward the lowest index.
struct MaxOfAffine {
    std::vector<Affine> pieces;
};

/// Flat, dispatch-free form of one function variant; the single
/// implementation of the variant formulas, shared by the public accessors
/// and the integrator hot loop. Plain sequential arithmetic so results do
/// not depend on the caller.
class FunctionEvaluator {
  public:
    explicit FunctionEvaluator(const Affine& f);
    explicit FunctionEvaluator(const ConvexQuadratic& f);
    explicit FunctionEvaluator(const HuberQuadratic& f);
    explicit FunctionEvaluator(const MaxOfAffine& f);

    int dimension() const { return m_; }
    double value(const double* x) const;
    /// Writes the m subgradient coordinates at x into out.
    void subgradient(const double* x, double* out) const;

  private:
    enum class Kind { affine, quadratic, huber, max_affine };

    Kind kind_;
    int m_ = 0;
    int pieces_ = 0;
    double d_ = 0.0;
    double weight_ = 0.0;
    double radius_ = 0.0;
    std::vector<double> coeffs_;
};

/// Closed family of convex functions R^m -> R with exact values and
/// subgradients. Convexity is validated at construction. Immutable.
class ConvexScalarFunction {
  public:
    using Variant = std::variant<Affine, ConvexQuadratic, HuberQuadratic, MaxOfAffine>;

    ConvexScalarFunction(Affine f);           // NOLINT(google-explicit-constructor)
    ConvexScalarFunction(ConvexQuadratic f);  // NOLINT(google-explicit-constructor)
    ConvexScalarFunction(HuberQuadratic f);   // NOLINT(google-explicit-constructor)
    ConvexScalarFunction(MaxOfAffine f);      // NOLINT(google-explicit-constructor)

    int dimension() const { return dimension_; }
    const Variant& variant() const { return v_; }

    double value(Eigen::Ref<const Eigen::VectorXd> x) const;

    /// An element of the subdifferential at x; deterministic (kinks use a
    /// fixed tie-break: lowest-index maximizer for MaxOfAffine).
    Eigen::VectorXd subgradient(Eigen::Ref<const Eigen::VectorXd> x) const;

    /// Allocation-free form for integrator hot loops; out must have size m.
    void subgradient_into(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> out) const;

    const FunctionEvaluator& evaluator() const { return evaluator_; }

    /// Exact global bound on the subgradient norm, when one exists:
    /// Affine -> |c|, HuberQuadratic -> weight*radius,
    /// MaxOfAffine -> max_k |c_k|, ConvexQuadratic -> absent.
    std::optional<double> subgradient_bound() const;

    bool operator==(const ConvexScalarFunction& other) const;

  private:
    void check_dimension(Eigen::Ref<const Eigen::VectorXd> x) const;

    Variant v_;
    FunctionEvaluator evaluator_;
    int dimension_ = 0;
};

/// max(base(x), 0): zero exactly on the feasible set of base(x) <= 0.
/// Its subgradient is zero wherever the base value is <= 0 (including the
/// boundary, a fixed selection from the subdifferential).
class PlusFunction {
  public:
    explicit PlusFunction(ConvexScalarFunction base) : base_(std::move(base)) {}

    const ConvexScalarFunction& base() const { return base_; }
    int dimension() const { return base_.dimension(); }

    double value(Eigen::Ref<const Eigen::VectorXd> x) const;
    Eigen::VectorXd subgradient(Eigen::Ref<const Eigen::VectorXd> x) const;

  private:
    ConvexScalarFunction base_;
};

}  // namespace feasflow
