#include "feasflow/convex.hpp"

#include <cmath>

namespace feasflow {

namespace {

Affine checked(Affine f) {
    if (f.c.size() < 1) {
        throw Error("Affine: coefficient vector must be nonempty");
    }
    return f;
}

ConvexQuadratic checked(ConvexQuadratic f) {
    if (f.Q.rows() != f.Q.cols() || f.Q.rows() != f.c.size()) {
        throw Error("ConvexQuadratic: Q must be square and match c");
    }
    if (!f.Q.isApprox(f.Q.transpose(), 1e-12)) {
        throw Error("ConvexQuadratic: Q must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.Q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw Error("ConvexQuadratic: Q must be positive semidefinite");
    }
    return f;
}

HuberQuadratic checked(HuberQuadratic f) {
    if (!(f.weight > 0.0) || !(f.radius > 0.0)) {
        throw Error("HuberQuadratic: weight and radius must be positive");
    }
    return f;
}

MaxOfAffine checked(MaxOfAffine f) {
    if (f.pieces.empty()) {
        throw Error("MaxOfAffine: needs at least one piece");
    }
    const Eigen::Index m = f.pieces.front().c.size();
    if (m < 1) {
        throw Error("MaxOfAffine: coefficient vectors must be nonempty");
    }
    for (const auto& piece : f.pieces) {
        if (piece.c.size() != m) {
            throw Error("MaxOfAffine: all pieces must share the dimension");
        }
    }
    return f;
}

}  // namespace

FunctionEvaluator::FunctionEvaluator(const Affine& f)
    : kind_(Kind::affine),
      m_(static_cast<int>(f.c.size())),
      d_(f.d),
      coeffs_(f.c.begin(), f.c.end()) {}

FunctionEvaluator::FunctionEvaluator(const ConvexQuadratic& f)
    : kind_(Kind::quadratic), m_(static_cast<int>(f.c.size())), d_(f.d) {
    coeffs_.reserve(static_cast<std::size_t>(m_) * m_ + m_);
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) {
            coeffs_.push_back(f.Q(i, j));
        }
    }
    for (int i = 0; i < m_; ++i) {
        coeffs_.push_back(f.c(i));
    }
}

FunctionEvaluator::FunctionEvaluator(const HuberQuadratic& f)
    : kind_(Kind::huber), m_(1), weight_(f.weight), radius_(f.radius) {}

FunctionEvaluator::FunctionEvaluator(const MaxOfAffine& f)
    : kind_(Kind::max_affine),
      m_(static_cast<int>(f.pieces.front().c.size())),
      pieces_(static_cast<int>(f.pieces.size())) {
    coeffs_.reserve(static_cast<std::size_t>(pieces_) * (m_ + 1));
    for (const auto& piece : f.pieces) {
        coeffs_.insert(coeffs_.end(), piece.c.begin(), piece.c.end());
        coeffs_.push_back(piece.d);
    }
}

double FunctionEvaluator::value(const double* x) const {
    switch (kind_) {
        case Kind::affine: {
            double s = 0.0;
            for (int k = 0; k < m_; ++k) {
                s += coeffs_[k] * x[k];
            }
            return s + d_;
        }
        case Kind::quadratic: {
            const double* q = coeffs_.data();
            const double* c = q + static_cast<std::size_t>(m_) * m_;
            double quad = 0.0;
            double lin = 0.0;
            for (int i = 0; i < m_; ++i) {
                double row = 0.0;
                for (int j = 0; j < m_; ++j) {
                    row += q[i * m_ + j] * x[j];
                }
                quad += x[i] * row;
                lin += c[i] * x[i];
            }
            return 0.5 * quad + lin + d_;
        }
        case Kind::huber: {
            const double v = x[0];
            if (std::abs(v) <= radius_) {
                return 0.5 * weight_ * v * v;
            }
            return weight_ * radius_ * std::abs(v) - 0.5 * weight_ * radius_ * radius_;
        }
        case Kind::max_affine: {
            const int stride = m_ + 1;
            double best = 0.0;
            for (int p = 0; p < pieces_; ++p) {
                const double* c = coeffs_.data() + static_cast<std::size_t>(p) * stride;
                double v = 0.0;
                for (int k = 0; k < m_; ++k) {
                    v += c[k] * x[k];
                }
                v += c[m_];
                if (p == 0 || v > best) {
                    best = v;
                }
            }
            return best;
        }
    }
    return 0.0;  // unreachable
}

void FunctionEvaluator::subgradient(const double* x, double* out) const {
    switch (kind_) {
        case Kind::affine:
            for (int k = 0; k < m_; ++k) {
                out[k] = coeffs_[k];
            }
            return;
        case Kind::quadratic: {
            const double* q = coeffs_.data();
            const double* c = q + static_cast<std::size_t>(m_) * m_;
            for (int i = 0; i < m_; ++i) {
                double row = 0.0;
                for (int j = 0; j < m_; ++j) {
                    row += q[i * m_ + j] * x[j];
                }
                out[i] = row + c[i];
            }
            return;
        }
        case Kind::huber: {
            const double v = x[0];
            if (std::abs(v) <= radius_) {
                out[0] = weight_ * v;
            } else {
                out[0] = (v > 0.0 ? 1.0 : -1.0) * weight_ * radius_;
            }
            return;
        }
        case Kind::max_affine: {
            const int stride = m_ + 1;
            int best_piece = 0;
            double best = 0.0;
            for (int p = 0; p < pieces_; ++p) {
                const double* c = coeffs_.data() + static_cast<std::size_t>(p) * stride;
                double v = 0.0;
                for (int k = 0; k < m_; ++k) {
                    v += c[k] * x[k];
                }
                v += c[m_];
                if (p == 0 || v > best) {
                    best = v;
                    best_piece = p;
                }
            }
            const double* c = coeffs_.data() + static_cast<std::size_t>(best_piece) * stride;
            for (int k = 0; k < m_; ++k) {
                out[k] = c[k];
            }
            return;
        }
    }
}

ConvexScalarFunction::ConvexScalarFunction(Affine f)
    : v_(checked(std::move(f))),
      evaluator_(std::get<Affine>(v_)),
      dimension_(evaluator_.dimension()) {}

ConvexScalarFunction::ConvexScalarFunction(ConvexQuadratic f)
    : v_(checked(std::move(f))),
      evaluator_(std::get<ConvexQuadratic>(v_)),
      dimension_(evaluator_.dimension()) {}

ConvexScalarFunction::ConvexScalarFunction(HuberQuadratic f)
    : v_(checked(f)), evaluator_(std::get<HuberQuadratic>(v_)), dimension_(1) {}

ConvexScalarFunction::ConvexScalarFunction(MaxOfAffine f)
    : v_(checked(std::move(f))),
      evaluator_(std::get<MaxOfAffine>(v_)),
      dimension_(evaluator_.dimension()) {}

void ConvexScalarFunction::check_dimension(Eigen::Ref<const Eigen::VectorXd> x) const {
    if (x.size() != dimension_) {
        throw DimensionMismatch("function expects dimension " + std::to_string(dimension_) +
                                ", got " + std::to_string(x.size()));
    }
}

double ConvexScalarFunction::value(Eigen::Ref<const Eigen::VectorXd> x) const {
    check_dimension(x);
    return evaluator_.value(x.data());
}

Eigen::VectorXd ConvexScalarFunction::subgradient(Eigen::Ref<const Eigen::VectorXd> x) const {
    check_dimension(x);
    Eigen::VectorXd g(dimension_);
    evaluator_.subgradient(x.data(), g.data());
    return g;
}

void ConvexScalarFunction::subgradient_into(Eigen::Ref<const Eigen::VectorXd> x,
                                            Eigen::Ref<Eigen::VectorXd> out) const {
    check_dimension(x);
    if (out.size() != dimension_) {
        throw DimensionMismatch("subgradient output buffer has the wrong size");
    }
    evaluator_.subgradient(x.data(), out.data());
}

std::optional<double> ConvexScalarFunction::subgradient_bound() const {
    return std::visit(
        [](const auto& f) -> std::optional<double> {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Affine>) {
                return f.c.norm();
            } else if constexpr (std::is_same_v<T, ConvexQuadratic>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, HuberQuadratic>) {
                return f.weight * f.radius;
            } else {
                static_assert(std::is_same_v<T, MaxOfAffine>);
                double best = 0.0;
                for (const auto& piece : f.pieces) {
                    best = std::max(best, piece.c.norm());
                }
                return best;
            }
        },
        v_);
}

bool ConvexScalarFunction::operator==(const ConvexScalarFunction& other) const {
    if (v_.index() != other.v_.index()) {
        return false;
    }
    return std::visit(
        [&other](const auto& f) -> bool {
            using T = std::decay_t<decltype(f)>;
            const auto& g = std::get<T>(other.v_);
            if constexpr (std::is_same_v<T, Affine>) {
                return f.c == g.c && f.d == g.d;
            } else if constexpr (std::is_same_v<T, ConvexQuadratic>) {
                return f.Q == g.Q && f.c == g.c && f.d == g.d;
            } else if constexpr (std::is_same_v<T, HuberQuadratic>) {
                return f.weight == g.weight && f.radius == g.radius;
            } else {
                static_assert(std::is_same_v<T, MaxOfAffine>);
                if (f.pieces.size() != g.pieces.size()) {
                    return false;
                }
                for (std::size_t k = 0; k < f.pieces.size(); ++k) {
                    if (f.pieces[k].c != g.pieces[k].c || f.pieces[k].d != g.pieces[k].d) {
                        return false;
                    }
                }
                return true;
            }
        },
        v_);
}

double PlusFunction::value(Eigen::Ref<const Eigen::VectorXd> x) const {
    return std::max(base_.value(x), 0.0);
}

Eigen::VectorXd PlusFunction::subgradient(Eigen::Ref<const Eigen::VectorXd> x) const {
    if (base_.value(x) > 0.0) {
        return base_.subgradient(x);
    }
    return Eigen::VectorXd::Zero(base_.dimension());
}

}  // namespace feasflow
