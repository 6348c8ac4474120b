#pragma once

#include <variant>

#include "feasflow/errors.hpp"

namespace feasflow {

/// b(t) = a0 / (t + b0)
struct Harmonic {
    double a0 = 1.0;
    double b0 = 1.0;
};

/// b(t) = a0 / (scale * t + b0)
struct GeneralizedHarmonic {
    double a0 = 1.0;
    double b0 = 1.0;
    double scale = 1.0;
};

/// b(t) = c
struct Constant {
    double c = 0.0;
};

/// Per-condition verdicts for the gain admissibility requirements:
/// b(t) > 0, non-increasing, divergent integral, square-integrable.
/// All four hold analytically for the harmonic families; constants fail
/// at least one and are accepted only in consensus-only mode.
struct GainDiagnostics {
    bool positive = false;
    bool non_increasing = false;
    bool divergent_integral = false;
    bool square_integrable = false;

    bool admissible() const {
        return positive && non_increasing && divergent_integral && square_integrable;
    }
};

/// The gain b(t). Restricted to closed families whose admissibility
/// conditions are decidable analytically. Immutable.
class StepSizeSchedule {
  public:
    using Variant = std::variant<Harmonic, GeneralizedHarmonic, Constant>;

    StepSizeSchedule(Harmonic g);             // NOLINT(google-explicit-constructor)
    StepSizeSchedule(GeneralizedHarmonic g);  // NOLINT(google-explicit-constructor)
    StepSizeSchedule(Constant g);             // NOLINT(google-explicit-constructor)

    const Variant& variant() const { return v_; }

    double value(double t) const;
    GainDiagnostics validate() const;

    bool operator==(const StepSizeSchedule& other) const;

  private:
    Variant v_;
};

}  // namespace feasflow
