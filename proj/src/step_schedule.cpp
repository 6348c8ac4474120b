#include "feasflow/step_schedule.hpp"

namespace feasflow {

StepSizeSchedule::StepSizeSchedule(Harmonic g) : v_(g) {
    if (!(g.a0 > 0.0) || !(g.b0 > 0.0)) {
        throw Error("Harmonic gain: a0 and b0 must be positive");
    }
}

StepSizeSchedule::StepSizeSchedule(GeneralizedHarmonic g) : v_(g) {
    if (!(g.a0 > 0.0) || !(g.b0 > 0.0) || !(g.scale > 0.0)) {
        throw Error("GeneralizedHarmonic gain: a0, b0 and scale must be positive");
    }
}

StepSizeSchedule::StepSizeSchedule(Constant g) : v_(g) {
    if (g.c < 0.0) {
        throw Error("Constant gain: value must be nonnegative");
    }
}

double StepSizeSchedule::value(double t) const {
    if (t < 0.0) {
        throw Error("StepSizeSchedule: time must be nonnegative");
    }
    return std::visit(
        [t](const auto& g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Harmonic>) {
                return g.a0 / (t + g.b0);
            } else if constexpr (std::is_same_v<T, GeneralizedHarmonic>) {
                return g.a0 / (g.scale * t + g.b0);
            } else {
                return g.c;
            }
        },
        v_);
}

GainDiagnostics StepSizeSchedule::validate() const {
    return std::visit(
        [](const auto& g) -> GainDiagnostics {
            using T = std::decay_t<decltype(g)>;
            GainDiagnostics d;
            if constexpr (std::is_same_v<T, Harmonic> || std::is_same_v<T, GeneralizedHarmonic>) {
                // a0/(s t + b0): positive, decreasing, log-divergent
                // integral, integrable square (all analytic).
                d.positive = true;
                d.non_increasing = true;
                d.divergent_integral = true;
                d.square_integrable = true;
            } else {
                d.positive = g.c > 0.0;
                d.non_increasing = true;
                d.divergent_integral = g.c > 0.0;
                d.square_integrable = g.c == 0.0;
            }
            return d;
        },
        v_);
}

bool StepSizeSchedule::operator==(const StepSizeSchedule& other) const {
    if (v_.index() != other.v_.index()) {
        return false;
    }
    return std::visit(
        [&other](const auto& g) -> bool {
            using T = std::decay_t<decltype(g)>;
            const auto& h = std::get<T>(other.v_);
            if constexpr (std::is_same_v<T, Harmonic>) {
                return g.a0 == h.a0 && g.b0 == h.b0;
            } else if constexpr (std::is_same_v<T, GeneralizedHarmonic>) {
                return g.a0 == h.a0 && g.b0 == h.b0 && g.scale == h.scale;
            } else {
                return g.c == h.c;
            }
        },
        v_);
}

}  // namespace feasflow
