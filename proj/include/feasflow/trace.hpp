#pragma once

#include <Eigen/Dense>
#include <vector>

#include "feasflow/graph.hpp"
#include "feasflow/problem.hpp"

namespace feasflow {

/// Recorded time series of a run: strictly increasing times, one state
/// matrix (agents x dimension) per time, multipliers in optimization mode.
/// Carries the problem and schedule so metrics can be evaluated later.
class Trace {
  public:
    Trace(GraphSchedule schedule, Problem problem)
        : schedule_(std::move(schedule)), problem_(std::move(problem)) {}

    const GraphSchedule& schedule() const { return schedule_; }
    const Problem& problem() const { return problem_; }
    SimMode mode() const { return mode_of(problem_); }

    const std::vector<double>& times() const { return times_; }
    const std::vector<StateMatrix>& states() const { return states_; }
    const std::vector<Eigen::VectorXd>& multipliers() const { return multipliers_; }

    std::size_t sample_count() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    int agent_count() const { return states_.empty() ? 0 : static_cast<int>(states_.front().rows()); }
    int dimension() const { return states_.empty() ? 0 : static_cast<int>(states_.front().cols()); }

    void append(double t, const StateMatrix& x) {
        check_monotone(t);
        times_.push_back(t);
        states_.push_back(x);
    }

    void append(double t, const StateMatrix& x, const Eigen::VectorXd& z) {
        check_monotone(t);
        times_.push_back(t);
        states_.push_back(x);
        multipliers_.push_back(z);
    }

  private:
    void check_monotone(double t) const {
        if (!times_.empty() && t <= times_.back()) {
            throw Error("Trace: times must be strictly increasing");
        }
    }

    GraphSchedule schedule_;
    Problem problem_;
    std::vector<double> times_;
    std::vector<StateMatrix> states_;
    std::vector<Eigen::VectorXd> multipliers_;
};

}  // namespace feasflow
