#pragma once

#include <optional>
#include <string>

#include "feasflow/graph.hpp"
#include "feasflow/problem.hpp"
#include "feasflow/simulate.hpp"
#include "feasflow/step_schedule.hpp"

namespace feasflow {

/// Everything needed to execute one experiment: the communication
/// schedule, the per-agent functions, the gain, integration settings and
/// initial conditions. Loaded from a JSON document or built by a preset.
struct ExperimentConfig {
    std::string name;
    std::string description;
    GraphSchedule schedule;
    Problem problem;
    StepSizeSchedule gain;
    SimConfig sim;
    StateMatrix initial_states;
    std::optional<Eigen::VectorXd> initial_multipliers;
    std::string output_path;

    SimState initial_state() const {
        SimState s;
        s.t = 0.0;
        s.x = initial_states;
        s.z = initial_multipliers;
        return s;
    }
};

bool configs_equivalent(const ExperimentConfig& a, const ExperimentConfig& b);

/// Parse and fully validate a config file. Structural problems raise
/// ParseError; semantic problems raise ValidationError carrying every
/// violation with its field path.
ExperimentConfig load_config(const std::string& path);

/// Same, from an in-memory JSON document.
ExperimentConfig parse_config(const std::string& json_text);

std::string config_to_json(const ExperimentConfig& config);
void save_config(const ExperimentConfig& config, const std::string& path);

}  // namespace feasflow
