#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "tailsim/eval/metrics.hpp"
#include "tailsim/rl/agent.hpp"
#include "tailsim/sim/trajectory.hpp"
#include "tailsim/staged/stage_spec.hpp"

namespace tailsim::eval {

struct TrialConfig {
    int trials = 500;
    std::uint64_t seed = 0;
    // Overrides applied on top of the stage spec the policy was trained with.
    std::optional<std::array<double, 2>> force_range;  // perturbation magnitude
    std::optional<sim::ArmMode> arm_mode;
    std::optional<sim::CommandSample> fixed_command;
    std::string log_path;        // per-trial CSV; empty: not written
    std::string trajectory_dir;  // per-trial trajectory CSVs; empty: not written
};

struct TrialSet {
    std::vector<TrialRow> rows;
    Metrics metrics;
};

// Deterministic (mean-action) evaluation over fresh per-trial RNG streams.
// The policy maps (observation, privileged) to an action; agents evaluate
// through their mean with frozen normalizers.
using PolicyFn =
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

TrialSet run_trials(const PolicyFn& policy, const staged::StageSpec& spec,
                    const sim::ScenarioConfig& scenario, const sim::RobotParams& params,
                    const TrialConfig& cfg);

inline PolicyFn agent_policy(const rl::Agent& agent) {
    return [agent](const Eigen::VectorXd& obs, const Eigen::VectorXd& priv) {
        return Eigen::VectorXd(agent.mean_actions(obs, priv));
    };
}

inline TrialSet run_trials(const rl::Agent& agent, const staged::StageSpec& spec,
                           const sim::ScenarioConfig& scenario,
                           const sim::RobotParams& params, const TrialConfig& cfg) {
    return run_trials(agent_policy(agent), spec, scenario, params, cfg);
}

// Steady-state (arm angle, base yaw rate) pairs across a sweep of yaw-rate
// commands: `command_count` commands spanning the spec's yaw range, a few
// late-episode samples each. Input for the arm-yaw correlation.
std::vector<std::pair<double, double>> arm_yaw_sweep(
    const PolicyFn& policy, const staged::StageSpec& spec,
    const sim::ScenarioConfig& scenario, const sim::RobotParams& params,
    double lin_cmd, int command_count, int samples_per_command, std::uint64_t seed);

inline std::vector<std::pair<double, double>> arm_yaw_sweep(
    const rl::Agent& agent, const staged::StageSpec& spec,
    const sim::ScenarioConfig& scenario, const sim::RobotParams& params,
    double lin_cmd, int command_count, int samples_per_command, std::uint64_t seed) {
    return arm_yaw_sweep(agent_policy(agent), spec, scenario, params, lin_cmd,
                         command_count, samples_per_command, seed);
}

// Record one rollout with a command step at `step_time_s` (Turn scenario):
// straight-line travel, then a yaw-rate command. Used by the lag/regression
// analysis.
sim::TrajectoryRecord record_command_step(const PolicyFn& policy,
                                          const staged::StageSpec& spec,
                                          const sim::ScenarioConfig& scenario,
                                          const sim::RobotParams& params,
                                          double step_time_s, double yaw_cmd,
                                          double lin_cmd, std::uint64_t seed);

inline sim::TrajectoryRecord record_command_step(
    const rl::Agent& agent, const staged::StageSpec& spec,
    const sim::ScenarioConfig& scenario, const sim::RobotParams& params,
    double step_time_s, double yaw_cmd, double lin_cmd, std::uint64_t seed) {
    return record_command_step(agent_policy(agent), spec, scenario, params, step_time_s,
                               yaw_cmd, lin_cmd, seed);
}

}  // namespace tailsim::eval
