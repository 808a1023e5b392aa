#pragma once

#include <memory>

#include "tailsim/rl/env.hpp"
#include "tailsim/sim/dynamics.hpp"
#include "tailsim/sim/trajectory.hpp"
#include "tailsim/staged/stage_spec.hpp"

namespace tailsim::staged {

// Domain randomization drawn per episode; exposed to the critic and the
// privileged encoder.
struct EpisodeRandomization {
    double friction_scale = 1.0;
    double mass_scale = 1.0;
};

// Gym-style wrapper around the planar simulator for one stage. Actions are
// normalized to [-1,1]-ish units and scaled onto the actuator limits; the
// policy runs at every control_decimation-th physics step.
class StageEnv : public rl::Env {
  public:
    StageEnv(StageSpec spec, sim::ScenarioConfig scenario, sim::RobotParams params,
             std::uint64_t seed);

    int obs_dim() const override { return spec_.obs_dim(); }
    int priv_dim() const override { return spec_.priv_dim(); }
    int action_dim() const override { return spec_.action_dim(); }

    void reset() override;
    void step(const Eigen::VectorXd& action, double& reward, bool& done) override;

    Eigen::VectorXd observation() const override;
    Eigen::VectorXd privileged() const override;

    // Evaluation hooks.
    void set_auto_reset(bool v) { auto_reset_ = v; }
    void set_fixed_command(const sim::CommandSample& cmd);
    void clear_fixed_command() { fixed_command_.reset(); }
    void set_recorder(sim::TrajectoryRecord* rec) { recorder_ = rec; }
    const sim::SimState& state() const { return state_; }
    const sim::CommandSample& command() const { return command_; }
    const StageSpec& spec() const { return spec_; }
    const sim::ScenarioConfig& scenario() const { return scenario_; }
    bool episode_done() const { return episode_done_; }
    int control_steps() const { return control_step_; }
    int max_control_steps() const;
    const std::vector<sim::PerturbationEvent>& events() const { return events_; }
    double lin_tracking_error() const;   // mean L2 over the episode so far
    double yaw_tracking_error() const;

    static constexpr int kControlDecimation = 4;  // 50 Hz policy at dt = 5 ms

  private:
    void sample_command();
    void schedule_perturbations();
    bool perturbation_active() const;

    StageSpec spec_;
    sim::ScenarioConfig scenario_;
    sim::RobotParams base_params_;
    sim::RobotParams params_;  // after per-episode randomization
    Rng rng_;
    sim::SimState state_;
    sim::CommandSample command_;
    std::optional<sim::CommandSample> fixed_command_;
    std::vector<sim::PerturbationEvent> events_;
    EpisodeRandomization randomization_;
    Eigen::VectorXd prev_action_;
    int control_step_ = 0;
    bool episode_done_ = false;
    bool auto_reset_ = true;
    sim::TrajectoryRecord* recorder_ = nullptr;
    double lin_err_accum_ = 0.0;
    double yaw_err_accum_ = 0.0;
};

}  // namespace tailsim::staged
