#include "tailsim/staged/stage_env.hpp"

#include <cmath>

namespace tailsim::staged {

StageEnv::StageEnv(StageSpec spec, sim::ScenarioConfig scenario, sim::RobotParams params,
                   std::uint64_t seed)
    : spec_(std::move(spec)),
      scenario_(scenario),
      base_params_(params),
      params_(params),
      rng_(seed) {
    spec_.validate();
    scenario_.arm_mode = spec_.arm_mode;
    scenario_.episode_length = spec_.episode_length_s;
    scenario_.validate();
    base_params_.validate();
    if (spec_.arm_mode == sim::ArmMode::NoArm) base_params_.arm_mass = 0.0;
    prev_action_ = Eigen::VectorXd::Zero(spec_.action_dim());
    reset();
}

int StageEnv::max_control_steps() const {
    return scenario_.max_steps() / kControlDecimation;
}

void StageEnv::sample_command() {
    if (fixed_command_) {
        command_ = *fixed_command_;
        return;
    }
    if (spec_.commands.standstill_fraction > 0.0 &&
        rng_.uniform(0.0, 1.0) < spec_.commands.standstill_fraction) {
        command_.lin_velocity = 0.0;
    } else {
        command_.lin_velocity = rng_.uniform(spec_.commands.lin_min, spec_.commands.lin_max);
    }
    command_.yaw_rate = rng_.uniform(spec_.commands.yaw_min, spec_.commands.yaw_max);
}

void StageEnv::schedule_perturbations() {
    events_.clear();
    if (!spec_.perturbations) return;
    const auto& pc = *spec_.perturbations;
    double t = rng_.uniform(0.5, std::max(0.6, pc.interval_mean));
    while (t < spec_.episode_length_s) {
        auto ev = sim::sample_perturbation(rng_, pc.force_range, pc.offset_range,
                                           spec_.episode_length_s, pc.duration);
        ev.start_time = t;
        events_.push_back(ev);
        t += rng_.uniform(0.5 * pc.interval_mean, 1.5 * pc.interval_mean);
    }
}

void StageEnv::reset() {
    randomization_.friction_scale = rng_.uniform(0.85, 1.15);
    randomization_.mass_scale = rng_.uniform(0.9, 1.1);
    params_ = base_params_;
    params_.body_mass *= randomization_.mass_scale;
    params_.arm_mass *= randomization_.mass_scale;

    sample_command();
    schedule_perturbations();
    state_ = sim::reset(rng_, scenario_, params_, command_);
    prev_action_.setZero();
    control_step_ = 0;
    episode_done_ = false;
    lin_err_accum_ = 0.0;
    yaw_err_accum_ = 0.0;
}

bool StageEnv::perturbation_active() const {
    for (const auto& ev : events_)
        if (ev.active_at(state_.time)) return true;
    return false;
}

void StageEnv::step(const Eigen::VectorXd& action, double& reward, bool& done) {
    if (action.size() != spec_.action_dim())
        throw StageError("stage env: action dimension mismatch");

    sim::LegProxyWrench leg;
    leg.force = action[0] * params_.leg_proxy_force_limit;
    leg.torque = action[1] * params_.leg_proxy_torque_limit;
    double arm_torque = spec_.actuate_arm ? action[2] * params_.arm_torque_limit : 0.0;

    sim::ScenarioConfig cfg = scenario_;
    cfg.contact.lateral_friction_coefficient *= randomization_.friction_scale;

    done = false;
    for (int i = 0; i < kControlDecimation && !done; ++i) {
        state_ = sim::step_dynamics(state_, arm_torque, leg, events_, params_, cfg);
        if (sim::is_terminated(state_, cfg)) done = true;
    }
    ++control_step_;
    bool time_up = control_step_ >= max_control_steps();

    RewardBreakdown b =
        stage_reward(state_, action, command_, spec_.rewards, cfg.scenario);
    reward = b.total();
    if (done) reward -= 2.0;  // falling costs more than any single-step shaping term

    // tracking-error bookkeeping at control rate (pre-termination states only)
    {
        double cs = std::cos(state_.base_angle), sn = std::sin(state_.base_angle);
        double v_long, v_lat;
        if (cfg.scenario == sim::Scenario::Stabilize) {
            v_long = state_.base_lin_velocity[0];
            v_lat = state_.base_lin_velocity[1];
        } else {
            v_long = state_.base_lin_velocity[0] * cs + state_.base_lin_velocity[1] * sn;
            v_lat = -state_.base_lin_velocity[0] * sn + state_.base_lin_velocity[1] * cs;
        }
        lin_err_accum_ += std::hypot(v_long - command_.lin_velocity, v_lat);
        yaw_err_accum_ += std::abs(state_.base_ang_velocity - command_.yaw_rate);
    }

    if (recorder_)
        recorder_->add(state_, command_.lin_velocity, command_.yaw_rate, leg.force,
                       leg.torque, arm_torque, perturbation_active());

    prev_action_ = action;

    // command resampling mid-episode
    if (!done && !time_up && spec_.commands.resample_interval_s > 0.0) {
        int period = static_cast<int>(spec_.commands.resample_interval_s /
                                      (scenario_.dt * kControlDecimation));
        if (period > 0 && control_step_ % period == 0) sample_command();
    }

    done = done || time_up;
    if (done) {
        episode_done_ = true;
        if (auto_reset_) reset();
    }
}

Eigen::VectorXd StageEnv::observation() const {
    Eigen::VectorXd o(spec_.obs_dim());
    double cs = std::cos(state_.base_angle), sn = std::sin(state_.base_angle);
    double v_long, v_lat, angle;
    if (scenario_.scenario == sim::Scenario::Stabilize) {
        v_long = state_.base_lin_velocity[0];
        v_lat = state_.base_lin_velocity[1];
        angle = state_.base_angle;
    } else {
        v_long = state_.base_lin_velocity[0] * cs + state_.base_lin_velocity[1] * sn;
        v_lat = -state_.base_lin_velocity[0] * sn + state_.base_lin_velocity[1] * cs;
        angle = sim::slip_angle(state_);  // heading itself is unbounded
    }
    o[0] = angle;
    o[1] = state_.base_ang_velocity;
    o[2] = v_long;
    o[3] = v_lat;
    o[4] = command_.lin_velocity;
    o[5] = command_.yaw_rate;
    o.segment(StageSpec::kQuadBlock, spec_.action_dim()) = prev_action_;
    if (spec_.observe_arm) {
        int arm_start = StageSpec::kQuadBlock + spec_.action_dim();
        o[arm_start] = state_.arm_angle;
        o[arm_start + 1] = state_.arm_joint_velocity();
    }
    return o;
}

Eigen::VectorXd StageEnv::privileged() const {
    Eigen::VectorXd p(spec_.priv_dim());
    double torque = 0.0, f_lat = 0.0, f_long = 0.0;
    for (const auto& ev : events_) {
        if (!ev.active_at(state_.time)) continue;
        double f = ev.force_magnitude * scenario_.perturbation_force_scale;
        f_long += f * ev.direction[0];
        f_lat += f * ev.direction[1];
        torque += f * ev.direction[1] * (0.5 * params_.body_height + ev.offset_from_base);
    }
    p[0] = torque;
    p[1] = f_lat;
    p[2] = f_long;
    p[3] = randomization_.friction_scale;
    p[4] = randomization_.mass_scale;
    p[5] = state_.base_lin_velocity[0];
    p[6] = state_.base_lin_velocity[1];
    return p;
}

void StageEnv::set_fixed_command(const sim::CommandSample& cmd) {
    fixed_command_ = cmd;
    command_ = cmd;
}

double StageEnv::lin_tracking_error() const {
    return control_step_ > 0 ? lin_err_accum_ / control_step_ : 0.0;
}
double StageEnv::yaw_tracking_error() const {
    return control_step_ > 0 ? yaw_err_accum_ / control_step_ : 0.0;
}

}  // namespace tailsim::staged
