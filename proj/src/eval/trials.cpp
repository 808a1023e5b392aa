#include "tailsim/eval/trials.hpp"

#include <cmath>
#include <filesystem>

#include "tailsim/common/csv.hpp"
#include "tailsim/common/rng.hpp"
#include "tailsim/staged/stage_env.hpp"

namespace tailsim::eval {

namespace {

// One deterministic episode: the agent acts through its mean, no exploration.
TrialRow run_one(const PolicyFn& policy, const staged::StageSpec& spec,
                 const sim::ScenarioConfig& scenario, const sim::RobotParams& params,
                 const TrialConfig& cfg, int trial, std::uint64_t seed,
                 sim::TrajectoryRecord* recorder) {
    staged::StageEnv env(spec, scenario, params, seed);
    env.set_auto_reset(false);
    if (cfg.fixed_command) env.set_fixed_command(*cfg.fixed_command);
    if (recorder) env.set_recorder(recorder);
    env.reset();

    TrialRow row;
    row.trial = trial;
    const int max_steps = env.max_control_steps();
    double peak = 0.0;
    bool done = false;
    int steps = 0;
    while (!done && steps < max_steps) {
        Eigen::VectorXd action = policy(env.observation(), env.privileged());
        double reward = 0.0;
        env.step(action, reward, done);
        double angle = scenario.scenario == sim::Scenario::Stabilize
                           ? env.state().base_angle
                           : sim::slip_angle(env.state());
        peak = std::max(peak, std::abs(angle));
        ++steps;
    }
    row.success = steps >= max_steps && !sim::is_terminated(env.state(), env.scenario());
    row.survival_fraction =
        row.success ? 1.0 : static_cast<double>(steps) / max_steps;
    row.lin_tracking_error = env.lin_tracking_error();
    row.yaw_tracking_error = env.yaw_tracking_error();
    row.peak_base_angle = peak;
    return row;
}

}  // namespace

TrialSet run_trials(const PolicyFn& policy, const staged::StageSpec& spec,
                    const sim::ScenarioConfig& scenario, const sim::RobotParams& params,
                    const TrialConfig& cfg) {
    if (cfg.trials <= 0) throw EvalError("run_trials: trials must be > 0");
    staged::StageSpec s = spec;
    if (cfg.arm_mode) s.arm_mode = *cfg.arm_mode;
    if (cfg.force_range) {
        if (!s.perturbations)
            throw EvalError("run_trials: force range override without perturbations");
        if ((*cfg.force_range)[0] > (*cfg.force_range)[1])
            throw EvalError("run_trials: inverted force range");
        s.perturbations->force_range = {(*cfg.force_range)[0], (*cfg.force_range)[1]};
    }

    TrialSet set;
    set.rows.reserve(static_cast<std::size_t>(cfg.trials));
    for (int i = 0; i < cfg.trials; ++i) {
        sim::TrajectoryRecord rec;
        bool record = !cfg.trajectory_dir.empty();
        set.rows.push_back(run_one(policy, s, scenario, params, cfg, i,
                                   derive_seed(cfg.seed, 5000 + static_cast<std::uint64_t>(i)),
                                   record ? &rec : nullptr));
        if (record) {
            std::filesystem::create_directories(cfg.trajectory_dir);
            rec.write_csv(cfg.trajectory_dir + "/trial_" + std::to_string(i) + ".csv");
        }
    }
    set.metrics = aggregate(set.rows);

    if (!cfg.log_path.empty()) {
        CsvWriter w(cfg.log_path, {"trial", "success", "survival_fraction",
                                   "lin_tracking_error", "yaw_tracking_error",
                                   "peak_base_angle"});
        for (const auto& r : set.rows)
            w.write_row({static_cast<double>(r.trial), r.success ? 1.0 : 0.0,
                         r.survival_fraction, r.lin_tracking_error,
                         r.yaw_tracking_error, r.peak_base_angle});
    }
    return set;
}

std::vector<std::pair<double, double>> arm_yaw_sweep(
    const PolicyFn& policy, const staged::StageSpec& spec,
    const sim::ScenarioConfig& scenario, const sim::RobotParams& params,
    double lin_cmd, int command_count, int samples_per_command, std::uint64_t seed) {
    if (command_count < 2 || samples_per_command < 1)
        throw EvalError("arm_yaw_sweep: need >= 2 commands and >= 1 sample each");
    std::vector<std::pair<double, double>> points;
    const double lo = spec.commands.yaw_min, hi = spec.commands.yaw_max;
    for (int k = 0; k < command_count; ++k) {
        double yaw_cmd = lo + (hi - lo) * k / (command_count - 1);
        staged::StageEnv env(spec, scenario, params, derive_seed(seed, 7000 + k));
        env.set_auto_reset(false);
        env.set_fixed_command({lin_cmd, yaw_cmd});
        env.reset();
        const int max_steps = env.max_control_steps();
        // Late-episode samples, 0.5 s apart, once transients have settled.
        const int spacing = static_cast<int>(
            0.5 / (scenario.dt * staged::StageEnv::kControlDecimation));
        bool done = false;
        std::vector<std::pair<double, double>> taken;
        for (int t = 0; t < max_steps && !done; ++t) {
            Eigen::VectorXd action = policy(env.observation(), env.privileged());
            double reward = 0.0;
            env.step(action, reward, done);
            int from_end = max_steps - 1 - t;
            if (from_end % spacing == 0 &&
                from_end / spacing < samples_per_command)
                taken.emplace_back(env.state().arm_angle,
                                   env.state().base_ang_velocity);
        }
        points.insert(points.end(), taken.begin(), taken.end());
    }
    return points;
}

sim::TrajectoryRecord record_command_step(const PolicyFn& policy,
                                          const staged::StageSpec& spec,
                                          const sim::ScenarioConfig& scenario,
                                          const sim::RobotParams& params,
                                          double step_time_s, double yaw_cmd,
                                          double lin_cmd, std::uint64_t seed) {
    staged::StageEnv env(spec, scenario, params, seed);
    env.set_auto_reset(false);
    sim::TrajectoryRecord rec;
    env.set_recorder(&rec);
    env.set_fixed_command({lin_cmd, 0.0});
    env.reset();

    const int max_steps = env.max_control_steps();
    const int step_at = static_cast<int>(step_time_s /
                                         (scenario.dt * staged::StageEnv::kControlDecimation));
    bool done = false;
    for (int t = 0; t < max_steps && !done; ++t) {
        if (t == step_at) env.set_fixed_command({lin_cmd, yaw_cmd});
        Eigen::VectorXd action = policy(env.observation(), env.privileged());
        double reward = 0.0;
        env.step(action, reward, done);
    }
    return rec;
}

}  // namespace tailsim::eval
