#include "tailsim/staged/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <memory>

#include "tailsim/common/csv.hpp"
#include "tailsim/rl/rollout.hpp"

namespace tailsim::staged {

void write_curves_csv(const std::vector<CurveRow>& curves, const std::string& path) {
    CsvWriter w(path, {"update", "env_steps", "mean_return", "policy_loss", "value_loss",
                       "entropy", "bc_loss", "kl", "clip_fraction", "lambda"});
    for (const auto& r : curves)
        w.write_row({static_cast<double>(r.update), static_cast<double>(r.env_steps),
                     r.mean_return, r.policy_loss, r.value_loss, r.entropy, r.bc_loss,
                     r.kl, r.clip_fraction, r.lambda});
}

rl::Agent make_agent(const StageSpec& spec, const NetConfig& nets, std::uint64_t seed) {
    rl::Agent agent;
    Rng policy_rng(derive_seed(seed, 11));
    Rng value_rng(derive_seed(seed, 12));
    Rng encoder_rng(derive_seed(seed, 13));

    std::vector<int> policy_widths{spec.obs_dim() + nets.z_dim};
    std::vector<int> value_widths{spec.obs_dim() + spec.priv_dim()};
    for (int i = 0; i < nets.hidden_layers; ++i) {
        policy_widths.push_back(nets.hidden);
        value_widths.push_back(nets.hidden);
    }
    policy_widths.push_back(spec.action_dim());
    value_widths.push_back(1);

    agent.policy = nn::GaussianPolicy(policy_widths, nets.activation, policy_rng,
                                      nets.init_log_std);
    agent.value = nn::Mlp(value_widths, nets.activation, value_rng);
    agent.encoder = nn::Mlp({spec.priv_dim(), nets.encoder_hidden, nets.z_dim},
                            nets.activation, encoder_rng);
    agent.use_encoder = true;
    agent.obs_norm = nn::Normalizer(spec.obs_dim());
    agent.priv_norm = nn::Normalizer(spec.priv_dim());
    return agent;
}

namespace {

// Remap the columns of a first-layer weight matrix when the input layout
// grows; unmapped (new) columns are zero so behavior is unchanged initially.
Eigen::MatrixXd remap_columns(const Eigen::MatrixXd& w, const std::vector<int>& new_pos,
                              int new_cols) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(w.rows(), new_cols);
    for (std::size_t i = 0; i < new_pos.size(); ++i)
        out.col(new_pos[i]) = w.col(static_cast<int>(i));
    return out;
}

Eigen::VectorXd expand_normalizer(const nn::Normalizer& n, const std::vector<int>& new_pos,
                                  int new_dim) {
    Eigen::VectorXd old_pack = n.pack();
    int old_dim = n.dim();
    double count = old_pack[2 * old_dim];
    Eigen::VectorXd pack(2 * new_dim + 2);
    pack.setZero();
    // variance of unseen dims defaults to 1 so normalization is a no-op there
    for (int i = 0; i < new_dim; ++i) pack[new_dim + i] = std::max(0.0, count - 1.0);
    for (std::size_t i = 0; i < new_pos.size(); ++i) {
        pack[new_pos[i]] = old_pack[static_cast<int>(i)];
        pack[new_dim + new_pos[i]] = old_pack[old_dim + static_cast<int>(i)];
    }
    pack[2 * new_dim] = count;
    pack[2 * new_dim + 1] = old_pack[2 * old_dim + 1];
    return pack;
}

}  // namespace

rl::Agent expand_agent(const rl::Agent& agent, const StageSpec& from, const StageSpec& to,
                       std::uint64_t seed) {
    if (to.obs_dim() < from.obs_dim() || to.action_dim() < from.action_dim())
        throw StageError("expand_agent: target stage must not shrink spaces");
    Rng rng(derive_seed(seed, 14));
    rl::Agent out = agent;

    std::vector<int> obs_map = teacher_obs_index(to, from);
    const int z_dim = agent.use_encoder ? agent.encoder.output_dim() : 0;

    // Rebuild the policy net at the new shape, then transplant the weights.
    {
        std::vector<int> widths = agent.policy.net.widths();
        widths.front() = to.obs_dim() + z_dim;
        widths.back() = to.action_dim();
        nn::Mlp net(widths, agent.policy.net.activation(), rng, /*output_scale=*/0.01);

        std::vector<int> pol_map = obs_map;
        for (int k = 0; k < z_dim; ++k) pol_map.push_back(to.obs_dim() + k);
        net.weights().front() =
            remap_columns(agent.policy.net.weights().front(), pol_map, widths.front());
        net.biases().front() = agent.policy.net.biases().front();
        for (std::size_t l = 1; l + 1 < net.layer_count(); ++l) {
            net.weights()[l] = agent.policy.net.weights()[l];
            net.biases()[l] = agent.policy.net.biases()[l];
        }
        // new action rows keep their small fresh init; old rows are preserved
        net.weights().back().topRows(from.action_dim()) =
            agent.policy.net.weights().back();
        net.biases().back().head(from.action_dim()) =
            agent.policy.net.biases().back();

        Eigen::VectorXd log_std =
            Eigen::VectorXd::Constant(to.action_dim(), agent.policy.log_std.mean());
        log_std.head(from.action_dim()) = agent.policy.log_std;
        out.policy.net = std::move(net);
        out.policy.log_std = log_std;
    }

    // Same for the critic, whose input is [obs, priv].
    {
        std::vector<int> widths = agent.value.widths();
        widths.front() = to.obs_dim() + to.priv_dim();
        nn::Mlp net(widths, agent.value.activation(), rng);

        std::vector<int> val_map = obs_map;
        for (int k = 0; k < from.priv_dim(); ++k) val_map.push_back(to.obs_dim() + k);
        net.weights().front() =
            remap_columns(agent.value.weights().front(), val_map, widths.front());
        net.biases().front() = agent.value.biases().front();
        for (std::size_t l = 1; l < net.layer_count(); ++l) {
            net.weights()[l] = agent.value.weights()[l];
            net.biases()[l] = agent.value.biases()[l];
        }
        out.value = std::move(net);
    }

    out.obs_norm =
        nn::Normalizer::unpack(expand_normalizer(agent.obs_norm, obs_map, to.obs_dim()));
    return out;
}

StageResult train_agent(rl::Agent agent, std::vector<std::unique_ptr<rl::Env>>& envs,
                        const rl::PPOConfig& ppo, int updates,
                        const rl::TeacherView* teacher, const AnnealSchedule* anneal,
                        std::uint64_t seed) {
    ppo.validate();
    StageResult result;
    result.agent = std::move(agent);
    result.agent.obs_norm.unfreeze();
    result.agent.priv_norm.unfreeze();

    nn::Adam actor_opt(result.agent.actor_param_count(), ppo.learning_rate);
    nn::Adam value_opt(result.agent.value.param_count(), ppo.learning_rate);
    Rng rollout_rng(derive_seed(seed, 2));
    Rng update_rng(derive_seed(seed, 3));

    double last_return = 0.0;
    for (int update = 0; update < updates; ++update) {
        rl::RolloutBatch batch =
            rl::collect_rollouts(result.agent, envs, ppo.rollout_horizon, rollout_rng,
                                 teacher, /*update_normalizers=*/true);
        rl::compute_advantages(batch, ppo);

        double lambda =
            (teacher && anneal) ? anneal_lambda(*anneal, update, updates) : 0.0;

        Eigen::VectorXd actor_snapshot = result.agent.actor_params();
        Eigen::VectorXd value_snapshot = result.agent.value.flatten();
        rl::UpdateStats stats =
            rl::ppo_update(result.agent, batch, ppo, actor_opt, value_opt, update_rng,
                           lambda);
        if (stats.aborted) {
            result.agent.set_actor_params(actor_snapshot);
            result.agent.value.set_from_flat(value_snapshot);
            result.diverged = true;
            break;
        }

        result.env_steps += static_cast<long>(ppo.rollout_horizon) * ppo.env_count;
        if (!batch.episode_returns.empty()) {
            double sum = 0.0;
            for (double r : batch.episode_returns) sum += r;
            last_return = sum / static_cast<double>(batch.episode_returns.size());
        }
        CurveRow row;
        row.update = update;
        row.env_steps = result.env_steps;
        row.mean_return = last_return;
        row.policy_loss = stats.policy_loss;
        row.value_loss = stats.value_loss;
        row.entropy = stats.entropy;
        row.bc_loss = stats.bc_loss;
        row.kl = stats.kl;
        row.clip_fraction = stats.clip_fraction;
        row.lambda = lambda;
        result.curves.push_back(row);
    }

    result.agent.freeze_normalizers();
    return result;
}

StageResult train_stage(const StageSpec& spec, const sim::ScenarioConfig& scenario,
                        const sim::RobotParams& params, const rl::PPOConfig& ppo,
                        const NetConfig& nets, const Teacher* teacher,
                        std::uint64_t seed, const rl::Agent* warm_start) {
    spec.validate();
    if (spec.index == 1 && teacher)
        throw StageError("stage 1 trains from scratch, without a teacher");

    std::vector<std::unique_ptr<rl::Env>> envs;
    envs.reserve(static_cast<std::size_t>(ppo.env_count));
    for (int e = 0; e < ppo.env_count; ++e)
        envs.push_back(std::make_unique<StageEnv>(spec, scenario, params,
                                                  derive_seed(seed, 1000 + e)));

    rl::TeacherView view;
    if (teacher) {
        view.agent = teacher->agent;
        view.obs_index = teacher_obs_index(spec, *teacher->spec);
        view.priv_index = teacher_priv_index(spec, *teacher->spec);
    }

    return train_agent(warm_start ? *warm_start : make_agent(spec, nets, seed), envs,
                       ppo, spec.updates, teacher ? &view : nullptr,
                       teacher ? &spec.anneal : nullptr, seed);
}

void save_agent(const rl::Agent& agent, const StageSpec& spec, const std::string& path) {
    nn::Checkpoint ckpt;
    agent.to_checkpoint(ckpt);
    Eigen::VectorXd meta(8);
    meta << spec.index, spec.observe_arm ? 1.0 : 0.0, spec.actuate_arm ? 1.0 : 0.0,
        static_cast<double>(spec.arm_mode == sim::ArmMode::NoArm
                                ? 0
                                : (spec.arm_mode == sim::ArmMode::Locked ? 1 : 2)),
        spec.episode_length_s, spec.commands.lin_min, spec.commands.lin_max,
        spec.commands.yaw_max;
    ckpt.put("stage.meta", meta);
    ckpt.save(path);
}

rl::Agent load_agent(const std::string& path, StageSpec* spec_out) {
    nn::Checkpoint ckpt = nn::Checkpoint::load(path);
    if (spec_out) {
        Eigen::VectorXd meta = ckpt.get_vector("stage.meta");
        spec_out->index = static_cast<int>(meta[0]);
        spec_out->observe_arm = meta[1] != 0.0;
        spec_out->actuate_arm = meta[2] != 0.0;
        spec_out->arm_mode = meta[3] == 0.0 ? sim::ArmMode::NoArm
                             : meta[3] == 1.0 ? sim::ArmMode::Locked
                                              : sim::ArmMode::Actuated;
        spec_out->episode_length_s = meta[4];
        spec_out->commands.lin_min = meta[5];
        spec_out->commands.lin_max = meta[6];
        spec_out->commands.yaw_max = meta[7];
    }
    return rl::Agent::from_checkpoint(ckpt);
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    validate_stage_sequence(cfg.stages);
    PipelineResult result;
    const int stage_count = cfg.run_stages > 0
                                ? std::min<int>(cfg.run_stages,
                                                static_cast<int>(cfg.stages.size()))
                                : static_cast<int>(cfg.stages.size());

    for (int i = 0; i < stage_count; ++i) {
        const StageSpec& spec = cfg.stages[static_cast<std::size_t>(i)];
        Teacher teacher;
        const Teacher* teacher_ptr = nullptr;
        if (i > 0) {
            teacher.agent = &result.stages[static_cast<std::size_t>(i - 1)].agent;
            teacher.spec = &cfg.stages[static_cast<std::size_t>(i - 1)];
            teacher_ptr = &teacher;
        }
        StageResult stage =
            train_stage(spec, cfg.scenario, cfg.params, cfg.ppo, cfg.nets, teacher_ptr,
                        derive_seed(cfg.seed, static_cast<std::uint64_t>(100 + i)));
        result.total_env_steps += stage.env_steps;
        bool diverged = stage.diverged;
        result.stages.push_back(std::move(stage));

        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            std::string ckpt_path = cfg.out_dir + "/stage" + std::to_string(spec.index) +
                                    "_" + std::to_string(cfg.seed) + ".ckpt";
            save_agent(result.stages.back().agent, spec, ckpt_path);
            result.checkpoint_paths.push_back(ckpt_path);
            write_curves_csv(result.stages.back().curves,
                             cfg.out_dir + "/stage" + std::to_string(spec.index) +
                                 "_curves.csv");
        }
        if (diverged) break;  // later stages would train against a broken teacher
    }
    return result;
}

}  // namespace tailsim::staged
