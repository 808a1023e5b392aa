#include "tailsim/eval/baselines.hpp"

#include <memory>

#include "tailsim/staged/stage_env.hpp"

namespace tailsim::eval {

std::string baseline_name(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::Staged: return "staged";
        case BaselineKind::Scratch: return "scratch";
        case BaselineKind::Curriculum: return "curriculum";
        case BaselineKind::FineTune: return "finetune";
        case BaselineKind::Decoupled: return "decoupled";
        case BaselineKind::OneStage: return "onestage";
    }
    throw EvalError("baseline_name: unknown kind");
}

BaselineKind parse_baseline(const std::string& name) {
    for (BaselineKind k : {BaselineKind::Staged, BaselineKind::Scratch,
                           BaselineKind::Curriculum, BaselineKind::FineTune,
                           BaselineKind::Decoupled, BaselineKind::OneStage})
        if (baseline_name(k) == name) return k;
    throw EvalError("unknown baseline '" + name + "'");
}

namespace {

// Runs the frozen leg policy inside the environment so the trained agent only
// commands the arm.
class DecoupledEnv : public rl::Env {
  public:
    DecoupledEnv(const staged::StageSpec& spec, const staged::StageSpec& leg_spec,
                 const sim::ScenarioConfig& scenario, const sim::RobotParams& params,
                 std::uint64_t seed, const rl::Agent* legs)
        : inner_(spec, scenario, params, seed), legs_(legs) {
        view_.agent = legs;
        view_.obs_index = staged::teacher_obs_index(spec, leg_spec);
        view_.priv_index = staged::teacher_priv_index(spec, leg_spec);
    }

    int obs_dim() const override { return inner_.obs_dim(); }
    int priv_dim() const override { return inner_.priv_dim(); }
    int action_dim() const override { return 1; }

    void reset() override { inner_.reset(); }

    void step(const Eigen::VectorXd& action, double& reward, bool& done) override {
        Eigen::VectorXd obs = inner_.observation();
        Eigen::VectorXd leg = legs_->mean_actions(view_.observe(obs),
                                                  view_.observe_priv(inner_.privileged()))
                                  .col(0);
        Eigen::VectorXd full(leg.size() + 1);
        full << leg, action[0];
        inner_.step(full, reward, done);
    }

    Eigen::VectorXd observation() const override { return inner_.observation(); }
    Eigen::VectorXd privileged() const override { return inner_.privileged(); }

  private:
    staged::StageEnv inner_;
    const rl::Agent* legs_;
    rl::TeacherView view_;
};

rl::Agent make_arm_agent(const staged::StageSpec& spec, const staged::NetConfig& nets,
                         std::uint64_t seed) {
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
    policy_widths.push_back(1);
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

int total_updates(const staged::PipelineConfig& cfg) {
    int u = 0;
    for (const auto& s : cfg.stages) u += s.updates;
    return u;
}

}  // namespace

PolicyFn BaselineResult::policy() const {
    if (!composite) return agent_policy(agent);
    rl::Agent arm = agent;
    rl::Agent legs = leg_agent;
    std::vector<int> obs_index = leg_obs_index;
    std::vector<int> priv_index = leg_priv_index;
    return [arm, legs, obs_index, priv_index](const Eigen::VectorXd& obs,
                                              const Eigen::VectorXd& priv) {
        Eigen::VectorXd tobs(obs_index.size()), tpriv(priv_index.size());
        for (std::size_t i = 0; i < obs_index.size(); ++i)
            tobs[static_cast<int>(i)] = obs[obs_index[i]];
        for (std::size_t i = 0; i < priv_index.size(); ++i)
            tpriv[static_cast<int>(i)] = priv[priv_index[i]];
        Eigen::VectorXd leg = legs.mean_actions(tobs, tpriv).col(0);
        Eigen::VectorXd armed = arm.mean_actions(obs, priv).col(0);
        Eigen::VectorXd full(leg.size() + 1);
        full << leg, armed[0];
        return full;
    };
}

BaselineResult run_baseline(BaselineKind kind, const staged::PipelineConfig& cfg) {
    if (cfg.stages.empty()) throw EvalError("run_baseline: no stages configured");
    staged::validate_stage_sequence(cfg.stages);
    BaselineResult result;
    result.kind = kind;
    result.final_spec = cfg.stages.back();

    switch (kind) {
        case BaselineKind::Staged: {
            staged::PipelineResult pr = staged::run_pipeline(cfg);
            result.agent = pr.stages.back().agent;
            result.env_steps = pr.total_env_steps;
            result.diverged = pr.stages.back().diverged;
            break;
        }
        case BaselineKind::Scratch: {
            staged::StageSpec spec = cfg.stages.back();
            spec.updates = total_updates(cfg);
            staged::StageResult r =
                train_stage(spec, cfg.scenario, cfg.params, cfg.ppo, cfg.nets, nullptr,
                            derive_seed(cfg.seed, 200));
            result.agent = std::move(r.agent);
            result.env_steps = r.env_steps;
            result.diverged = r.diverged;
            break;
        }
        case BaselineKind::Curriculum: {
            // The final spaces from the start; only the conditions are staged.
            const staged::StageSpec& last = cfg.stages.back();
            rl::Agent agent;
            bool first = true;
            for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
                staged::StageSpec spec = cfg.stages[i];
                spec.observe_arm = last.observe_arm;
                spec.actuate_arm = last.actuate_arm;
                staged::StageResult r = train_stage(
                    spec, cfg.scenario, cfg.params, cfg.ppo, cfg.nets, nullptr,
                    derive_seed(cfg.seed, 210 + static_cast<std::uint64_t>(i)),
                    first ? nullptr : &agent);
                agent = std::move(r.agent);
                result.env_steps += r.env_steps;
                result.diverged = result.diverged || r.diverged;
                first = false;
            }
            result.agent = std::move(agent);
            break;
        }
        case BaselineKind::FineTune: {
            // Warm starts through network growth, but no cloning pull.
            rl::Agent agent;
            for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
                const staged::StageSpec& spec = cfg.stages[i];
                std::uint64_t seed =
                    derive_seed(cfg.seed, 220 + static_cast<std::uint64_t>(i));
                rl::Agent warm;
                if (i > 0)
                    warm = staged::expand_agent(agent, cfg.stages[i - 1], spec, seed);
                staged::StageResult r =
                    train_stage(spec, cfg.scenario, cfg.params, cfg.ppo, cfg.nets,
                                nullptr, seed, i > 0 ? &warm : nullptr);
                agent = std::move(r.agent);
                result.env_steps += r.env_steps;
                result.diverged = result.diverged || r.diverged;
            }
            result.agent = std::move(agent);
            break;
        }
        case BaselineKind::OneStage: {
            // First stage as configured, then a single distillation straight
            // to the final spaces with the remaining budget.
            staged::StageResult first =
                train_stage(cfg.stages.front(), cfg.scenario, cfg.params, cfg.ppo,
                            cfg.nets, nullptr, derive_seed(cfg.seed, 230));
            result.env_steps += first.env_steps;
            staged::StageSpec spec = cfg.stages.back();
            spec.updates = total_updates(cfg) - cfg.stages.front().updates;
            staged::Teacher teacher{&first.agent, &cfg.stages.front()};
            staged::StageResult r =
                train_stage(spec, cfg.scenario, cfg.params, cfg.ppo, cfg.nets, &teacher,
                            derive_seed(cfg.seed, 231));
            result.agent = std::move(r.agent);
            result.env_steps += r.env_steps;
            result.diverged = first.diverged || r.diverged;
            break;
        }
        case BaselineKind::Decoupled: {
            // The staged pipeline up to the penultimate stage, then a separate
            // arm-only policy on top of the frozen result.
            staged::PipelineConfig head = cfg;
            head.stages.pop_back();
            head.out_dir.clear();
            staged::PipelineResult pr = staged::run_pipeline(head);
            result.leg_agent = pr.stages.back().agent;
            result.env_steps = pr.total_env_steps;
            result.diverged = pr.stages.back().diverged;

            const staged::StageSpec& spec = cfg.stages.back();
            const staged::StageSpec& leg_spec = head.stages.back();
            std::uint64_t seed = derive_seed(cfg.seed, 240);
            std::vector<std::unique_ptr<rl::Env>> envs;
            envs.reserve(static_cast<std::size_t>(cfg.ppo.env_count));
            for (int e = 0; e < cfg.ppo.env_count; ++e)
                envs.push_back(std::make_unique<DecoupledEnv>(
                    spec, leg_spec, cfg.scenario, cfg.params,
                    derive_seed(seed, 1000 + e), &result.leg_agent));
            staged::StageResult r = staged::train_agent(
                make_arm_agent(spec, cfg.nets, seed), envs, cfg.ppo, spec.updates,
                nullptr, nullptr, seed);
            result.agent = std::move(r.agent);
            result.env_steps += r.env_steps;
            result.diverged = result.diverged || r.diverged;
            result.composite = true;
            result.leg_obs_index = staged::teacher_obs_index(spec, leg_spec);
            result.leg_priv_index = staged::teacher_priv_index(spec, leg_spec);
            break;
        }
    }
    return result;
}

}  // namespace tailsim::eval
