#pragma once

#include <string>
#include <vector>

#include "tailsim/nn/checkpoint.hpp"
#include "tailsim/rl/ppo.hpp"
#include "tailsim/staged/stage_env.hpp"
#include "tailsim/staged/stage_spec.hpp"

namespace tailsim::staged {

struct NetConfig {
    int hidden = 128;
    int hidden_layers = 2;
    nn::Activation activation = nn::Activation::Elu;
    int z_dim = 8;
    int encoder_hidden = 32;
    double init_log_std = 0.0;  // std = 1.0
};

struct CurveRow {
    int update = 0;
    long env_steps = 0;
    double mean_return = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double bc_loss = 0.0;
    double kl = 0.0;
    double clip_fraction = 0.0;
    double lambda = 0.0;
};

void write_curves_csv(const std::vector<CurveRow>& curves, const std::string& path);

struct StageResult {
    rl::Agent agent;
    std::vector<CurveRow> curves;
    long env_steps = 0;
    bool diverged = false;
};

struct Teacher {
    const rl::Agent* agent = nullptr;
    const StageSpec* spec = nullptr;
};

rl::Agent make_agent(const StageSpec& spec, const NetConfig& nets, std::uint64_t seed);

// Grow an agent trained on `from` to the observation/action layout of `to`,
// keeping all learned weights. New input columns start at zero (the policy
// initially ignores the arm); new action rows start small.
rl::Agent expand_agent(const rl::Agent& agent, const StageSpec& from, const StageSpec& to,
                       std::uint64_t seed);

// Core PPO loop over caller-supplied environments. `anneal` weights the
// behavior-cloning term and is only meaningful with a teacher view.
StageResult train_agent(rl::Agent agent, std::vector<std::unique_ptr<rl::Env>>& envs,
                        const rl::PPOConfig& ppo, int updates,
                        const rl::TeacherView* teacher, const AnnealSchedule* anneal,
                        std::uint64_t seed);

// One stage of PPO, with an optional previous-stage teacher whose mean
// actions enter the loss as an annealed behavior-cloning term.
StageResult train_stage(const StageSpec& spec, const sim::ScenarioConfig& scenario,
                        const sim::RobotParams& params, const rl::PPOConfig& ppo,
                        const NetConfig& nets, const Teacher* teacher,
                        std::uint64_t seed, const rl::Agent* warm_start = nullptr);

struct PipelineConfig {
    sim::ScenarioConfig scenario;
    sim::RobotParams params;
    rl::PPOConfig ppo;
    NetConfig nets;
    std::vector<StageSpec> stages;
    std::uint64_t seed = 0;
    std::string out_dir;  // empty: no checkpoints/curves written
    int run_stages = 0;   // 0: all
};

struct PipelineResult {
    std::vector<StageResult> stages;
    std::vector<std::string> checkpoint_paths;
    long total_env_steps = 0;
};

// The three-step scheme: train from scratch, then re-train for each new
// stage with the previous policy as an annealed regression target.
PipelineResult run_pipeline(const PipelineConfig& cfg);

void save_agent(const rl::Agent& agent, const StageSpec& spec, const std::string& path);
rl::Agent load_agent(const std::string& path, StageSpec* spec_out = nullptr);

}  // namespace tailsim::staged
