#pragma once

#include <string>

#include "tailsim/eval/trials.hpp"
#include "tailsim/staged/trainer.hpp"

namespace tailsim::eval {

// Alternatives trained under the same total environment-interaction budget
// as the staged pipeline (same update count, horizon and env count).
enum class BaselineKind {
    Staged,      // the full scheme: stage-wise training with annealed cloning
    Scratch,     // PPO on the final task from scratch
    Curriculum,  // final observation/action layout throughout, staged conditions
    FineTune,    // stage-wise warm starts via network growth, no cloning term
    Decoupled,   // frozen stage-2 policy drives the legs; a separate arm policy
    OneStage,    // single distillation step: stage 1 teacher straight to stage 3
};

std::string baseline_name(BaselineKind kind);
BaselineKind parse_baseline(const std::string& name);

struct BaselineResult {
    BaselineKind kind = BaselineKind::Staged;
    rl::Agent agent;       // the policy acting on the final task
    rl::Agent leg_agent;   // Decoupled only: the frozen leg policy
    bool composite = false;
    staged::StageSpec final_spec;
    std::vector<int> leg_obs_index;   // composite: leg policy's view of the obs
    std::vector<int> leg_priv_index;
    long env_steps = 0;
    bool diverged = false;

    // Action map for evaluation; splices leg and arm policies when composite.
    PolicyFn policy() const;
};

BaselineResult run_baseline(BaselineKind kind, const staged::PipelineConfig& cfg);

}  // namespace tailsim::eval
