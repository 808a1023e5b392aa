#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tailsim/common/rng.hpp"
#include "tailsim/nn/adam.hpp"
#include "tailsim/rl/agent.hpp"
#include "tailsim/rl/rollout.hpp"

namespace tailsim::rl {

struct PPOConfig {
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double clip_epsilon = 0.2;
    int epochs = 4;
    int minibatch_size = 1024;
    double entropy_coef = 0.005;
    double value_coef = 0.5;
    double learning_rate = 3e-4;
    int rollout_horizon = 200;
    int env_count = 64;
    double kl_early_stop = 0.03;
    bool normalize_advantages = true;

    void validate() const;
};

struct LossTerms {
    double policy_loss = 0.0;   // clipped surrogate, sign convention: minimized
    double value_loss = 0.0;    // value_coef * 0.5 * MSE
    double entropy = 0.0;
    double bc_loss = 0.0;       // mean squared distance to teacher actions
    double total(double bc_lambda, double entropy_coef) const {
        return policy_loss - entropy_coef * entropy + value_loss + bc_lambda * bc_loss;
    }
};

struct UpdateStats {
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double bc_loss = 0.0;
    double kl = 0.0;
    double clip_fraction = 0.0;
    int epochs_run = 0;
    bool aborted = false;        // non-finite loss encountered
    int bad_minibatch = -1;
};

// Fills batch.advantages / batch.returns from rewards+values via GAE,
// normalizing advantages when configured.
void compute_advantages(RolloutBatch& batch, const PPOConfig& cfg);

// Mean squared distance between the policy's mean actions and the teacher's
// actions over the compatible (teacher) action dimensions.
double bc_proxy_loss(const Agent& student, const RolloutBatch& batch);

// Forward-only loss evaluation on a subset of the batch (whole batch when
// indices is empty). Used by the update and by equivalence tests.
LossTerms compute_losses(const Agent& agent, const RolloutBatch& batch,
                         const std::vector<int>& indices, const PPOConfig& cfg,
                         double bc_lambda);

// Clipped-surrogate PPO update, optionally regularized toward the teacher
// actions stored in the batch with weight bc_lambda.
UpdateStats ppo_update(Agent& agent, RolloutBatch& batch, const PPOConfig& cfg,
                       nn::Adam& actor_opt, nn::Adam& value_opt, Rng& rng,
                       double bc_lambda = 0.0);

}  // namespace tailsim::rl
