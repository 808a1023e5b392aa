#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "tailsim/common/rng.hpp"
#include "tailsim/rl/agent.hpp"
#include "tailsim/rl/env.hpp"

namespace tailsim::rl {

// Previous-stage policy acting as a regression target. It reads only the
// observation entries that existed in its own stage (obs_index selects them
// from the student's observation) and emits its own action space, which is a
// prefix-compatible subset of the student's.
struct TeacherView {
    const Agent* agent = nullptr;
    std::vector<int> obs_index;
    std::vector<int> priv_index;

    Eigen::VectorXd observe(const Eigen::VectorXd& student_obs) const {
        Eigen::VectorXd o(obs_index.size());
        for (std::size_t i = 0; i < obs_index.size(); ++i)
            o[static_cast<int>(i)] = student_obs[obs_index[i]];
        return o;
    }
    Eigen::VectorXd observe_priv(const Eigen::VectorXd& student_priv) const {
        Eigen::VectorXd o(priv_index.size());
        for (std::size_t i = 0; i < priv_index.size(); ++i)
            o[static_cast<int>(i)] = student_priv[priv_index[i]];
        return o;
    }
};

// horizon*envs transitions in flat column-major layout, index = t*envs + e.
struct RolloutBatch {
    int horizon = 0;
    int env_count = 0;
    Eigen::MatrixXd observations;     // obs_dim x (T*N)
    Eigen::MatrixXd privileged;       // priv_dim x (T*N)
    Eigen::MatrixXd actions;          // act_dim x (T*N)
    Eigen::VectorXd log_probs;
    Eigen::VectorXd values;
    Eigen::VectorXd rewards;
    Eigen::VectorXd dones;            // 1.0 where the episode ended at this step
    Eigen::VectorXd bootstrap_values; // one per env, value of the state after the batch
    Eigen::MatrixXd teacher_actions;  // teacher_dim x (T*N); empty without teacher
    Eigen::VectorXd advantages;
    Eigen::VectorXd returns;
    std::vector<double> episode_returns;  // episodes completed during collection
    std::vector<double> episode_lengths;

    int size() const { return horizon * env_count; }
    int index(int t, int e) const { return t * env_count + e; }
};

RolloutBatch collect_rollouts(Agent& agent, std::vector<std::unique_ptr<Env>>& envs,
                              int horizon, Rng& rng,
                              const TeacherView* teacher = nullptr,
                              bool update_normalizers = true);

}  // namespace tailsim::rl
