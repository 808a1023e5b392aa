#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace tailsim::rl {

// Generalized advantage estimation over one trajectory segment.
// delta_t = r_t + gamma * V_{t+1} * (1 - done_t) - V_t
// A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
// V_{T} is the bootstrap value. Returns are advantages + values.
inline void gae(const Eigen::VectorXd& rewards, const Eigen::VectorXd& values,
                const Eigen::VectorXd& dones, double bootstrap_value, double gamma,
                double gae_lambda, Eigen::VectorXd& advantages,
                Eigen::VectorXd& returns) {
    const int n = static_cast<int>(rewards.size());
    if (values.size() != n || dones.size() != n)
        throw std::invalid_argument("gae: length mismatch");
    advantages.resize(n);
    returns.resize(n);
    double next_adv = 0.0;
    for (int t = n - 1; t >= 0; --t) {
        double not_done = 1.0 - dones[t];
        double next_value = (t + 1 < n) ? values[t + 1] : bootstrap_value;
        double delta = rewards[t] + gamma * next_value * not_done - values[t];
        next_adv = delta + gamma * gae_lambda * not_done * next_adv;
        advantages[t] = next_adv;
        returns[t] = advantages[t] + values[t];
    }
}

}  // namespace tailsim::rl
