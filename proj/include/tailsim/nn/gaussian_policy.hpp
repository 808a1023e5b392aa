#pragma once

#include <Eigen/Dense>

#include "tailsim/common/rng.hpp"
#include "tailsim/nn/mlp.hpp"

namespace tailsim::nn {

inline constexpr double kLogStdFloor = -5.0;
inline constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

// Diagonal-Gaussian policy: MLP mean, state-independent log-std.
struct GaussianPolicy {
    Mlp net;
    Eigen::VectorXd log_std;

    GaussianPolicy() = default;
    GaussianPolicy(std::vector<int> widths, Activation act, Rng& rng,
                   double init_log_std = 0.0)
        : net(std::move(widths), act, rng, /*output_scale=*/0.01),
          log_std(Eigen::VectorXd::Constant(net.output_dim(), init_log_std)) {}

    int action_dim() const { return net.output_dim(); }

    void clamp_log_std() {
        log_std = log_std.array().max(kLogStdFloor);
    }

    Eigen::VectorXd mean_action(const Eigen::VectorXd& obs) const {
        return net.forward_vec(obs);
    }

    Eigen::VectorXd sample(const Eigen::VectorXd& obs, Rng& rng,
                           double* log_prob_out = nullptr) const {
        Eigen::VectorXd mu = mean_action(obs);
        Eigen::VectorXd std = log_std.array().exp();
        Eigen::VectorXd a(mu.size());
        for (int i = 0; i < mu.size(); ++i) a[i] = mu[i] + std[i] * rng.normal();
        if (log_prob_out) *log_prob_out = log_prob_given_mean(mu, a);
        return a;
    }

    double log_prob(const Eigen::VectorXd& obs, const Eigen::VectorXd& action) const {
        return log_prob_given_mean(mean_action(obs), action);
    }

    double log_prob_given_mean(const Eigen::VectorXd& mu,
                               const Eigen::VectorXd& action) const {
        Eigen::ArrayXd z = (action - mu).array() / log_std.array().exp();
        return -0.5 * (z * z).sum() - log_std.sum() -
               0.5 * kLog2Pi * static_cast<double>(mu.size());
    }

    // Batched log-probs: mu and actions are (A x N).
    Eigen::VectorXd log_prob_batch(const Eigen::MatrixXd& mu,
                                   const Eigen::MatrixXd& actions) const {
        Eigen::ArrayXXd z =
            (actions - mu).array().colwise() / log_std.array().exp();
        Eigen::VectorXd lp =
            (-0.5 * (z * z).colwise().sum()).transpose().matrix();
        double c = -log_std.sum() - 0.5 * kLog2Pi * static_cast<double>(mu.rows());
        return lp.array() + c;
    }

    double entropy() const {
        return log_std.sum() +
               0.5 * static_cast<double>(log_std.size()) * (1.0 + kLog2Pi);
    }
};

}  // namespace tailsim::nn
