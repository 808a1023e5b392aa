#pragma once

#include <Eigen/Dense>

#include "tailsim/nn/adam.hpp"
#include "tailsim/nn/checkpoint.hpp"
#include "tailsim/nn/gaussian_policy.hpp"
#include "tailsim/nn/mlp.hpp"
#include "tailsim/nn/normalizer.hpp"

namespace tailsim::rl {

// Actor-critic bundle. The policy consumes [normalized obs; z] where z is the
// extrinsic vector produced by the privileged encoder; the critic sees the
// normalized privileged vector directly. All nets are trained jointly: the
// encoder receives the policy-loss gradient through z.
struct Agent {
    nn::GaussianPolicy policy;
    nn::Mlp value;
    nn::Mlp encoder;  // priv -> z; optional
    nn::Normalizer obs_norm;
    nn::Normalizer priv_norm;
    bool use_encoder = false;

    int obs_dim() const { return obs_norm.dim(); }
    int priv_dim() const { return priv_norm.dim(); }
    int action_dim() const { return policy.action_dim(); }
    int z_dim() const { return use_encoder ? encoder.output_dim() : 0; }

    Eigen::MatrixXd policy_input(const Eigen::MatrixXd& obs,
                                 const Eigen::MatrixXd& priv) const {
        Eigen::MatrixXd nobs = obs_norm.normalize(obs);
        if (!use_encoder) return nobs;
        Eigen::MatrixXd z = encoder.forward(priv_norm.normalize(priv));
        Eigen::MatrixXd in(nobs.rows() + z.rows(), nobs.cols());
        in << nobs, z;
        return in;
    }

    Eigen::MatrixXd value_input(const Eigen::MatrixXd& obs,
                                const Eigen::MatrixXd& priv) const {
        Eigen::MatrixXd nobs = obs_norm.normalize(obs);
        if (priv.rows() == 0) return nobs;
        Eigen::MatrixXd npriv = priv_norm.normalize(priv);
        Eigen::MatrixXd in(nobs.rows() + npriv.rows(), nobs.cols());
        in << nobs, npriv;
        return in;
    }

    Eigen::MatrixXd mean_actions(const Eigen::MatrixXd& obs,
                                 const Eigen::MatrixXd& priv) const {
        return policy.net.forward(policy_input(obs, priv));
    }

    Eigen::VectorXd values(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& priv) const {
        return value.forward(value_input(obs, priv)).row(0).transpose();
    }

    // Trainable parameters of the actor side (policy net + log_std + encoder)
    // as one flat vector for the optimizer.
    Eigen::VectorXd actor_params() const {
        Eigen::VectorXd p(actor_param_count());
        int n1 = policy.net.param_count();
        p.segment(0, n1) = policy.net.flatten();
        p.segment(n1, policy.log_std.size()) = policy.log_std;
        if (use_encoder)
            p.segment(n1 + policy.log_std.size(), encoder.param_count()) = encoder.flatten();
        return p;
    }
    void set_actor_params(const Eigen::VectorXd& p) {
        int n1 = policy.net.param_count();
        policy.net.set_from_flat(p.segment(0, n1));
        policy.log_std = p.segment(n1, policy.log_std.size());
        policy.clamp_log_std();
        if (use_encoder)
            encoder.set_from_flat(p.segment(n1 + policy.log_std.size(), encoder.param_count()));
    }
    int actor_param_count() const {
        return policy.net.param_count() + static_cast<int>(policy.log_std.size()) +
               (use_encoder ? encoder.param_count() : 0);
    }

    void freeze_normalizers() {
        obs_norm.freeze();
        priv_norm.freeze();
    }

    void to_checkpoint(nn::Checkpoint& ckpt, const std::string& prefix = "") const;
    static Agent from_checkpoint(const nn::Checkpoint& ckpt, const std::string& prefix = "");
};

}  // namespace tailsim::rl
