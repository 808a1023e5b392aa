#include "tailsim/rl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tailsim/rl/gae.hpp"

namespace tailsim::rl {

void PPOConfig::validate() const {
    if (gamma < 0.0 || gamma > 1.0 || gae_lambda < 0.0 || gae_lambda > 1.0)
        throw std::invalid_argument("ppo: gamma and gae_lambda must lie in [0,1]");
    if (clip_epsilon <= 0.0) throw std::invalid_argument("ppo: clip_epsilon must be > 0");
    if (epochs <= 0 || minibatch_size <= 0 || rollout_horizon <= 0 || env_count <= 0)
        throw std::invalid_argument("ppo: counts must be positive");
}

void compute_advantages(RolloutBatch& batch, const PPOConfig& cfg) {
    const int t_len = batch.horizon, n = batch.env_count;
    batch.advantages.resize(batch.size());
    batch.returns.resize(batch.size());
    Eigen::VectorXd rew(t_len), val(t_len), don(t_len), adv, ret;
    for (int e = 0; e < n; ++e) {
        for (int t = 0; t < t_len; ++t) {
            rew[t] = batch.rewards[batch.index(t, e)];
            val[t] = batch.values[batch.index(t, e)];
            don[t] = batch.dones[batch.index(t, e)];
        }
        gae(rew, val, don, batch.bootstrap_values[e], cfg.gamma, cfg.gae_lambda, adv, ret);
        for (int t = 0; t < t_len; ++t) {
            batch.advantages[batch.index(t, e)] = adv[t];
            batch.returns[batch.index(t, e)] = ret[t];
        }
    }
    if (cfg.normalize_advantages && batch.size() > 1) {
        double mean = batch.advantages.mean();
        double var = (batch.advantages.array() - mean).square().sum() /
                     static_cast<double>(batch.size());
        double std = std::sqrt(var);
        if (std > 1e-12) batch.advantages = (batch.advantages.array() - mean) / std;
        else batch.advantages.array() -= mean;
    }
}

namespace {

std::vector<int> all_indices(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

struct MinibatchData {
    Eigen::MatrixXd obs, priv, actions, teacher;
    Eigen::VectorXd log_probs_old, advantages, returns;
};

MinibatchData gather(const RolloutBatch& batch, const std::vector<int>& idx) {
    MinibatchData mb;
    const int m = static_cast<int>(idx.size());
    mb.obs.resize(batch.observations.rows(), m);
    mb.priv.resize(batch.privileged.rows(), m);
    mb.actions.resize(batch.actions.rows(), m);
    if (batch.teacher_actions.rows() > 0) mb.teacher.resize(batch.teacher_actions.rows(), m);
    mb.log_probs_old.resize(m);
    mb.advantages.resize(m);
    mb.returns.resize(m);
    for (int i = 0; i < m; ++i) {
        int k = idx[static_cast<std::size_t>(i)];
        mb.obs.col(i) = batch.observations.col(k);
        if (mb.priv.rows() > 0) mb.priv.col(i) = batch.privileged.col(k);
        mb.actions.col(i) = batch.actions.col(k);
        if (mb.teacher.rows() > 0) mb.teacher.col(i) = batch.teacher_actions.col(k);
        mb.log_probs_old[i] = batch.log_probs[k];
        mb.advantages[i] = batch.advantages[k];
        mb.returns[i] = batch.returns[k];
    }
    return mb;
}

}  // namespace

double bc_proxy_loss(const Agent& student, const RolloutBatch& batch) {
    if (batch.teacher_actions.rows() == 0)
        throw std::invalid_argument("bc_proxy_loss: batch has no teacher actions");
    Eigen::MatrixXd mu = student.mean_actions(batch.observations, batch.privileged);
    const int k = static_cast<int>(batch.teacher_actions.rows());
    Eigen::MatrixXd diff = mu.topRows(k) - batch.teacher_actions;
    return diff.array().square().colwise().sum().mean();
}

LossTerms compute_losses(const Agent& agent, const RolloutBatch& batch,
                         const std::vector<int>& indices, const PPOConfig& cfg,
                         double bc_lambda) {
    std::vector<int> idx = indices.empty() ? all_indices(batch.size()) : indices;
    MinibatchData mb = gather(batch, idx);
    const int m = static_cast<int>(idx.size());

    Eigen::MatrixXd mu = agent.mean_actions(mb.obs, mb.priv);
    Eigen::VectorXd lp_new = agent.policy.log_prob_batch(mu, mb.actions);
    Eigen::ArrayXd ratio = (lp_new - mb.log_probs_old).array().exp();
    Eigen::ArrayXd clipped =
        ratio.min(1.0 + cfg.clip_epsilon).max(1.0 - cfg.clip_epsilon);
    Eigen::ArrayXd adv = mb.advantages.array();

    LossTerms terms;
    terms.policy_loss = -((ratio * adv).min(clipped * adv)).mean();
    Eigen::VectorXd v = agent.values(mb.obs, mb.priv);
    terms.value_loss =
        cfg.value_coef * 0.5 * (v - mb.returns).array().square().mean();
    terms.entropy = agent.policy.entropy();
    if (bc_lambda != 0.0 && mb.teacher.rows() > 0) {
        Eigen::MatrixXd diff = mu.topRows(mb.teacher.rows()) - mb.teacher;
        terms.bc_loss = diff.array().square().colwise().sum().mean();
    }
    (void)m;
    return terms;
}

UpdateStats ppo_update(Agent& agent, RolloutBatch& batch, const PPOConfig& cfg,
                       nn::Adam& actor_opt, nn::Adam& value_opt, Rng& rng,
                       double bc_lambda) {
    cfg.validate();
    UpdateStats stats;
    const int total = batch.size();
    std::vector<int> order = all_indices(total);

    const bool use_bc = bc_lambda != 0.0 && batch.teacher_actions.rows() > 0;
    const int teacher_dim = static_cast<int>(batch.teacher_actions.rows());
    const int act_dim = agent.action_dim();
    const int obs_rows = agent.obs_dim();

    double loss_accum = 0.0, vloss_accum = 0.0, ent_accum = 0.0, bc_accum = 0.0,
           clip_accum = 0.0;
    int minibatches = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng.engine());
        for (int start = 0; start < total; start += cfg.minibatch_size) {
            int m = std::min(cfg.minibatch_size, total - start);
            std::vector<int> idx(order.begin() + start, order.begin() + start + m);
            MinibatchData mb = gather(batch, idx);

            // forward with caches
            Eigen::MatrixXd nobs = agent.obs_norm.normalize(mb.obs);
            nn::Mlp::Cache enc_cache, pol_cache, val_cache;
            Eigen::MatrixXd pol_in;
            Eigen::MatrixXd npriv;
            if (agent.use_encoder) {
                npriv = agent.priv_norm.normalize(mb.priv);
                Eigen::MatrixXd z = agent.encoder.forward(npriv, enc_cache);
                pol_in.resize(nobs.rows() + z.rows(), m);
                pol_in << nobs, z;
            } else {
                pol_in = nobs;
            }
            Eigen::MatrixXd mu = agent.policy.net.forward(pol_in, pol_cache);

            Eigen::ArrayXd sigma = agent.policy.log_std.array().exp();
            Eigen::ArrayXXd zscore =
                (mb.actions - mu).array().colwise() / sigma;
            Eigen::VectorXd lp_new =
                (-0.5 * (zscore * zscore).colwise().sum()).transpose().matrix();
            double lp_const = -agent.policy.log_std.sum() -
                              0.5 * nn::kLog2Pi * static_cast<double>(act_dim);
            lp_new.array() += lp_const;

            Eigen::ArrayXd ratio = (lp_new - mb.log_probs_old).array().exp();
            Eigen::ArrayXd adv = mb.advantages.array();
            Eigen::ArrayXd clipped =
                ratio.min(1.0 + cfg.clip_epsilon).max(1.0 - cfg.clip_epsilon);
            double policy_loss = -((ratio * adv).min(clipped * adv)).mean();

            // dL/d(logprob): zero where the clip gates the gradient.
            Eigen::ArrayXd dlp(m);
            for (int i = 0; i < m; ++i) {
                bool gated = (adv[i] > 0.0 && ratio[i] > 1.0 + cfg.clip_epsilon) ||
                             (adv[i] < 0.0 && ratio[i] < 1.0 - cfg.clip_epsilon);
                dlp[i] = gated ? 0.0 : -adv[i] * ratio[i] / static_cast<double>(m);
            }

            // dL/dmu and dL/dlog_std through the Gaussian density.
            Eigen::ArrayXXd dmu =
                (zscore.colwise() / sigma).rowwise() * dlp.transpose();
            Eigen::VectorXd dlog_std =
                ((zscore * zscore - 1.0).rowwise() * dlp.transpose())
                    .rowwise()
                    .sum()
                    .matrix();
            dlog_std.array() -= cfg.entropy_coef;  // entropy bonus

            double bc = 0.0;
            if (use_bc) {
                Eigen::MatrixXd diff = mu.topRows(teacher_dim) - mb.teacher;
                bc = diff.array().square().colwise().sum().mean();
                dmu.topRows(teacher_dim) +=
                    (2.0 * bc_lambda / static_cast<double>(m)) * diff.array();
            }

            // critic
            Eigen::MatrixXd val_in = agent.value_input(mb.obs, mb.priv);
            Eigen::MatrixXd v = agent.value.forward(val_in, val_cache);
            Eigen::VectorXd verr = v.row(0).transpose() - mb.returns;
            double value_loss = cfg.value_coef * 0.5 * verr.array().square().mean();

            double entropy = agent.policy.entropy();
            double total_loss =
                policy_loss - cfg.entropy_coef * entropy + value_loss + bc_lambda * bc;
            if (!std::isfinite(total_loss)) {
                stats.aborted = true;
                stats.bad_minibatch = minibatches;
                return stats;
            }

            // backprop actor
            nn::Mlp::Gradients pol_grads = agent.policy.net.zero_gradients();
            Eigen::MatrixXd din =
                agent.policy.net.backward(pol_cache, dmu.matrix(), pol_grads);
            Eigen::VectorXd actor_grad(agent.actor_param_count());
            int n1 = agent.policy.net.param_count();
            actor_grad.segment(0, n1) = nn::Mlp::flatten_grads(pol_grads);
            actor_grad.segment(n1, act_dim) = dlog_std;
            if (agent.use_encoder) {
                nn::Mlp::Gradients enc_grads = agent.encoder.zero_gradients();
                Eigen::MatrixXd dz = din.bottomRows(agent.encoder.output_dim());
                agent.encoder.backward(enc_cache, dz, enc_grads);
                actor_grad.segment(n1 + act_dim, agent.encoder.param_count()) =
                    nn::Mlp::flatten_grads(enc_grads);
            }
            Eigen::VectorXd actor_params = agent.actor_params();
            actor_opt.step(actor_params, actor_grad);
            agent.set_actor_params(actor_params);

            // backprop critic
            nn::Mlp::Gradients val_grads = agent.value.zero_gradients();
            Eigen::MatrixXd dv(1, m);
            dv.row(0) =
                (cfg.value_coef / static_cast<double>(m)) * verr.transpose();
            agent.value.backward(val_cache, dv, val_grads);
            Eigen::VectorXd value_params = agent.value.flatten();
            value_opt.step(value_params, nn::Mlp::flatten_grads(val_grads));
            agent.value.set_from_flat(value_params);

            loss_accum += policy_loss;
            vloss_accum += value_loss;
            ent_accum += entropy;
            bc_accum += bc;
            clip_accum += ((ratio - 1.0).abs() > cfg.clip_epsilon).cast<double>().mean();
            ++minibatches;
            (void)obs_rows;
        }
        ++stats.epochs_run;

        // KL estimate over the full batch, for early stopping.
        Eigen::MatrixXd mu_full =
            agent.mean_actions(batch.observations, batch.privileged);
        Eigen::VectorXd lp_full = agent.policy.log_prob_batch(mu_full, batch.actions);
        stats.kl = (batch.log_probs - lp_full).mean();
        if (stats.kl > cfg.kl_early_stop) break;
    }

    if (minibatches > 0) {
        stats.policy_loss = loss_accum / minibatches;
        stats.value_loss = vloss_accum / minibatches;
        stats.entropy = ent_accum / minibatches;
        stats.bc_loss = bc_accum / minibatches;
        stats.clip_fraction = clip_accum / minibatches;
    }
    return stats;
}

}  // namespace tailsim::rl
