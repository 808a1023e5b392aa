#include "tailsim/rl/rollout.hpp"

#include <stdexcept>

namespace tailsim::rl {

RolloutBatch collect_rollouts(Agent& agent, std::vector<std::unique_ptr<Env>>& envs,
                              int horizon, Rng& rng, const TeacherView* teacher,
                              bool update_normalizers) {
    if (envs.empty() || horizon <= 0)
        throw std::invalid_argument("collect_rollouts: need envs and positive horizon");
    const int n = static_cast<int>(envs.size());
    const int obs_dim = envs[0]->obs_dim();
    const int priv_dim = envs[0]->priv_dim();
    const int act_dim = agent.action_dim();

    RolloutBatch batch;
    batch.horizon = horizon;
    batch.env_count = n;
    batch.observations.resize(obs_dim, horizon * n);
    batch.privileged.resize(priv_dim, horizon * n);
    batch.actions.resize(act_dim, horizon * n);
    batch.log_probs.resize(horizon * n);
    batch.values.resize(horizon * n);
    batch.rewards.resize(horizon * n);
    batch.dones.resize(horizon * n);
    if (teacher)
        batch.teacher_actions.resize(teacher->agent->action_dim(), horizon * n);

    std::vector<double> acc_return(static_cast<std::size_t>(n), 0.0);
    std::vector<double> acc_len(static_cast<std::size_t>(n), 0.0);

    Eigen::MatrixXd obs(obs_dim, n), priv(priv_dim, n);
    Eigen::VectorXd std_dev = agent.policy.log_std.array().exp();

    for (int t = 0; t < horizon; ++t) {
        for (int e = 0; e < n; ++e) {
            obs.col(e) = envs[static_cast<std::size_t>(e)]->observation();
            priv.col(e) = envs[static_cast<std::size_t>(e)]->privileged();
            if (update_normalizers) {
                agent.obs_norm.update(obs.col(e));
                if (priv_dim > 0) agent.priv_norm.update(priv.col(e));
            }
        }
        Eigen::MatrixXd mu = agent.mean_actions(obs, priv);
        Eigen::VectorXd vals = agent.values(obs, priv);

        Eigen::MatrixXd teacher_mu;
        if (teacher) {
            Eigen::MatrixXd tobs(teacher->obs_index.size(), n);
            Eigen::MatrixXd tpriv(teacher->priv_index.size(), n);
            for (int e = 0; e < n; ++e) {
                tobs.col(e) = teacher->observe(obs.col(e));
                tpriv.col(e) = teacher->observe_priv(priv.col(e));
            }
            teacher_mu = teacher->agent->mean_actions(tobs, tpriv);
        }

        for (int e = 0; e < n; ++e) {
            int idx = batch.index(t, e);
            Eigen::VectorXd action(act_dim);
            for (int j = 0; j < act_dim; ++j)
                action[j] = mu(j, e) + std_dev[j] * rng.normal();
            double lp = agent.policy.log_prob_given_mean(mu.col(e), action);

            double reward = 0.0;
            bool done = false;
            envs[static_cast<std::size_t>(e)]->step(action, reward, done);

            batch.observations.col(idx) = obs.col(e);
            if (priv_dim > 0) batch.privileged.col(idx) = priv.col(e);
            batch.actions.col(idx) = action;
            batch.log_probs[idx] = lp;
            batch.values[idx] = vals[e];
            batch.rewards[idx] = reward;
            batch.dones[idx] = done ? 1.0 : 0.0;
            if (teacher) batch.teacher_actions.col(idx) = teacher_mu.col(e);

            acc_return[static_cast<std::size_t>(e)] += reward;
            acc_len[static_cast<std::size_t>(e)] += 1.0;
            if (done) {
                batch.episode_returns.push_back(acc_return[static_cast<std::size_t>(e)]);
                batch.episode_lengths.push_back(acc_len[static_cast<std::size_t>(e)]);
                acc_return[static_cast<std::size_t>(e)] = 0.0;
                acc_len[static_cast<std::size_t>(e)] = 0.0;
            }
        }
    }

    // Value of the state each env is left in, for GAE bootstrap.
    for (int e = 0; e < n; ++e) {
        obs.col(e) = envs[static_cast<std::size_t>(e)]->observation();
        priv.col(e) = envs[static_cast<std::size_t>(e)]->privileged();
    }
    batch.bootstrap_values = agent.values(obs, priv);
    return batch;
}

}  // namespace tailsim::rl
