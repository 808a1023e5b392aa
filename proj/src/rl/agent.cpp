#include "tailsim/rl/agent.hpp"

namespace tailsim::rl {

namespace {

void put_mlp(nn::Checkpoint& ckpt, const std::string& prefix, const nn::Mlp& net) {
    Eigen::VectorXd widths(net.widths().size());
    for (std::size_t i = 0; i < net.widths().size(); ++i)
        widths[static_cast<int>(i)] = net.widths()[i];
    ckpt.put(prefix + ".widths", widths);
    ckpt.put_scalar(prefix + ".activation",
                    net.activation() == nn::Activation::Tanh ? 0.0 : 1.0);
    ckpt.put(prefix + ".params", net.flatten());
}

nn::Mlp get_mlp(const nn::Checkpoint& ckpt, const std::string& prefix) {
    Eigen::VectorXd w = ckpt.get_vector(prefix + ".widths");
    std::vector<int> widths(static_cast<std::size_t>(w.size()));
    for (int i = 0; i < w.size(); ++i) widths[static_cast<std::size_t>(i)] = static_cast<int>(w[i]);
    auto act = ckpt.get_scalar(prefix + ".activation") == 0.0 ? nn::Activation::Tanh
                                                              : nn::Activation::Elu;
    Rng dummy(0);
    nn::Mlp net(widths, act, dummy);
    net.set_from_flat(ckpt.get_vector(prefix + ".params"));
    return net;
}

}  // namespace

void Agent::to_checkpoint(nn::Checkpoint& ckpt, const std::string& prefix) const {
    put_mlp(ckpt, prefix + "policy", policy.net);
    ckpt.put(prefix + "policy.log_std", policy.log_std);
    put_mlp(ckpt, prefix + "value", value);
    ckpt.put_scalar(prefix + "use_encoder", use_encoder ? 1.0 : 0.0);
    if (use_encoder) put_mlp(ckpt, prefix + "encoder", encoder);
    ckpt.put(prefix + "obs_norm", obs_norm.pack());
    ckpt.put(prefix + "priv_norm", priv_norm.pack());
}

Agent Agent::from_checkpoint(const nn::Checkpoint& ckpt, const std::string& prefix) {
    Agent a;
    a.policy.net = get_mlp(ckpt, prefix + "policy");
    a.policy.log_std = ckpt.get_vector(prefix + "policy.log_std");
    a.value = get_mlp(ckpt, prefix + "value");
    a.use_encoder = ckpt.get_scalar(prefix + "use_encoder") != 0.0;
    if (a.use_encoder) a.encoder = get_mlp(ckpt, prefix + "encoder");
    a.obs_norm = nn::Normalizer::unpack(ckpt.get_vector(prefix + "obs_norm"));
    a.priv_norm = nn::Normalizer::unpack(ckpt.get_vector(prefix + "priv_norm"));
    return a;
}

}  // namespace tailsim::rl
