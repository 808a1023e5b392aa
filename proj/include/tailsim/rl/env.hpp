#pragma once

#include <Eigen/Dense>

namespace tailsim::rl {

// On-policy environment interface. Implementations own their RNG stream so
// parallel instances never share mutable state.
class Env {
  public:
    virtual ~Env() = default;

    virtual int obs_dim() const = 0;
    virtual int priv_dim() const = 0;
    virtual int action_dim() const = 0;

    // Starts a fresh episode and returns the first observation.
    virtual void reset() = 0;
    // Applies one policy action; fills reward/done. Observations after the
    // call reflect the new state (or the freshly reset one if done).
    virtual void step(const Eigen::VectorXd& action, double& reward, bool& done) = 0;

    virtual Eigen::VectorXd observation() const = 0;
    virtual Eigen::VectorXd privileged() const = 0;
};

}  // namespace tailsim::rl
