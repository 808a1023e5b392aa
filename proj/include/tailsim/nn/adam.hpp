#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace tailsim::nn {

// Adam over a flat parameter vector.
class Adam {
  public:
    Adam() = default;
    Adam(int param_count, double lr = 3e-4, double beta1 = 0.9, double beta2 = 0.999,
         double epsilon = 1e-8)
        : lr_(lr),
          beta1_(beta1),
          beta2_(beta2),
          eps_(epsilon),
          m_(Eigen::VectorXd::Zero(param_count)),
          v_(Eigen::VectorXd::Zero(param_count)) {}

    void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
        ++t_;
        m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
        v_ = beta2_ * v_.array() + (1.0 - beta2_) * grad.array().square();
        double bc1 = 1.0 - std::pow(beta1_, t_);
        double bc2 = 1.0 - std::pow(beta2_, t_);
        params.array() -=
            lr_ * (m_.array() / bc1) / ((v_.array() / bc2).sqrt() + eps_);
    }

    long step_count() const { return t_; }
    double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }

  private:
    double lr_ = 3e-4, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    long t_ = 0;
    Eigen::VectorXd m_, v_;
};

}  // namespace tailsim::nn
