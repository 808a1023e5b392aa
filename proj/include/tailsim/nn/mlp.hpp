#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "tailsim/common/rng.hpp"

namespace tailsim::nn {

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Activation { Tanh, Elu };

// Dense feed-forward net, activation on hidden layers, linear output.
// Batches are column-major: one sample per column. Reverse-mode gradients are
// computed by hand from a cached forward pass.
class Mlp {
  public:
    struct Cache {
        Eigen::MatrixXd input;
        std::vector<Eigen::MatrixXd> pre;   // pre-activation per layer
        std::vector<Eigen::MatrixXd> post;  // post-activation per layer
    };

    struct Gradients {
        std::vector<Eigen::MatrixXd> weights;
        std::vector<Eigen::VectorXd> biases;
    };

    Mlp() = default;
    Mlp(std::vector<int> widths, Activation act, Rng& rng,
        double output_scale = 1.0);

    Eigen::MatrixXd forward(const Eigen::MatrixXd& input) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Cache& cache) const;
    Eigen::VectorXd forward_vec(const Eigen::VectorXd& input) const;

    // output_grad is dL/dY for the cached batch; returns dL/dX and fills
    // parameter gradients (overwriting them).
    Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& output_grad,
                             Gradients& grads) const;

    int input_dim() const { return widths_.front(); }
    int output_dim() const { return widths_.back(); }
    const std::vector<int>& widths() const { return widths_; }
    Activation activation() const { return act_; }
    std::size_t layer_count() const { return weights_.size(); }

    int param_count() const;
    Eigen::VectorXd flatten() const;
    void set_from_flat(const Eigen::VectorXd& flat);
    static Eigen::VectorXd flatten_grads(const Gradients& grads);

    Gradients zero_gradients() const;

    std::vector<Eigen::MatrixXd>& weights() { return weights_; }
    std::vector<Eigen::VectorXd>& biases() { return biases_; }
    const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
    const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

  private:
    Eigen::MatrixXd activate(const Eigen::MatrixXd& z) const;
    Eigen::MatrixXd activate_grad(const Eigen::MatrixXd& z) const;

    std::vector<int> widths_;
    Activation act_ = Activation::Elu;
    std::vector<Eigen::MatrixXd> weights_;
    std::vector<Eigen::VectorXd> biases_;
};

}  // namespace tailsim::nn
