#include "tailsim/nn/mlp.hpp"

#include <cmath>

namespace tailsim::nn {

Mlp::Mlp(std::vector<int> widths, Activation act, Rng& rng, double output_scale)
    : widths_(std::move(widths)), act_(act) {
    if (widths_.size() < 2) throw ShapeError("mlp: need at least input and output widths");
    for (int w : widths_)
        if (w <= 0) throw ShapeError("mlp: widths must be positive");
    for (std::size_t i = 0; i + 1 < widths_.size(); ++i) {
        int in = widths_[i], out = widths_[i + 1];
        double bound = std::sqrt(6.0 / (in + out));
        if (i + 2 == widths_.size()) bound *= output_scale;
        Eigen::MatrixXd w(out, in);
        for (int r = 0; r < out; ++r)
            for (int c = 0; c < in; ++c) w(r, c) = rng.uniform(-bound, bound);
        weights_.push_back(std::move(w));
        biases_.push_back(Eigen::VectorXd::Zero(out));
    }
}

Eigen::MatrixXd Mlp::activate(const Eigen::MatrixXd& z) const {
    if (act_ == Activation::Tanh) return z.array().tanh();
    // elu
    return z.array().max(0.0) + (z.array().min(0.0).exp() - 1.0).min(0.0);
}

Eigen::MatrixXd Mlp::activate_grad(const Eigen::MatrixXd& z) const {
    if (act_ == Activation::Tanh) {
        Eigen::ArrayXXd t = z.array().tanh();
        return 1.0 - t * t;
    }
    return (z.array() >= 0.0).select(Eigen::ArrayXXd::Ones(z.rows(), z.cols()),
                                     z.array().exp());
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input) const {
    if (input.rows() != widths_.front())
        throw ShapeError("mlp forward: input dim mismatch");
    Eigen::MatrixXd x = input;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        Eigen::MatrixXd z = (weights_[i] * x).colwise() + biases_[i];
        x = (i + 1 == weights_.size()) ? z : activate(z);
    }
    return x;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Cache& cache) const {
    if (input.rows() != widths_.front())
        throw ShapeError("mlp forward: input dim mismatch");
    cache.input = input;
    cache.pre.clear();
    cache.post.clear();
    Eigen::MatrixXd x = input;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        Eigen::MatrixXd z = (weights_[i] * x).colwise() + biases_[i];
        cache.pre.push_back(z);
        x = (i + 1 == weights_.size()) ? z : activate(z);
        cache.post.push_back(x);
    }
    return x;
}

Eigen::VectorXd Mlp::forward_vec(const Eigen::VectorXd& input) const {
    return forward(Eigen::MatrixXd(input)).col(0);
}

Eigen::MatrixXd Mlp::backward(const Cache& cache, const Eigen::MatrixXd& output_grad,
                              Gradients& grads) const {
    if (output_grad.rows() != widths_.back() || output_grad.cols() != cache.input.cols())
        throw ShapeError("mlp backward: output grad shape mismatch");
    if (grads.weights.size() != weights_.size()) grads = zero_gradients();

    Eigen::MatrixXd delta = output_grad;  // dL/dz for the last (linear) layer
    for (int i = static_cast<int>(weights_.size()) - 1; i >= 0; --i) {
        const Eigen::MatrixXd& below =
            (i == 0) ? cache.input : cache.post[static_cast<std::size_t>(i - 1)];
        grads.weights[static_cast<std::size_t>(i)] = delta * below.transpose();
        grads.biases[static_cast<std::size_t>(i)] = delta.rowwise().sum();
        if (i > 0) {
            Eigen::MatrixXd dx = weights_[static_cast<std::size_t>(i)].transpose() * delta;
            delta = dx.array() *
                    activate_grad(cache.pre[static_cast<std::size_t>(i - 1)]).array();
        } else {
            return weights_[0].transpose() * delta;
        }
    }
    return {};
}

int Mlp::param_count() const {
    int n = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i)
        n += static_cast<int>(weights_[i].size() + biases_[i].size());
    return n;
}

Eigen::VectorXd Mlp::flatten() const {
    Eigen::VectorXd flat(param_count());
    int off = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        Eigen::Map<const Eigen::VectorXd> w(weights_[i].data(), weights_[i].size());
        flat.segment(off, w.size()) = w;
        off += static_cast<int>(w.size());
        flat.segment(off, biases_[i].size()) = biases_[i];
        off += static_cast<int>(biases_[i].size());
    }
    return flat;
}

void Mlp::set_from_flat(const Eigen::VectorXd& flat) {
    if (flat.size() != param_count()) throw ShapeError("mlp: flat size mismatch");
    int off = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        Eigen::Map<Eigen::VectorXd> w(weights_[i].data(), weights_[i].size());
        w = flat.segment(off, w.size());
        off += static_cast<int>(w.size());
        biases_[i] = flat.segment(off, biases_[i].size());
        off += static_cast<int>(biases_[i].size());
    }
}

Eigen::VectorXd Mlp::flatten_grads(const Gradients& grads) {
    int n = 0;
    for (std::size_t i = 0; i < grads.weights.size(); ++i)
        n += static_cast<int>(grads.weights[i].size() + grads.biases[i].size());
    Eigen::VectorXd flat(n);
    int off = 0;
    for (std::size_t i = 0; i < grads.weights.size(); ++i) {
        Eigen::Map<const Eigen::VectorXd> w(grads.weights[i].data(),
                                            grads.weights[i].size());
        flat.segment(off, w.size()) = w;
        off += static_cast<int>(w.size());
        flat.segment(off, grads.biases[i].size()) = grads.biases[i];
        off += static_cast<int>(grads.biases[i].size());
    }
    return flat;
}

Mlp::Gradients Mlp::zero_gradients() const {
    Gradients g;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        g.weights.push_back(Eigen::MatrixXd::Zero(weights_[i].rows(), weights_[i].cols()));
        g.biases.push_back(Eigen::VectorXd::Zero(biases_[i].size()));
    }
    return g;
}

}  // namespace tailsim::nn
