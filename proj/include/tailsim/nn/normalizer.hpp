#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace tailsim::nn {

// Running mean/variance observation normalizer (Welford). Frozen at
// evaluation so deployed policies see the statistics they trained with.
class Normalizer {
  public:
    Normalizer() = default;
    explicit Normalizer(int dim)
        : mean_(Eigen::VectorXd::Zero(dim)),
          m2_(Eigen::VectorXd::Zero(dim)) {}

    void update(const Eigen::VectorXd& x) {
        if (frozen_) return;
        count_ += 1.0;
        Eigen::VectorXd delta = x - mean_;
        mean_ += delta / count_;
        m2_ += delta.cwiseProduct(x - mean_);
    }

    Eigen::VectorXd normalize(const Eigen::VectorXd& x) const {
        if (count_ < 2.0) return x;
        Eigen::ArrayXd std = (m2_.array() / (count_ - 1.0)).sqrt().max(1e-6);
        return ((x - mean_).array() / std).max(-10.0).min(10.0);
    }

    Eigen::MatrixXd normalize(const Eigen::MatrixXd& x) const {
        Eigen::MatrixXd out(x.rows(), x.cols());
        for (int c = 0; c < x.cols(); ++c) out.col(c) = normalize(Eigen::VectorXd(x.col(c)));
        return out;
    }

    void freeze() { frozen_ = true; }
    void unfreeze() { frozen_ = false; }
    bool frozen() const { return frozen_; }
    int dim() const { return static_cast<int>(mean_.size()); }
    double count() const { return count_; }

    Eigen::VectorXd pack() const {
        Eigen::VectorXd v(2 * mean_.size() + 2);
        v << mean_, m2_, count_, (frozen_ ? 1.0 : 0.0);
        return v;
    }
    static Normalizer unpack(const Eigen::VectorXd& v) {
        int dim = static_cast<int>((v.size() - 2) / 2);
        Normalizer n(dim);
        n.mean_ = v.segment(0, dim);
        n.m2_ = v.segment(dim, dim);
        n.count_ = v[2 * dim];
        n.frozen_ = v[2 * dim + 1] != 0.0;
        return n;
    }

  private:
    Eigen::VectorXd mean_, m2_;
    double count_ = 0.0;
    bool frozen_ = false;
};

}  // namespace tailsim::nn
