#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tailsim::analysis {

struct RegressionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares of y on x, on raw values. Degenerate x variance is
// an error; zero y variance yields R^2 = 0 (nothing to explain).
inline OlsFit ols(const std::vector<std::pair<double, double>>& samples) {
    const std::size_t n = samples.size();
    if (n < 3) throw RegressionError("ols: need at least 3 samples");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : samples) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : samples) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0.0) throw RegressionError("ols: zero variance in x");
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 0.0;
    return fit;
}

}  // namespace tailsim::analysis
