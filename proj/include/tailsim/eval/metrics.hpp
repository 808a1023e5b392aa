#pragma once

#include <stdexcept>
#include <vector>

namespace tailsim::eval {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Outcome of one evaluation episode.
struct TrialRow {
    int trial = 0;
    bool success = false;          // survived to the time limit
    double survival_fraction = 0;  // time alive / episode length, 1 on success
    double lin_tracking_error = 0; // mean |v_long - cmd| over the episode
    double yaw_tracking_error = 0; // mean |yaw_rate - cmd| over the episode
    double peak_base_angle = 0;    // max |angle| (roll or sideslip) observed
};

struct Metrics {
    int trials = 0;
    double success_rate = 0.0;
    double mean_survival = 0.0;
    double lin_tracking_error = 0.0;
    double yaw_tracking_error = 0.0;
    double peak_base_angle = 0.0;  // mean of per-trial peaks
};

inline Metrics aggregate(const std::vector<TrialRow>& rows) {
    if (rows.empty()) throw EvalError("aggregate: no trials");
    Metrics m;
    m.trials = static_cast<int>(rows.size());
    for (const auto& r : rows) {
        m.success_rate += r.success ? 1.0 : 0.0;
        m.mean_survival += r.survival_fraction;
        m.lin_tracking_error += r.lin_tracking_error;
        m.yaw_tracking_error += r.yaw_tracking_error;
        m.peak_base_angle += r.peak_base_angle;
    }
    const double n = static_cast<double>(m.trials);
    m.success_rate /= n;
    m.mean_survival /= n;
    m.lin_tracking_error /= n;
    m.yaw_tracking_error /= n;
    m.peak_base_angle /= n;
    return m;
}

}  // namespace tailsim::eval
