#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tailsim/sim/trajectory.hpp"

namespace tailsim::analysis {

struct LagError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cross-correlation lag between two uniformly sampled signals, restricted to
// |lag| <= window. Positive lag means `leader` precedes `follower`.
inline double cross_correlation_lag(const std::vector<double>& leader,
                                    const std::vector<double>& follower, double dt,
                                    double window_s = 1.0) {
    const std::size_t n = leader.size();
    if (n != follower.size() || n < 4)
        throw LagError("cross_correlation_lag: signals too short or mismatched");
    auto demean = [](std::vector<double> v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        for (double& x : v) x -= m;
        return v;
    };
    std::vector<double> a = demean(leader), b = demean(follower);
    const int max_shift = std::min<int>(static_cast<int>(window_s / dt),
                                        static_cast<int>(n) - 2);
    double best = -1e300;
    int best_shift = 0;
    for (int shift = -max_shift; shift <= max_shift; ++shift) {
        // correlate a(t) with b(t + shift): positive shift = b happens later
        double c = 0.0;
        int count = 0;
        for (int t = 0; t < static_cast<int>(n); ++t) {
            int u = t + shift;
            if (u < 0 || u >= static_cast<int>(n)) continue;
            c += a[static_cast<std::size_t>(t)] * b[static_cast<std::size_t>(u)];
            ++count;
        }
        if (count == 0) continue;
        c /= count;
        if (c > best) {
            best = c;
            best_shift = shift;
        }
    }
    return best_shift * dt;
}

// Lag between arm motion and body yaw response around a command step:
// cross-correlation of arm angular velocity against base yaw rate. Positive
// result means the arm leads the body.
inline double lag_analysis(const sim::TrajectoryRecord& rec, double window_s = 1.0) {
    const auto& rows = rec.samples;
    if (rows.size() < 8) throw LagError("lag_analysis: record too short");
    bool step_found = false;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].cmd_yaw != rows[i - 1].cmd_yaw) {
            step_found = true;
            break;
        }
    if (!step_found && rows.front().cmd_yaw == 0.0)
        throw LagError("lag_analysis: no yaw command step in record");
    double dt = rows[1].time - rows[0].time;
    std::vector<double> arm_vel, yaw_rate;
    arm_vel.reserve(rows.size());
    yaw_rate.reserve(rows.size());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        // joint rate: how fast the arm moves relative to the body
        arm_vel.push_back((rows[i].arm_angle - rows[i - 1].arm_angle) / dt);
        yaw_rate.push_back(rows[i].base_ang_velocity);
    }
    return cross_correlation_lag(arm_vel, yaw_rate, dt, window_s);
}

}  // namespace tailsim::analysis
