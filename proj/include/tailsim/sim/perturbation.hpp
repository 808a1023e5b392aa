#pragma once

#include <array>
#include <vector>

#include "tailsim/common/rng.hpp"
#include "tailsim/sim/params.hpp"

namespace tailsim::sim {

// Square force pulse applied to the base. The direction is one of the two
// in-plane axes; the offset from the base CoM sets the lever arm and with it
// the roll torque of the push.
struct PerturbationEvent {
    double force_magnitude = 0.0;          // config units (see footnote handling)
    std::array<double, 2> direction{0.0, 1.0};  // unit vector, in-plane
    double offset_from_base = 0.0;         // m
    double start_time = 0.0;               // s
    double duration = 0.2;                 // s

    bool active_at(double t) const {
        return t >= start_time && t < start_time + duration;
    }
};

struct PerturbationConfig {
    std::pair<double, double> force_range{200.0, 300.0};
    std::pair<double, double> offset_range{-0.12, 0.12};
    double duration = 0.2;          // s
    double interval_mean = 4.0;     // s between pulse starts, on average
};

inline PerturbationEvent sample_perturbation(Rng& rng,
                                             std::pair<double, double> force_range,
                                             std::pair<double, double> offset_range,
                                             double episode_length = 20.0,
                                             double duration = 0.2) {
    if (force_range.first > force_range.second || offset_range.first > offset_range.second)
        throw ParamError("sample_perturbation: inverted range");
    PerturbationEvent ev;
    ev.force_magnitude = rng.uniform(force_range.first, force_range.second);
    ev.offset_from_base = rng.uniform(offset_range.first, offset_range.second);
    // Push along one of the two in-plane axes, either way.
    double sign = rng.coin() ? 1.0 : -1.0;
    if (rng.coin())
        ev.direction = {sign, 0.0};
    else
        ev.direction = {0.0, sign};
    ev.start_time = rng.uniform(0.0, episode_length);
    ev.duration = duration;
    return ev;
}

}  // namespace tailsim::sim
