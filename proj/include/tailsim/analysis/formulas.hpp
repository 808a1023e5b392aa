#pragma once

#include <cmath>

#include "tailsim/sim/params.hpp"

namespace tailsim::analysis {

// Horizontal shift of the system CoM when the rod sits at angle theta from
// the horizontal: M_a/(M_a+M_b) * l/2 * cos(theta). Small for realistic mass
// ratios, which is why the static effect of the arm is negligible.
inline double com_shift(const sim::RobotParams& p, double theta) {
    p.validate();
    return p.arm_mass / (p.arm_mass + p.body_mass) * 0.5 * p.arm_length *
           std::cos(theta);
}

inline double com_shift_bound(const sim::RobotParams& p) {
    p.validate();
    return p.arm_mass / (p.arm_mass + p.body_mass) * 0.5 * p.arm_length;
}

// Angular-momentum exchange between rod and torso about the shared pivot:
// alpha_body / alpha_arm = -(M_a l^2 / 3) / (M_b (h^2+w^2) / 12)
//                        = -4 M_a l^2 / (M_b (h^2+w^2)).
inline double accel_coupling_ratio(const sim::RobotParams& p) {
    p.validate();
    return -4.0 * p.arm_mass * p.arm_length * p.arm_length /
           (p.body_mass * (p.body_height * p.body_height + p.body_width * p.body_width));
}

}  // namespace tailsim::analysis
