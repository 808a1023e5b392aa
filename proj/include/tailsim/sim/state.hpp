#pragma once

#include <array>
#include <cmath>

namespace tailsim::sim {

// Planar base + one arm joint. Interpretation of the angle depends on the
// scenario: roll in Stabilize (frontal plane), yaw in Turn (top-down plane).
// Positions/velocities are world frame. arm_angle is the joint angle relative
// to the torso; arm_ang_velocity is the arm's absolute angular velocity so
// that angular momentum bookkeeping stays linear.
struct SimState {
    std::array<double, 2> base_position{0.0, 0.0};      // m
    double base_angle = 0.0;                            // rad
    std::array<double, 2> base_lin_velocity{0.0, 0.0};  // m/s
    double base_ang_velocity = 0.0;                     // rad/s
    double arm_angle = 0.0;                             // rad, relative joint angle
    double arm_ang_velocity = 0.0;                      // rad/s, absolute
    double time = 0.0;                                  // s

    double arm_joint_velocity() const { return arm_ang_velocity - base_ang_velocity; }

    bool finite() const {
        return std::isfinite(base_position[0]) && std::isfinite(base_position[1]) &&
               std::isfinite(base_angle) && std::isfinite(base_lin_velocity[0]) &&
               std::isfinite(base_lin_velocity[1]) && std::isfinite(base_ang_velocity) &&
               std::isfinite(arm_angle) && std::isfinite(arm_ang_velocity) &&
               std::isfinite(time);
    }
};

}  // namespace tailsim::sim
