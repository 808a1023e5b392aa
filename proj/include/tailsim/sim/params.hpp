#pragma once

#include <stdexcept>
#include <utility>

namespace tailsim::sim {

struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Reduced-order robot: cuboid torso with a uniform rod pivoting at the torso
// center of mass. The rod stands in for the arm's dominant (first) joint.
struct RobotParams {
    double arm_mass = 1.98193;    // kg
    double body_mass = 12.0;      // kg
    double arm_length = 0.310409; // m
    double body_height = 0.30;    // m
    double body_width = 0.28;     // m
    double body_length = 0.40;    // m
    double arm_torque_limit = 8.0;     // N·m
    double arm_joint_min = -1.6;       // rad, relative to torso
    double arm_joint_max = 1.6;        // rad
    double arm_stow_angle = 0.9;       // rad, resting pose; a locked arm holds it
    double leg_proxy_force_limit = 60.0;   // N
    double leg_proxy_torque_limit = 12.0;  // N·m

    void validate() const {
        if (arm_mass < 0.0) throw ParamError("arm_mass must be >= 0");
        if (body_mass <= 0.0) throw ParamError("body_mass must be > 0");
        if (arm_length <= 0.0) throw ParamError("arm_length must be > 0");
        if (body_height <= 0.0 || body_width <= 0.0 || body_length <= 0.0)
            throw ParamError("body dimensions must be > 0");
        if (arm_joint_min > arm_joint_max)
            throw ParamError("arm joint limits out of order");
        if (arm_torque_limit < 0.0 || leg_proxy_force_limit < 0.0 ||
            leg_proxy_torque_limit < 0.0)
            throw ParamError("torque/force limits must be >= 0");
    }

    double total_mass() const { return arm_mass + body_mass; }
};

struct Inertias {
    double arm;   // rod about its pivot, kg·m²
    double body;  // cuboid about the relevant central axis, kg·m²
};

// Rod about one end: M l²/3. Cuboid about the roll axis: M (h²+w²)/12;
// about the yaw axis (top-down scenario): M (d²+w²)/12.
inline Inertias derive_inertias(const RobotParams& p, bool yaw_plane = false) {
    p.validate();
    double i_arm = p.arm_mass * p.arm_length * p.arm_length / 3.0;
    double i_body =
        yaw_plane
            ? p.body_mass * (p.body_length * p.body_length + p.body_width * p.body_width) / 12.0
            : p.body_mass * (p.body_height * p.body_height + p.body_width * p.body_width) / 12.0;
    return {i_arm, i_body};
}

}  // namespace tailsim::sim
