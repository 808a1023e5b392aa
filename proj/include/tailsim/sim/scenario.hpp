#pragma once

#include <cmath>
#include <stdexcept>

#include "tailsim/sim/params.hpp"

namespace tailsim::sim {

enum class Scenario { Stabilize, Turn };

enum class ArmMode { NoArm, Locked, Actuated };

// Abstraction of foot-ground interaction. The support polygon can exert a
// bounded restoring torque; lateral foot friction saturates; in the Turn
// scenario the friction budget improves when the system CoM leans into the
// turn (lean_gain scales that effect).
struct ContactModel {
    double support_torque_limit = 18.0;    // N·m
    double support_stiffness = 220.0;      // N·m/rad
    double support_damping = 9.0;          // N·m·s/rad
    double lateral_friction_coefficient = 0.22;
    double lateral_damping = 160.0;        // N·s/m, pre-saturation slope
    double forward_drag = 18.0;            // N·s/m
    double yaw_align_stiffness = 14.0;     // N·m/rad of sideslip
    double yaw_damping = 1.1;              // N·m·s/rad
    double lean_gain = 0.45;               // friction budget gain per unit lean
    double yaw_friction_lever = 0.12;      // m, grip lever arm capping leg yaw torque

    void validate() const {
        if (support_torque_limit < 0 || support_stiffness < 0 || support_damping < 0 ||
            lateral_friction_coefficient < 0 || lateral_damping < 0 || forward_drag < 0 ||
            yaw_align_stiffness < 0 || yaw_damping < 0 || lean_gain < 0 ||
            yaw_friction_lever < 0)
            throw ParamError("contact model entries must be >= 0");
    }
};

struct ScenarioConfig {
    Scenario scenario = Scenario::Stabilize;
    ArmMode arm_mode = ArmMode::Actuated;
    double gravity = 9.81;          // m/s²
    double dt = 0.005;              // s
    double episode_length = 20.0;   // s
    ContactModel contact;
    bool contact_enabled = true;
    bool gravity_enabled = true;
    // Stabilize: roll limit. Turn: sideslip limit (proxy for the base
    // colliding with the ground after losing grip).
    double termination_angle = 0.6; // rad
    // Push magnitudes are quoted in simulator units of uncertain scale; this
    // converts them into the reduced model's Newtons.
    double perturbation_force_scale = 0.10;

    void validate() const {
        if (dt <= 0.0) throw ParamError("dt must be > 0");
        if (episode_length <= 0.0) throw ParamError("episode_length must be > 0");
        double steps = episode_length / dt;
        if (std::abs(steps - std::round(steps)) > 1e-6)
            throw ParamError("episode_length must be a multiple of dt");
        if (gravity < 0.0) throw ParamError("gravity must be >= 0");
        contact.validate();
    }

    int max_steps() const { return static_cast<int>(std::round(episode_length / dt)); }
};

// Per-scenario contact tuning. The Turn scenario runs on a low-grip surface:
// at the top commanded speed the centripetal force of a tight turn exceeds
// the flat friction budget (mu*m*g ~ 0.78 m/s^2 of lateral acceleration
// against the ~0.96 m/s^2 a 0.8 m/s, 1.2 rad/s turn requires), so holding
// such turns requires leaning the appendage into them.
inline ScenarioConfig default_scenario_config(Scenario scenario) {
    ScenarioConfig cfg;
    cfg.scenario = scenario;
    if (scenario == Scenario::Turn) {
        cfg.contact.lateral_friction_coefficient = 0.08;
        cfg.contact.lean_gain = 0.60;
    }
    return cfg;
}

}  // namespace tailsim::sim
