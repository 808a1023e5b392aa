#pragma once

#include <stdexcept>
#include <vector>

#include "tailsim/common/rng.hpp"
#include "tailsim/sim/params.hpp"
#include "tailsim/sim/perturbation.hpp"
#include "tailsim/sim/scenario.hpp"
#include "tailsim/sim/state.hpp"

namespace tailsim::sim {

struct IntegrationError : std::runtime_error {
    SimState state;
    IntegrationError(const std::string& what, SimState s)
        : std::runtime_error(what), state(s) {}
};

// Bounded stand-in for the 12 leg joints: a force on the base plus a
// restoring torque routed through the contact model.
struct LegProxyWrench {
    double force = 0.0;   // N, along the base forward axis
    double torque = 0.0;  // N·m, about the scenario's rotation axis
};

struct CommandSample {
    double lin_velocity = 0.0;  // m/s
    double yaw_rate = 0.0;      // rad/s (Turn scenario)
};

// One semi-implicit Euler step of the torso+rod system. The two bodies are
// coupled at the torso CoM; with contact and gravity disabled the joint
// torque exchanges angular momentum exactly, so L = I_a*w_a + I_b*w_b is
// conserved to round-off.
SimState step_dynamics(const SimState& state, double arm_torque,
                       const LegProxyWrench& leg,
                       const std::vector<PerturbationEvent>& perturbations,
                       const RobotParams& params, const ScenarioConfig& cfg);

bool is_terminated(const SimState& state, const ScenarioConfig& cfg);

// Sideslip between velocity and heading, Turn scenario failure proxy.
double slip_angle(const SimState& state);

struct ResetNoise {
    double angle = 0.05;     // rad
    double velocity = 0.05;  // rad/s or m/s
};

SimState reset(Rng& rng, const ScenarioConfig& cfg, const RobotParams& params,
               const CommandSample& command, const ResetNoise& noise = {});

}  // namespace tailsim::sim
