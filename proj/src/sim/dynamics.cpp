#include "tailsim/sim/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace tailsim::sim {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Inelastic joint stop: relative velocity zeroed, total angular momentum
// about the pivot preserved.
void merge_at_stop(double i_arm, double i_body, double& w_arm, double& w_body) {
    double w = (i_arm * w_arm + i_body * w_body) / (i_arm + i_body);
    w_arm = w;
    w_body = w;
}

SimState step_stabilize(const SimState& s, double arm_torque, const LegProxyWrench& leg,
                        const std::vector<PerturbationEvent>& perts,
                        const RobotParams& p, const ScenarioConfig& cfg) {
    const auto inertia = derive_inertias(p, /*yaw_plane=*/false);
    const double g = cfg.gravity_enabled ? cfg.gravity : 0.0;
    const double m = p.total_mass();
    const bool has_arm = p.arm_mass > 0.0;
    const bool locked = cfg.arm_mode == ArmMode::Locked && has_arm;
    const bool actuated = cfg.arm_mode == ArmMode::Actuated && has_arm;

    const double tau_arm =
        actuated ? clamp(arm_torque, -p.arm_torque_limit, p.arm_torque_limit) : 0.0;
    const double tau_leg =
        clamp(leg.torque, -p.leg_proxy_torque_limit, p.leg_proxy_torque_limit);
    const double f_leg = clamp(leg.force, -p.leg_proxy_force_limit, p.leg_proxy_force_limit);

    // Active pushes: lateral component loads the roll axis through a lever of
    // half the body height plus the sampled offset; the longitudinal
    // component only disturbs forward tracking.
    double f_push_x = 0.0, f_push_y = 0.0, tau_push = 0.0;
    for (const auto& ev : perts) {
        if (!ev.active_at(s.time)) continue;
        double f = ev.force_magnitude * cfg.perturbation_force_scale;
        f_push_x += f * ev.direction[0];
        f_push_y += f * ev.direction[1];
        tau_push += f * ev.direction[1] * (0.5 * p.body_height + ev.offset_from_base);
    }

    // Roll axis. Rotation is integrated about the torso CoM; ground geometry
    // enters as a saturated restoring torque plus an inverted-pendulum term.
    double tau_contact = 0.0;
    if (cfg.contact_enabled) {
        tau_contact = clamp(-cfg.contact.support_stiffness * s.base_angle -
                                cfg.contact.support_damping * s.base_ang_velocity,
                            -cfg.contact.support_torque_limit,
                            cfg.contact.support_torque_limit);
    }
    double tau_tip = cfg.contact_enabled ? p.body_mass * g * 0.5 * p.body_height *
                                               std::sin(s.base_angle)
                                         : 0.0;

    double w_body = s.base_ang_velocity;
    double w_arm = s.arm_ang_velocity;
    double theta = s.arm_angle;

    if (locked) {
        // Rigid torso+rod: the rod just adds inertia and a top-heavy gravity
        // torque at its locked angle.
        double i_eff = inertia.body + inertia.arm;
        double tau_grav_arm =
            p.arm_mass * g * 0.5 * p.arm_length * std::sin(s.base_angle + theta);
        w_body += cfg.dt *
                  (tau_tip + tau_contact + tau_leg + tau_push + tau_grav_arm) / i_eff;
        w_arm = w_body;
    } else if (has_arm) {
        double tau_grav_arm =
            p.arm_mass * g * 0.5 * p.arm_length * std::sin(s.base_angle + theta);
        w_arm += cfg.dt * (tau_arm + tau_grav_arm) / inertia.arm;
        w_body += cfg.dt *
                  (-tau_arm + tau_tip + tau_contact + tau_leg + tau_push) / inertia.body;
    } else {
        w_body += cfg.dt * (tau_tip + tau_contact + tau_leg + tau_push) / inertia.body;
        w_arm = 0.0;
    }

    // Translation: forward axis tracks the command against drag; lateral axis
    // resists pushes with saturated foot friction.
    double vx = s.base_lin_velocity[0];
    double vy = s.base_lin_velocity[1];
    double drag = cfg.contact_enabled ? cfg.contact.forward_drag : 0.0;
    double fric_cap = cfg.contact_enabled
                          ? cfg.contact.lateral_friction_coefficient * m * g
                          : 0.0;
    double f_fric_y = -clamp(cfg.contact.lateral_damping * vy, -fric_cap, fric_cap);
    vx += cfg.dt * (f_leg - drag * vx + f_push_x) / m;
    vy += cfg.dt * (f_push_y + f_fric_y) / m;

    SimState next = s;
    next.base_ang_velocity = w_body;
    next.arm_ang_velocity = w_arm;
    next.base_lin_velocity = {vx, vy};
    next.base_angle = s.base_angle + cfg.dt * w_body;
    next.base_position = {s.base_position[0] + cfg.dt * vx,
                          s.base_position[1] + cfg.dt * vy};
    if (has_arm && !locked) {
        theta += cfg.dt * (w_arm - w_body);
        if (theta < p.arm_joint_min || theta > p.arm_joint_max) {
            theta = clamp(theta, p.arm_joint_min, p.arm_joint_max);
            merge_at_stop(inertia.arm, inertia.body, next.arm_ang_velocity,
                          next.base_ang_velocity);
        }
    }
    next.arm_angle = theta;
    next.time = s.time + cfg.dt;
    return next;
}

SimState step_turn(const SimState& s, double arm_torque, const LegProxyWrench& leg,
                   const RobotParams& p, const ScenarioConfig& cfg) {
    const auto inertia = derive_inertias(p, /*yaw_plane=*/true);
    const double g = cfg.gravity_enabled ? cfg.gravity : 0.0;
    const double m = p.total_mass();
    const bool has_arm = p.arm_mass > 0.0;
    const bool locked = cfg.arm_mode == ArmMode::Locked && has_arm;
    const bool actuated = cfg.arm_mode == ArmMode::Actuated && has_arm;

    // Tail convention: joint angle theta > 0 swings the rod tip toward the
    // robot's left. Because the rod hangs backward, that swing is a clockwise
    // world rotation, so the reaction torque on the torso is +theta-ward
    // (counterclockwise): swinging the tail into a turn kicks the body into
    // the same turn. theta_dot = w_body - w_arm with w_arm the rod's absolute
    // rate.
    const double tau_arm =
        actuated ? clamp(arm_torque, -p.arm_torque_limit, p.arm_torque_limit) : 0.0;
    const double tau_leg =
        clamp(leg.torque, -p.leg_proxy_torque_limit, p.leg_proxy_torque_limit);
    const double f_leg = clamp(leg.force, -p.leg_proxy_force_limit, p.leg_proxy_force_limit);

    const double cs = std::cos(s.base_angle), sn = std::sin(s.base_angle);
    const double v_long = s.base_lin_velocity[0] * cs + s.base_lin_velocity[1] * sn;
    const double v_lat = -s.base_lin_velocity[0] * sn + s.base_lin_velocity[1] * cs;
    const double beta = slip_angle(s);

    double w_body = s.base_ang_velocity;
    double w_arm = s.arm_ang_velocity;
    double theta = s.arm_angle;

    double tau_align = 0.0;
    if (cfg.contact_enabled) {
        tau_align = -cfg.contact.yaw_align_stiffness * beta -
                    cfg.contact.yaw_damping * w_body;
    }

    // Lateral grip. Leaning the system CoM into the turn (tail toward the
    // turn center) buys extra friction margin, like a rider leaning.
    double lean = 0.0;
    if (has_arm && p.total_mass() > 0.0) {
        double lean_arm = locked ? 0.0 : std::sin(theta);
        lean = (p.arm_mass / m) * lean_arm;  // normalized by l/2 lever below
    }
    double mu = cfg.contact.lateral_friction_coefficient;
    if (cfg.contact_enabled && v_lat != 0.0) {
        double into_turn = -((v_lat > 0.0) ? 1.0 : -1.0);
        double norm = (p.arm_mass > 0.0) ? (p.arm_mass / m) : 1.0;
        mu *= std::max(0.2, 1.0 + cfg.contact.lean_gain * into_turn * lean / norm);
    }

    // The legs yaw the base by pushing sideways against the ground, so their
    // torque authority is capped by the same (lean-modulated) grip budget.
    double tau_leg_eff = tau_leg;
    if (cfg.contact_enabled) {
        double yaw_cap = mu * m * g * cfg.contact.yaw_friction_lever;
        tau_leg_eff = clamp(tau_leg, -yaw_cap, yaw_cap);
    }

    if (locked) {
        double i_eff = inertia.body + inertia.arm;
        w_body += cfg.dt * (tau_leg_eff + tau_align) / i_eff;
        w_arm = w_body;
    } else if (has_arm) {
        // +tau_arm on theta accelerates the rod clockwise in the world and
        // the torso counterclockwise.
        w_arm += cfg.dt * (-tau_arm) / inertia.arm;
        w_body += cfg.dt * (tau_arm + tau_leg_eff + tau_align) / inertia.body;
    } else {
        w_body += cfg.dt * (tau_leg_eff + tau_align) / inertia.body;
        w_arm = 0.0;
    }

    double fric_cap = cfg.contact_enabled ? mu * m * g : 0.0;
    double f_lat = -clamp(cfg.contact.lateral_damping * v_lat, -fric_cap, fric_cap);
    double drag = cfg.contact_enabled ? cfg.contact.forward_drag : 0.0;
    double f_long = f_leg - drag * v_long;

    double ax = (f_long * cs - f_lat * sn) / m;
    double ay = (f_long * sn + f_lat * cs) / m;

    SimState next = s;
    next.base_ang_velocity = w_body;
    next.arm_ang_velocity = w_arm;
    next.base_lin_velocity = {s.base_lin_velocity[0] + cfg.dt * ax,
                              s.base_lin_velocity[1] + cfg.dt * ay};
    next.base_angle = s.base_angle + cfg.dt * w_body;
    next.base_position = {s.base_position[0] + cfg.dt * next.base_lin_velocity[0],
                          s.base_position[1] + cfg.dt * next.base_lin_velocity[1]};
    if (has_arm && !locked) {
        theta += cfg.dt * (w_body - w_arm);
        if (theta < p.arm_joint_min || theta > p.arm_joint_max) {
            theta = clamp(theta, p.arm_joint_min, p.arm_joint_max);
            merge_at_stop(inertia.arm, inertia.body, next.arm_ang_velocity,
                          next.base_ang_velocity);
        }
    }
    next.arm_angle = theta;
    next.time = s.time + cfg.dt;
    return next;
}

}  // namespace

double slip_angle(const SimState& s) {
    const double cs = std::cos(s.base_angle), sn = std::sin(s.base_angle);
    const double v_long = s.base_lin_velocity[0] * cs + s.base_lin_velocity[1] * sn;
    const double v_lat = -s.base_lin_velocity[0] * sn + s.base_lin_velocity[1] * cs;
    double speed = std::hypot(v_long, v_lat);
    if (speed < 0.15) return 0.0;
    return std::atan2(v_lat, std::abs(v_long));
}

SimState step_dynamics(const SimState& state, double arm_torque, const LegProxyWrench& leg,
                       const std::vector<PerturbationEvent>& perturbations,
                       const RobotParams& params, const ScenarioConfig& cfg) {
    if (!state.finite())
        throw IntegrationError("step_dynamics: non-finite input state", state);
    SimState next = (cfg.scenario == Scenario::Stabilize)
                        ? step_stabilize(state, arm_torque, leg, perturbations, params, cfg)
                        : step_turn(state, arm_torque, leg, params, cfg);
    if (!next.finite())
        throw IntegrationError("step_dynamics: integration diverged", next);
    return next;
}

bool is_terminated(const SimState& state, const ScenarioConfig& cfg) {
    if (cfg.scenario == Scenario::Stabilize)
        return std::abs(state.base_angle) > cfg.termination_angle;
    return std::abs(slip_angle(state)) > cfg.termination_angle;
}

SimState reset(Rng& rng, const ScenarioConfig& cfg, const RobotParams& params,
               const CommandSample& command, const ResetNoise& noise) {
    SimState s;
    bool has_arm = params.arm_mass > 0.0 && cfg.arm_mode != ArmMode::NoArm;
    if (cfg.scenario == Scenario::Stabilize) {
        s.base_angle = rng.uniform(-noise.angle, noise.angle);
        s.base_ang_velocity = rng.uniform(-noise.velocity, noise.velocity);
        s.base_lin_velocity = {command.lin_velocity + rng.uniform(-noise.velocity, noise.velocity),
                               rng.uniform(-noise.velocity, noise.velocity)};
        if (has_arm) {
            s.arm_angle = rng.uniform(-noise.angle, noise.angle);
            s.arm_ang_velocity =
                s.base_ang_velocity + rng.uniform(-noise.velocity, noise.velocity);
        }
    } else {
        s.base_angle = rng.uniform(-noise.angle, noise.angle);
        s.base_ang_velocity = rng.uniform(-noise.velocity, noise.velocity);
        double v = command.lin_velocity + rng.uniform(-noise.velocity, noise.velocity);
        s.base_lin_velocity = {v * std::cos(s.base_angle), v * std::sin(s.base_angle)};
        if (has_arm) {
            s.arm_angle = rng.uniform(-noise.angle, noise.angle);
            s.arm_ang_velocity =
                s.base_ang_velocity + rng.uniform(-noise.velocity, noise.velocity);
        }
    }
    if (cfg.arm_mode == ArmMode::Locked && has_arm) {
        s.arm_angle = 0.0;
        s.arm_ang_velocity = s.base_ang_velocity;
    }
    return s;
}

}  // namespace tailsim::sim
