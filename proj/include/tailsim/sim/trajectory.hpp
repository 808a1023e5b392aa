#pragma once

#include <string>
#include <vector>

#include "tailsim/common/csv.hpp"
#include "tailsim/sim/state.hpp"

namespace tailsim::sim {

// One control-rate sample of a rollout, exportable as CSV and consumed by the
// analysis tools (correlation, lag).
struct TrajectorySample {
    double time = 0.0;
    double base_x = 0.0, base_y = 0.0;
    double base_angle = 0.0;
    double base_vx = 0.0, base_vy = 0.0;
    double base_ang_velocity = 0.0;
    double arm_angle = 0.0;
    double arm_ang_velocity = 0.0;
    double cmd_lin = 0.0;
    double cmd_yaw = 0.0;
    double leg_force = 0.0;
    double leg_torque = 0.0;
    double arm_torque = 0.0;
    double perturbation_active = 0.0;
};

struct TrajectoryRecord {
    std::vector<TrajectorySample> samples;

    static const std::vector<std::string>& columns() {
        static const std::vector<std::string> cols = {
            "time",        "base_x",        "base_y",     "base_angle",
            "base_vx",     "base_vy",       "base_ang_vel", "arm_angle",
            "arm_ang_vel", "cmd_lin",       "cmd_yaw",    "leg_force",
            "leg_torque",  "arm_torque",    "pert_active"};
        return cols;
    }

    void add(const SimState& s, double cmd_lin, double cmd_yaw, double leg_force,
             double leg_torque, double arm_torque, bool pert_active) {
        samples.push_back({s.time, s.base_position[0], s.base_position[1], s.base_angle,
                           s.base_lin_velocity[0], s.base_lin_velocity[1],
                           s.base_ang_velocity, s.arm_angle, s.arm_ang_velocity, cmd_lin,
                           cmd_yaw, leg_force, leg_torque, arm_torque,
                           pert_active ? 1.0 : 0.0});
    }

    void write_csv(const std::string& path) const {
        CsvWriter w(path, columns());
        for (const auto& s : samples)
            w.write_row({s.time, s.base_x, s.base_y, s.base_angle, s.base_vx, s.base_vy,
                         s.base_ang_velocity, s.arm_angle, s.arm_ang_velocity, s.cmd_lin,
                         s.cmd_yaw, s.leg_force, s.leg_torque, s.arm_torque,
                         s.perturbation_active});
    }

    static TrajectoryRecord read_csv(const std::string& path) {
        CsvTable t = tailsim::read_csv(path);
        TrajectoryRecord rec;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            TrajectorySample s;
            s.time = t.value(i, "time");
            s.base_x = t.value(i, "base_x");
            s.base_y = t.value(i, "base_y");
            s.base_angle = t.value(i, "base_angle");
            s.base_vx = t.value(i, "base_vx");
            s.base_vy = t.value(i, "base_vy");
            s.base_ang_velocity = t.value(i, "base_ang_vel");
            s.arm_angle = t.value(i, "arm_angle");
            s.arm_ang_velocity = t.value(i, "arm_ang_vel");
            s.cmd_lin = t.value(i, "cmd_lin");
            s.cmd_yaw = t.value(i, "cmd_yaw");
            s.leg_force = t.value(i, "leg_force");
            s.leg_torque = t.value(i, "leg_torque");
            s.arm_torque = t.value(i, "arm_torque");
            s.perturbation_active = t.value(i, "pert_active");
            rec.samples.push_back(s);
        }
        return rec;
    }
};

}  // namespace tailsim::sim
