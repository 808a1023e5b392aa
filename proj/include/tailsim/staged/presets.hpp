#pragma once

#include <vector>

#include "tailsim/staged/stage_spec.hpp"

namespace tailsim::staged {

// The canonical three-step decomposition: base platform alone, platform with
// the locked appendage, then the fully articulated system.
inline std::vector<StageSpec> default_stages(sim::Scenario scenario) {
    StageSpec s1;
    s1.index = 1;
    s1.arm_mode = sim::ArmMode::NoArm;
    StageSpec s2;
    s2.index = 2;
    s2.arm_mode = sim::ArmMode::Locked;
    StageSpec s3;
    s3.index = 3;
    s3.arm_mode = sim::ArmMode::Actuated;
    s3.observe_arm = true;
    s3.actuate_arm = true;

    if (scenario == sim::Scenario::Stabilize) {
        for (StageSpec* s : {&s1, &s2, &s3}) {
            s->perturbations = sim::PerturbationConfig{};
            s->commands.lin_min = 0.0;
            s->commands.lin_max = 0.0;
            s->commands.resample_interval_s = 0.0;
            s->episode_length_s = 10.0;
        }
        s1.updates = 300;
        s2.updates = 200;
        s3.updates = 200;
    } else {
        for (StageSpec* s : {&s1, &s2, &s3}) {
            s->commands.lin_min = 0.3;
            s->commands.lin_max = 0.8;
            s->commands.yaw_min = -1.2;
            s->commands.yaw_max = 1.2;
            s->commands.resample_interval_s = 4.0;
            s->episode_length_s = 12.0;
        }
        s1.updates = 300;
        s2.updates = 200;
        s3.updates = 200;
    }
    return {s1, s2, s3};
}

}  // namespace tailsim::staged
