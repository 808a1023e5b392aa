#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tailsim/eval/baselines.hpp"
#include "tailsim/eval/metrics.hpp"
#include "tailsim/eval/table.hpp"
#include "tailsim/eval/trials.hpp"
#include "tailsim/staged/presets.hpp"

using namespace tailsim;
using namespace tailsim::eval;

namespace {

staged::StageSpec quick_spec(sim::Scenario scenario, int index) {
    auto stages = staged::default_stages(scenario);
    staged::StageSpec s = stages[static_cast<std::size_t>(index - 1)];
    s.episode_length_s = 1.0;
    return s;
}

PolicyFn zero_policy() {
    return [](const Eigen::VectorXd& obs, const Eigen::VectorXd&) {
        return Eigen::VectorXd(Eigen::VectorXd::Zero(obs.size() >= 11 ? 3 : 2));
    };
}

bool rows_equal(const std::vector<TrialRow>& a, const std::vector<TrialRow>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].success != b[i].success) return false;
        if (a[i].survival_fraction != b[i].survival_fraction) return false;
        if (a[i].lin_tracking_error != b[i].lin_tracking_error) return false;
        if (a[i].yaw_tracking_error != b[i].yaw_tracking_error) return false;
        if (a[i].peak_base_angle != b[i].peak_base_angle) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("aggregate averages trial rows") {
    std::vector<TrialRow> rows(3);
    rows[0] = {0, true, 1.0, 0.2, 0.1, 0.3};
    rows[1] = {1, false, 0.5, 0.4, 0.3, 0.9};
    rows[2] = {2, true, 1.0, 0.0, 0.2, 0.6};
    Metrics m = aggregate(rows);
    CHECK(m.trials == 3);
    CHECK(m.success_rate == doctest::Approx(2.0 / 3.0));
    CHECK(m.mean_survival == doctest::Approx((1.0 + 0.5 + 1.0) / 3.0));
    CHECK(m.lin_tracking_error == doctest::Approx(0.2));
    CHECK(m.yaw_tracking_error == doctest::Approx(0.2));
    CHECK(m.peak_base_angle == doctest::Approx(0.6));

    CHECK_THROWS_AS(aggregate({}), EvalError);
}

TEST_CASE("run_trials is deterministic in the seed") {
    sim::ScenarioConfig scen;
    scen.scenario = sim::Scenario::Stabilize;
    sim::RobotParams params;
    staged::StageSpec spec = quick_spec(sim::Scenario::Stabilize, 1);

    TrialConfig cfg;
    cfg.trials = 8;
    cfg.seed = 42;
    TrialSet a = run_trials(zero_policy(), spec, scen, params, cfg);
    TrialSet b = run_trials(zero_policy(), spec, scen, params, cfg);
    CHECK(rows_equal(a.rows, b.rows));
    CHECK(a.rows.size() == 8);
    for (const auto& r : a.rows) {
        CHECK(r.survival_fraction >= 0.0);
        CHECK(r.survival_fraction <= 1.0);
        if (r.success) CHECK(r.survival_fraction == doctest::Approx(1.0));
    }

    cfg.seed = 43;
    TrialSet c = run_trials(zero_policy(), spec, scen, params, cfg);
    CHECK_FALSE(rows_equal(a.rows, c.rows));
}

TEST_CASE("fixed_command override shows up in the tracking error") {
    sim::ScenarioConfig scen;
    scen.scenario = sim::Scenario::Turn;
    sim::RobotParams params;
    staged::StageSpec spec = quick_spec(sim::Scenario::Turn, 1);

    TrialConfig cfg;
    cfg.trials = 4;
    cfg.seed = 7;
    cfg.fixed_command = sim::CommandSample{0.5, 0.0};
    TrialSet straight = run_trials(zero_policy(), spec, scen, params, cfg);

    cfg.fixed_command = sim::CommandSample{0.5, 1.0};
    TrialSet turning = run_trials(zero_policy(), spec, scen, params, cfg);

    // A passive policy produces almost no yaw rate, so the yaw tracking error
    // reflects the commanded rate.
    CHECK(turning.metrics.yaw_tracking_error >
          straight.metrics.yaw_tracking_error + 0.5);
}

TEST_CASE("arm_mode override changes the dynamics the policy sees") {
    sim::ScenarioConfig scen;
    scen.scenario = sim::Scenario::Stabilize;
    sim::RobotParams params;
    staged::StageSpec spec = quick_spec(sim::Scenario::Stabilize, 3);
    spec.perturbations.reset();

    // Constant arm torque: only meaningful when the arm is actuated.
    PolicyFn push = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(3);
        a(2) = 1.0;
        return a;
    };

    TrialConfig cfg;
    cfg.trials = 4;
    cfg.seed = 3;
    TrialSet actuated = run_trials(push, spec, scen, params, cfg);
    cfg.arm_mode = sim::ArmMode::Locked;
    TrialSet locked = run_trials(push, spec, scen, params, cfg);
    CHECK_FALSE(rows_equal(actuated.rows, locked.rows));
}

TEST_CASE("run_trials writes a per-trial log when asked") {
    sim::ScenarioConfig scen;
    scen.scenario = sim::Scenario::Stabilize;
    sim::RobotParams params;
    staged::StageSpec spec = quick_spec(sim::Scenario::Stabilize, 1);

    const std::string path = "eval_trials_log_test.csv";
    TrialConfig cfg;
    cfg.trials = 5;
    cfg.seed = 1;
    cfg.log_path = path;
    run_trials(zero_policy(), spec, scen, params, cfg);

    std::ifstream in(path);
    REQUIRE(in.good());
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 6);  // header + one row per trial
    std::remove(path.c_str());
}

TEST_CASE("comparison table CSV round trip") {
    ComparisonTable t;
    ComparisonRow r;
    r.name = "staged";
    r.in_dist = {500, 0.95, 0.99, 0.01, 0.02, 0.1};
    r.ood = {500, 0.70, 0.85, 0.05, 0.08, 0.4};
    r.env_steps = 123456;
    t.rows.push_back(r);
    r.name = "scratch";
    r.in_dist.success_rate = 0.60;
    r.env_steps = 123456;
    t.rows.push_back(r);

    const std::string path = "comparison_round_trip.csv";
    t.write_csv(path);
    ComparisonTable back = ComparisonTable::read_csv(path);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0].name == "staged");
    CHECK(back.rows[0].in_dist.success_rate == doctest::Approx(0.95));
    CHECK(back.rows[0].ood.peak_base_angle == doctest::Approx(0.4));
    CHECK(back.rows[0].env_steps == 123456);
    CHECK(back.rows[1].name == "scratch");
    CHECK(back.rows[1].in_dist.success_rate == doctest::Approx(0.60));

    CHECK(back.find("staged").env_steps == 123456);
    CHECK_THROWS_AS(back.find("nonexistent"), EvalError);

    std::string text = t.render();
    CHECK(text.find("staged") != std::string::npos);
    CHECK(text.find("scratch") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("baseline names round trip") {
    for (BaselineKind k :
         {BaselineKind::Staged, BaselineKind::Scratch, BaselineKind::Curriculum,
          BaselineKind::FineTune, BaselineKind::Decoupled, BaselineKind::OneStage}) {
        CHECK(parse_baseline(baseline_name(k)) == k);
    }
    CHECK_THROWS_AS(parse_baseline("no-such-method"), EvalError);
}

TEST_CASE("all baselines consume the same environment-step budget") {
    staged::PipelineConfig cfg;
    cfg.scenario.scenario = sim::Scenario::Stabilize;
    cfg.ppo.env_count = 4;
    cfg.ppo.rollout_horizon = 16;
    cfg.ppo.minibatch_size = 32;
    cfg.ppo.epochs = 1;
    cfg.nets.hidden = 16;
    cfg.nets.hidden_layers = 1;
    cfg.nets.z_dim = 4;
    cfg.nets.encoder_hidden = 8;
    cfg.stages = staged::default_stages(sim::Scenario::Stabilize);
    for (auto& s : cfg.stages) {
        s.updates = 2;
        s.episode_length_s = 1.0;
    }
    cfg.seed = 11;

    const long budget = 3L * 2 * 16 * 4;
    for (BaselineKind k :
         {BaselineKind::Staged, BaselineKind::Scratch, BaselineKind::Curriculum,
          BaselineKind::FineTune, BaselineKind::Decoupled, BaselineKind::OneStage}) {
        BaselineResult r = run_baseline(k, cfg);
        INFO("baseline ", baseline_name(k));
        CHECK(r.env_steps == budget);
        CHECK(r.final_spec.action_dim() == 3);

        // Every baseline yields a usable final-layout policy.
        Eigen::VectorXd obs = Eigen::VectorXd::Zero(r.final_spec.obs_dim());
        Eigen::VectorXd priv = Eigen::VectorXd::Zero(r.final_spec.priv_dim());
        Eigen::VectorXd act = r.policy()(obs, priv);
        CHECK(act.size() == 3);
        CHECK(act.allFinite());
    }
}
