#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailsim/analysis/formulas.hpp"
#include "tailsim/analysis/lag.hpp"
#include "tailsim/analysis/regression.hpp"
#include "tailsim/eval/baselines.hpp"
#include "tailsim/eval/table.hpp"
#include "tailsim/eval/trials.hpp"
#include "tailsim/staged/presets.hpp"
#include "tailsim/staged/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tailsim;

namespace {

constexpr int kSchemaVersion = 1;

struct AppConfig {
    sim::Scenario scenario = sim::Scenario::Stabilize;
    sim::RobotParams params;
    sim::ScenarioConfig scenario_cfg;
    rl::PPOConfig ppo;
    staged::NetConfig nets;
    std::vector<staged::StageSpec> stages;
};

void apply_robot(const json& j, sim::RobotParams& p) {
    p.arm_mass = j.value("arm_mass", p.arm_mass);
    p.body_mass = j.value("body_mass", p.body_mass);
    p.arm_length = j.value("arm_length", p.arm_length);
    p.body_height = j.value("body_height", p.body_height);
    p.body_width = j.value("body_width", p.body_width);
    p.body_length = j.value("body_length", p.body_length);
    p.arm_torque_limit = j.value("arm_torque_limit", p.arm_torque_limit);
    p.leg_proxy_force_limit = j.value("leg_proxy_force_limit", p.leg_proxy_force_limit);
    p.leg_proxy_torque_limit = j.value("leg_proxy_torque_limit", p.leg_proxy_torque_limit);
}

void apply_ppo(const json& j, rl::PPOConfig& p) {
    p.gamma = j.value("gamma", p.gamma);
    p.gae_lambda = j.value("gae_lambda", p.gae_lambda);
    p.clip_epsilon = j.value("clip_epsilon", p.clip_epsilon);
    p.epochs = j.value("epochs", p.epochs);
    p.minibatch_size = j.value("minibatch_size", p.minibatch_size);
    p.entropy_coef = j.value("entropy_coef", p.entropy_coef);
    p.value_coef = j.value("value_coef", p.value_coef);
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.rollout_horizon = j.value("rollout_horizon", p.rollout_horizon);
    p.env_count = j.value("env_count", p.env_count);
    p.kl_early_stop = j.value("kl_early_stop", p.kl_early_stop);
}

void apply_nets(const json& j, staged::NetConfig& n) {
    n.hidden = j.value("hidden", n.hidden);
    n.hidden_layers = j.value("hidden_layers", n.hidden_layers);
    n.z_dim = j.value("z_dim", n.z_dim);
    n.encoder_hidden = j.value("encoder_hidden", n.encoder_hidden);
    n.init_log_std = j.value("init_log_std", n.init_log_std);
}

void apply_stage(const json& j, staged::StageSpec& s) {
    s.updates = j.value("updates", s.updates);
    s.episode_length_s = j.value("episode_length_s", s.episode_length_s);
    if (j.contains("commands")) {
        const json& c = j["commands"];
        s.commands.lin_min = c.value("lin_min", s.commands.lin_min);
        s.commands.lin_max = c.value("lin_max", s.commands.lin_max);
        s.commands.yaw_min = c.value("yaw_min", s.commands.yaw_min);
        s.commands.yaw_max = c.value("yaw_max", s.commands.yaw_max);
        s.commands.resample_interval_s =
            c.value("resample_interval_s", s.commands.resample_interval_s);
    }
    if (j.contains("perturbations")) {
        const json& c = j["perturbations"];
        if (c.is_null()) {
            s.perturbations.reset();
        } else {
            if (!s.perturbations) s.perturbations = sim::PerturbationConfig{};
            auto& pc = *s.perturbations;
            if (c.contains("force_range"))
                pc.force_range = {c["force_range"][0].get<double>(),
                                  c["force_range"][1].get<double>()};
            pc.duration = c.value("duration", pc.duration);
            pc.interval_mean = c.value("interval_mean", pc.interval_mean);
        }
    }
    if (j.contains("rewards")) {
        const json& c = j["rewards"];
        s.rewards.alive = c.value("alive", s.rewards.alive);
        s.rewards.lin_tracking = c.value("lin_tracking", s.rewards.lin_tracking);
        s.rewards.yaw_tracking = c.value("yaw_tracking", s.rewards.yaw_tracking);
        s.rewards.action = c.value("action", s.rewards.action);
        s.rewards.arm_velocity = c.value("arm_velocity", s.rewards.arm_velocity);
        s.rewards.base_angle = c.value("base_angle", s.rewards.base_angle);
    }
    if (j.contains("anneal")) {
        const json& c = j["anneal"];
        s.anneal.lambda_max = c.value("lambda_max", s.anneal.lambda_max);
        s.anneal.lambda_min = c.value("lambda_min", s.anneal.lambda_min);
        s.anneal.fraction = c.value("fraction", s.anneal.fraction);
        std::string shape = c.value("shape", std::string("linear"));
        s.anneal.shape = shape == "cosine" ? staged::AnnealShape::Cosine
                                           : staged::AnnealShape::Linear;
    }
}

AppConfig load_config(const std::string& path) {
    AppConfig cfg;
    json j;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config " + path);
        in >> j;
        int version = j.value("schema_version", kSchemaVersion);
        if (version != kSchemaVersion)
            throw std::runtime_error("unsupported config schema_version");
    }
    std::string scen = j.value("scenario", std::string("stabilize"));
    if (scen == "stabilize") {
        cfg.scenario = sim::Scenario::Stabilize;
    } else if (scen == "turn") {
        cfg.scenario = sim::Scenario::Turn;
    } else {
        throw std::runtime_error("unknown scenario '" + scen + "'");
    }
    cfg.scenario_cfg = sim::default_scenario_config(cfg.scenario);
    if (j.contains("robot")) apply_robot(j["robot"], cfg.params);
    if (j.contains("ppo")) apply_ppo(j["ppo"], cfg.ppo);
    if (j.contains("nets")) apply_nets(j["nets"], cfg.nets);
    if (j.contains("sim")) {
        const json& c = j["sim"];
        cfg.scenario_cfg.dt = c.value("dt", cfg.scenario_cfg.dt);
        cfg.scenario_cfg.termination_angle =
            c.value("termination_angle", cfg.scenario_cfg.termination_angle);
        cfg.scenario_cfg.perturbation_force_scale =
            c.value("perturbation_force_scale", cfg.scenario_cfg.perturbation_force_scale);
        auto& contact = cfg.scenario_cfg.contact;
        contact.lateral_friction_coefficient =
            c.value("lateral_friction", contact.lateral_friction_coefficient);
        contact.lean_gain = c.value("lean_gain", contact.lean_gain);
        contact.yaw_friction_lever =
            c.value("yaw_friction_lever", contact.yaw_friction_lever);
    }

    cfg.stages = staged::default_stages(cfg.scenario);
    if (j.contains("stages")) {
        const json& arr = j["stages"];
        for (std::size_t i = 0; i < arr.size() && i < cfg.stages.size(); ++i)
            apply_stage(arr[i], cfg.stages[i]);
    }
    cfg.params.validate();
    return cfg;
}

std::uint64_t fnv1a_file(const std::string& path) {
    std::uint64_t h = 1469598103934665603ULL;
    if (path.empty()) return h;
    std::ifstream in(path, std::ios::binary);
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

// Output directories are never reused: an existing run gets a numeric suffix
// so reruns cannot silently mutate earlier results.
std::string fresh_out_dir(const std::string& requested) {
    if (!fs::exists(requested) || fs::is_empty(requested)) return requested;
    for (int i = 1;; ++i) {
        std::string candidate = requested + "_" + std::to_string(i);
        if (!fs::exists(candidate)) return candidate;
    }
}

void write_manifest(const std::string& out_dir, const std::string& config_path,
                    std::uint64_t seed, const std::string& command) {
    json m;
    m["schema_version"] = kSchemaVersion;
    m["config"] = config_path;
    std::ostringstream hash;
    hash << std::hex << fnv1a_file(config_path);
    m["config_fnv1a"] = hash.str();
    m["seed"] = seed;
    m["command"] = command;
    m["created_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
    fs::create_directories(out_dir);
    std::ofstream out(out_dir + "/manifest.json");
    out << m.dump(2) << '\n';
}

std::array<double, 2> parse_force_range(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--force-range", "expected lo:hi");
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
}

sim::ArmMode parse_arm_mode(const std::string& s) {
    if (s == "noarm") return sim::ArmMode::NoArm;
    if (s == "locked") return sim::ArmMode::Locked;
    if (s == "actuated") return sim::ArmMode::Actuated;
    throw CLI::ValidationError("--arm-mode", "expected noarm|locked|actuated");
}

void note_threads(int threads) {
    if (threads > 1)
        std::cerr << "note: running single-threaded; results are bitwise "
                     "reproducible only that way\n";
}

json metrics_json(const eval::Metrics& m) {
    return json{{"trials", m.trials},
                {"success_rate", m.success_rate},
                {"mean_survival", m.mean_survival},
                {"lin_tracking_error", m.lin_tracking_error},
                {"yaw_tracking_error", m.yaw_tracking_error},
                {"peak_base_angle", m.peak_base_angle}};
}

int cmd_train(const std::string& config_path, std::uint64_t seed, int stage, int threads,
              std::string out, const std::string& command) {
    note_threads(threads);
    AppConfig cfg = load_config(config_path);
    out = fresh_out_dir(out);
    write_manifest(out, config_path, seed, command);

    staged::PipelineConfig pc;
    pc.scenario = cfg.scenario_cfg;
    pc.params = cfg.params;
    pc.ppo = cfg.ppo;
    pc.nets = cfg.nets;
    pc.stages = cfg.stages;
    pc.seed = seed;
    pc.out_dir = out;
    pc.run_stages = stage;

    staged::PipelineResult pr = staged::run_pipeline(pc);
    for (std::size_t i = 0; i < pr.stages.size(); ++i) {
        const auto& s = pr.stages[i];
        std::cout << "stage " << (i + 1) << ": " << s.env_steps << " env steps, "
                  << (s.curves.empty() ? 0.0 : s.curves.back().mean_return)
                  << " mean return" << (s.diverged ? " [diverged, rolled back]" : "")
                  << '\n';
    }
    std::cout << "checkpoints in " << out << '\n';
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& checkpoint,
             std::uint64_t seed, int trials, const std::string& force_range,
             const std::string& arm_mode, int threads, std::string out,
             const std::string& command) {
    note_threads(threads);
    AppConfig cfg = load_config(config_path);
    staged::StageSpec stored;
    rl::Agent agent = staged::load_agent(checkpoint, &stored);
    if (stored.index < 1 || stored.index > static_cast<int>(cfg.stages.size()))
        throw std::runtime_error("checkpoint stage index out of range for config");
    staged::StageSpec spec = cfg.stages[static_cast<std::size_t>(stored.index - 1)];
    spec.observe_arm = stored.observe_arm;
    spec.actuate_arm = stored.actuate_arm;
    spec.arm_mode = stored.arm_mode;

    out = fresh_out_dir(out);
    write_manifest(out, config_path, seed, command);

    eval::TrialConfig tc;
    tc.trials = trials;
    tc.seed = seed;
    tc.log_path = out + "/trials.csv";
    if (!force_range.empty()) tc.force_range = parse_force_range(force_range);
    if (!arm_mode.empty()) tc.arm_mode = parse_arm_mode(arm_mode);

    eval::TrialSet set = eval::run_trials(agent, spec, cfg.scenario_cfg, cfg.params, tc);
    json report = metrics_json(set.metrics);
    std::ofstream(out + "/metrics.json") << report.dump(2) << '\n';
    std::cout << report.dump(2) << '\n';
    return 0;
}

int cmd_analyze(const std::string& config_path, const std::string& checkpoint,
                std::uint64_t seed, int threads, std::string out,
                const std::string& command) {
    note_threads(threads);
    AppConfig cfg = load_config(config_path);
    out = fresh_out_dir(out);
    write_manifest(out, config_path, seed, command);

    json report;
    report["com_shift_max_m"] = analysis::com_shift_bound(cfg.params);
    report["accel_coupling_ratio"] = analysis::accel_coupling_ratio(cfg.params);

    if (!checkpoint.empty()) {
        staged::StageSpec stored;
        rl::Agent agent = staged::load_agent(checkpoint, &stored);
        staged::StageSpec spec = cfg.stages.back();
        spec.observe_arm = stored.observe_arm;
        spec.actuate_arm = stored.actuate_arm;
        spec.arm_mode = stored.arm_mode;

        double lin_cmd = 0.5 * (spec.commands.lin_min + spec.commands.lin_max);
        double yaw_cmd = cfg.scenario == sim::Scenario::Turn ? 0.8 : 0.0;
        sim::TrajectoryRecord rec = eval::record_command_step(
            agent, spec, cfg.scenario_cfg, cfg.params, 3.0, yaw_cmd, lin_cmd, seed);
        rec.write_csv(out + "/command_step.csv");

        if (cfg.scenario == sim::Scenario::Turn && rec.samples.size() > 8) {
            // The paper's protocol: steady-state (arm angle, yaw rate) pairs
            // across a sweep of yaw commands, three samples per command.
            std::vector<std::pair<double, double>> pts = eval::arm_yaw_sweep(
                agent, spec, cfg.scenario_cfg, cfg.params, spec.commands.lin_max,
                10, 3, derive_seed(seed, 6000));
            analysis::OlsFit fit = analysis::ols(pts);
            report["arm_yaw_slope"] = fit.slope;
            report["arm_yaw_r_squared"] = fit.r_squared;
            report["arm_leads_body_s"] = analysis::lag_analysis(rec);
        }
    }

    std::ofstream(out + "/analysis.json") << report.dump(2) << '\n';
    std::cout << report.dump(2) << '\n';
    return 0;
}

int cmd_compare(const std::string& config_path, std::uint64_t seed,
                std::vector<std::string> baselines, int trials,
                const std::string& force_range, int threads, std::string out,
                const std::string& command) {
    note_threads(threads);
    AppConfig cfg = load_config(config_path);
    out = fresh_out_dir(out);
    write_manifest(out, config_path, seed, command);

    if (baselines.empty() || (baselines.size() == 1 && baselines[0] == "all"))
        baselines = {"staged", "scratch", "curriculum", "finetune", "decoupled",
                     "onestage"};

    staged::PipelineConfig pc;
    pc.scenario = cfg.scenario_cfg;
    pc.params = cfg.params;
    pc.ppo = cfg.ppo;
    pc.nets = cfg.nets;
    pc.stages = cfg.stages;
    pc.seed = seed;

    std::array<double, 2> ood = force_range.empty()
                                    ? std::array<double, 2>{400.0, 500.0}
                                    : parse_force_range(force_range);

    eval::ComparisonTable table;
    for (const std::string& name : baselines) {
        eval::BaselineKind kind = eval::parse_baseline(name);
        eval::BaselineResult br = eval::run_baseline(kind, pc);

        eval::TrialConfig tc;
        tc.trials = trials;
        tc.seed = derive_seed(seed, 7);
        eval::TrialSet in_dist = eval::run_trials(br.policy(), br.final_spec,
                                                  cfg.scenario_cfg, cfg.params, tc);
        eval::TrialSet ood_set = in_dist;
        if (br.final_spec.perturbations) {
            tc.force_range = ood;
            ood_set = eval::run_trials(br.policy(), br.final_spec, cfg.scenario_cfg,
                                       cfg.params, tc);
        }
        staged::save_agent(br.agent, br.final_spec, out + "/" + name + ".ckpt");
        if (br.composite)
            staged::save_agent(br.leg_agent, br.final_spec,
                               out + "/" + name + "_legs.ckpt");
        table.rows.push_back(
            {name, in_dist.metrics, ood_set.metrics, br.env_steps});
        std::cout << name << ": success " << in_dist.metrics.success_rate << ", ood "
                  << ood_set.metrics.success_rate << ", env steps " << br.env_steps
                  << (br.diverged ? " [diverged]" : "") << '\n';
    }
    table.write_csv(out + "/comparison.csv");
    std::cout << '\n' << table.render();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Staged RL training for a reduced-order legged platform with an arm"};
    app.require_subcommand(1);

    std::string config_path, checkpoint, force_range, arm_mode, out;
    std::vector<std::string> baselines;
    std::uint64_t seed = 0;
    int stage = 0, trials = 500, threads = 1;

    auto add_common = [&](CLI::App* sub, const char* default_out) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--threads", threads, "worker threads (1 for reproducibility)");
        sub->add_option("--out", out, "output directory")->default_val(default_out);
    };

    CLI::App* train = app.add_subcommand("train", "run the staged training pipeline");
    add_common(train, "runs/train");
    train->add_option("--stage", stage, "train only the first N stages (0: all)");

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint over trials");
    add_common(eval_cmd, "runs/eval");
    eval_cmd->add_option("--checkpoint", checkpoint, "policy checkpoint")->required();
    eval_cmd->add_option("--trials", trials, "number of evaluation episodes");
    eval_cmd->add_option("--force-range", force_range, "perturbation range lo:hi");
    eval_cmd->add_option("--arm-mode", arm_mode, "noarm|locked|actuated");

    CLI::App* analyze = app.add_subcommand("analyze", "closed-form and trajectory analysis");
    add_common(analyze, "runs/analyze");
    analyze->add_option("--checkpoint", checkpoint, "policy checkpoint (optional)");

    CLI::App* compare = app.add_subcommand("compare", "train and compare baselines");
    add_common(compare, "runs/compare");
    compare->add_option("--baseline", baselines, "baseline name or 'all'");
    compare->add_option("--trials", trials, "evaluation episodes per method");
    compare->add_option("--force-range", force_range, "out-of-distribution range lo:hi");

    CLI11_PARSE(app, argc, argv);

    std::ostringstream cmdline;
    for (int i = 0; i < argc; ++i) cmdline << (i ? " " : "") << argv[i];

    try {
        if (train->parsed())
            return cmd_train(config_path, seed, stage, threads, out, cmdline.str());
        if (eval_cmd->parsed())
            return cmd_eval(config_path, checkpoint, seed, trials, force_range, arm_mode,
                            threads, out, cmdline.str());
        if (analyze->parsed())
            return cmd_analyze(config_path, checkpoint, seed, threads, out, cmdline.str());
        if (compare->parsed())
            return cmd_compare(config_path, seed, baselines, trials, force_range, threads,
                               out, cmdline.str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
