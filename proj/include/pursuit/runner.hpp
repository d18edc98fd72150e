#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pursuit/metrics.hpp"

namespace pursuit {

struct RunManifest {
    ScenarioConfig scenario;
    int trials = 1;
    std::vector<std::uint64_t> seeds;  // one per trial, base seed + index
    std::string out_dir = "results";
    bool export_trajectories = true;
    bool export_events = true;
    bool export_timing = false;  // wall-clock column breaks byte-reproducibility
    bool benchmark = false;
    unsigned threads = 0;  // 0 = hardware concurrency
    bool quiet = false;    // suppress the stdout report
};

struct UsageError : std::runtime_error {
    int exit_code;
    explicit UsageError(const std::string& msg, int code = 2)
        : std::runtime_error(msg), exit_code(code) {}
};

namespace detail {

// 17 significant digits reproduces a double exactly on read-back.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::json require_object(const nlohmann::json& j, const char* what) {
    if (!j.is_object()) throw UsageError(std::string(what) + ": expected a JSON object");
    return j;
}

inline void apply_team_json(const nlohmann::json& j, const char* name, PerformanceLimits& lim,
                            ActionTable& table) {
    require_object(j, name);
    for (const auto& [key, value] : j.items()) {
        if (key == "v_min") lim.v_min = value.get<double>();
        else if (key == "v_max") lim.v_max = value.get<double>();
        else if (key == "psi_dot_max") lim.psi_dot_max = value.get<double>();
        else if (key == "alpha_min") lim.alpha_min = value.get<double>();
        else if (key == "alpha_max") lim.alpha_max = value.get<double>();
        else if (key == "phi_dots") table.phi_dots = value.get<std::vector<double>>();
        else if (key == "alpha_dots") table.alpha_dots = value.get<std::vector<double>>();
        else if (key == "thrusts") table.thrusts = value.get<std::vector<double>>();
        else throw UsageError("scenario file: unknown key " + std::string(name) + "." + key);
    }
}

}  // namespace detail

// Scenario file: a JSON object whose keys mirror ScenarioConfig. Every
// key is optional; unknown keys are rejected.
inline void apply_scenario_file(const std::string& path, ScenarioConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("scenario file " + path + ": " + e.what());
    }
    detail::require_object(j, "scenario file");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "blue_count") cfg.blue_count = value.get<int>();
            else if (key == "red_count") cfg.red_count = value.get<int>();
            else if (key == "volume_m") cfg.volume_m = value.get<double>();
            else if (key == "hmax") cfg.terrain.h_max = value.get<double>();
            else if (key == "deck_weight") cfg.terrain.deck_weight = value.get<double>();
            else if (key == "dt") cfg.dt = value.get<double>();
            else if (key == "max_steps") cfg.max_steps = value.get<int>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "radius_floor") cfg.radius_floor = value.get<double>();
            else if (key == "horizon_s") cfg.horizon_s = value.get<double>();
            else if (key == "spawn_alt_min") cfg.spawn_alt_min = value.get<double>();
            else if (key == "spawn_alt_max") cfg.spawn_alt_max = value.get<double>();
            else if (key == "spawn_blue_x") cfg.spawn_blue_x = value.get<std::array<double, 2>>();
            else if (key == "spawn_red_x") cfg.spawn_red_x = value.get<std::array<double, 2>>();
            else if (key == "spawn_y") cfg.spawn_y = value.get<std::array<double, 2>>();
            else if (key == "heading_jitter_deg")
                cfg.heading_jitter_rad = deg2rad(value.get<double>());
            else if (key == "blue")
                detail::apply_team_json(value, "blue", cfg.blue_limits, cfg.blue_actions);
            else if (key == "red")
                detail::apply_team_json(value, "red", cfg.red_limits, cfg.red_actions);
            else throw UsageError("scenario file: unknown key " + key);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("scenario file key " + key + ": " + e.what());
        }
    }
}

// Parses `run ...` command lines. Precedence: built-in defaults, then the
// scenario file, then explicit flags.
inline RunManifest parse_cli(const std::vector<std::string>& args) {
    CLI::App app{"pursuit/evasion contest runner"};
    app.require_subcommand(1);
    CLI::App* run = app.add_subcommand("run", "run seeded contests and export results");

    int blue = 1, red = 1, trials = 1, max_steps = 9000;
    std::uint64_t seed = 1;
    double dt = kDecisionDt, hmax = 0.0;
    std::string out_dir = "results", config_path;
    bool benchmark = false;
    bool export_trajectories = true, export_events = true, export_timing = false;
    unsigned threads = 0;

    auto* o_blue = run->add_option("--blue", blue, "blue aircraft count");
    auto* o_red = run->add_option("--red", red, "red aircraft count");
    auto* o_trials = run->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
    auto* o_seed = run->add_option("--seed", seed, "base seed; trial i uses seed+i");
    auto* o_steps = run->add_option("--max-steps", max_steps, "step budget per trial");
    auto* o_dt = run->add_option("--dt", dt, "integration timestep, s");
    auto* o_hmax = run->add_option("--hmax", hmax, "terrain height, m");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--config", config_path, "scenario file (JSON key/value)");
    run->add_flag("--export-trajectories,!--no-export-trajectories", export_trajectories,
                  "write per-trial trajectory CSVs (default on)");
    run->add_flag("--export-events,!--no-export-events", export_events,
                  "write per-trial event JSONL (default on)");
    run->add_flag("--export-timing", export_timing,
                  "fill decision_time_us in CSVs (breaks byte-reproducibility)");
    run->add_flag("--benchmark", benchmark, "timing mode: single worker, no file export");
    run->add_option("--threads", threads, "decision workers per step (0 = all cores)");

    try {
        std::vector<const char*> argv{"pursuit"};
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        throw UsageError(app.help(), 0);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what(), e.get_exit_code() == 0 ? 2 : e.get_exit_code());
    }

    RunManifest m;
    if (!config_path.empty()) apply_scenario_file(config_path, m.scenario);
    if (o_blue->count()) m.scenario.blue_count = blue;
    if (o_red->count()) m.scenario.red_count = red;
    if (o_seed->count()) m.scenario.seed = seed;
    if (o_steps->count()) m.scenario.max_steps = max_steps;
    if (o_dt->count()) m.scenario.dt = dt;
    if (o_hmax->count()) m.scenario.terrain.h_max = hmax;
    if (o_trials->count()) m.trials = trials;

    m.out_dir = out_dir;
    m.benchmark = benchmark;
    m.export_trajectories = export_trajectories && !benchmark;
    m.export_events = export_events && !benchmark;
    m.export_timing = export_timing;
    m.threads = benchmark ? 1 : threads;

    m.seeds.resize(static_cast<size_t>(m.trials));
    for (int i = 0; i < m.trials; ++i)
        m.seeds[static_cast<size_t>(i)] = m.scenario.seed + static_cast<std::uint64_t>(i);

    try {
        m.scenario.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return m;
}

inline void write_trajectory_csv(const std::string& path, const EpisodeResult& r,
                                 bool export_timing) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "step,time_s,aircraft_id,team,x_m,y_m,altitude_m,v_mps,gamma_rad,psi_rad,"
           "phi_rad,alpha_rad,action_index,chosen_value,decision_time_us\n";
    using detail::g17;
    for (const auto& t : r.telemetry) {
        out << t.step << ',' << g17(t.time_s) << ',' << t.aircraft_id << ','
            << team_name(t.team) << ',' << g17(t.x_m) << ',' << g17(t.y_m) << ','
            << g17(t.altitude_m) << ',' << g17(t.v_mps) << ',' << g17(t.gamma_rad) << ','
            << g17(t.psi_rad) << ',' << g17(t.phi_rad) << ',' << g17(t.alpha_rad) << ','
            << t.action_index << ',' << g17(t.chosen_value) << ','
            << g17(export_timing ? t.decision_time_us : 0.0) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline void write_events_jsonl(const std::string& path, const EpisodeResult& r) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& e : r.events) {
        nlohmann::json j;
        j["kind"] = event_kind_name(e.kind);
        j["step"] = e.step;
        j["subject_id"] = e.subject_id >= 0 ? nlohmann::json(e.subject_id) : nullptr;
        j["pursuer_id"] = e.pursuer_id >= 0 ? nlohmann::json(e.pursuer_id) : nullptr;
        j["team_scores"] = e.team_scores;
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace detail {

inline nlohmann::json scenario_json(const ScenarioConfig& c) {
    nlohmann::json j;
    j["blue_count"] = c.blue_count;
    j["red_count"] = c.red_count;
    j["volume_m"] = c.volume_m;
    j["hmax"] = c.terrain.h_max;
    j["deck_weight"] = c.terrain.deck_weight;
    j["dt"] = c.dt;
    j["max_steps"] = c.max_steps;
    j["seed"] = c.seed;
    j["radius_floor"] = c.radius_floor;
    j["horizon_s"] = c.horizon_s;
    j["spawn_alt_min"] = c.spawn_alt_min;
    j["spawn_alt_max"] = c.spawn_alt_max;
    j["spawn_blue_x"] = c.spawn_blue_x;
    j["spawn_red_x"] = c.spawn_red_x;
    j["spawn_y"] = c.spawn_y;
    j["heading_jitter_deg"] = c.heading_jitter_rad * 180.0 / kPi;
    return j;
}

inline nlohmann::json timing_json(const TimingStats& t) {
    return {{"mean_us", t.mean_us},
            {"p50_us", t.p50_us},
            {"p95_us", t.p95_us},
            {"max_us", t.max_us},
            {"samples", t.samples}};
}

}  // namespace detail

// Runs every trial in the manifest, writes per-trial artifacts plus
// summary.json, and prints a short report. A trial that throws is
// reported and skipped; the rest continue.
inline int run_trials(const RunManifest& manifest) {
    namespace fs = std::filesystem;
    try {
        fs::create_directories(manifest.out_dir);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: cannot create output directory: " << e.what() << "\n";
        return 1;
    }

    unsigned threads = manifest.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    ThreadPool pool(threads);

    std::vector<TrialSummary> summaries;
    nlohmann::json trial_log = nlohmann::json::array();
    int failures = 0;

    for (int i = 0; i < manifest.trials; ++i) {
        ScenarioConfig cfg = manifest.scenario;
        cfg.seed = manifest.seeds[static_cast<size_t>(i)];
        const bool want_files = manifest.export_trajectories || manifest.export_events;

        nlohmann::json row;
        row["trial"] = i;
        row["seed"] = cfg.seed;
        try {
            EpisodeResult r = run_episode(cfg, &pool, want_files);
            char tag[32];
            std::snprintf(tag, sizeof(tag), "trial_%03d", i);
            if (manifest.export_trajectories)
                write_trajectory_csv(manifest.out_dir + "/" + tag + "_trajectories.csv", r,
                                     manifest.export_timing);
            if (manifest.export_events)
                write_events_jsonl(manifest.out_dir + "/" + tag + "_events.jsonl", r);

            const TrialSummary s = summarize(r);
            row["outcome"] = outcome_name(r.outcome);
            row["scores"] = r.scores;
            row["steps"] = r.steps;
            row["initial_count"] = r.initial_count;
            row["final_count"] = r.final_count;
            row["mean_decision_us"] = s.mean_decision_us;
            row["status"] = "ok";
            summaries.push_back(s);
        } catch (const std::exception& e) {
            std::cerr << "trial " << i << " (seed " << cfg.seed << ") failed: " << e.what()
                      << "\n";
            row["status"] = "failed";
            row["error"] = e.what();
            ++failures;
        }
        trial_log.push_back(std::move(row));
    }

    nlohmann::json summary;
    summary["scenario"] = detail::scenario_json(manifest.scenario);
    summary["trials_requested"] = manifest.trials;
    summary["trials_completed"] = static_cast<int>(summaries.size());
    summary["seeds"] = manifest.seeds;
    summary["benchmark"] = manifest.benchmark;
    summary["threads"] = threads;
    summary["trials"] = std::move(trial_log);

    if (!summaries.empty()) {
        size_t draws = 0;
        for (const auto& s : summaries) draws += s.outcome == Outcome::draw ? 1 : 0;
        summary["draw_fraction"] = static_cast<double>(draws) / summaries.size();
        for (Team team : {Team::blue, Team::red}) {
            nlohmann::json tj;
            tj["p_win"] = p_win(summaries, team);
            tj["p_survive"] = p_survive(summaries, team);
            tj["timing_us"] = detail::timing_json(timing_summary(summaries, team));
            summary["teams"][team_name(team)] = std::move(tj);
        }
    }

    const std::string summary_path = manifest.out_dir + "/summary.json";
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << summary_path << "\n";
        return 1;
    }
    out << summary.dump(2) << '\n';
    out.close();

    if (!manifest.quiet) {
        if (!summaries.empty()) {
            for (Team team : {Team::blue, Team::red}) {
                const auto t = timing_summary(summaries, team);
                std::printf("%-5s P_win %.3f  P_s %.3f  decision mean %.3f ms  p95 %.3f ms\n",
                            team_name(team), p_win(summaries, team), p_survive(summaries, team),
                            t.mean_us / 1000.0, t.p95_us / 1000.0);
            }
        }
        std::printf("%d/%d trials completed, results in %s\n",
                    static_cast<int>(summaries.size()), manifest.trials,
                    manifest.out_dir.c_str());
    }
    return failures == manifest.trials && manifest.trials > 0 ? 1 : 0;
}

}  // namespace pursuit
