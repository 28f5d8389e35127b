// swingsim: command-line front end for the swing simulator.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "swingsim/report.hpp"
#include "swingsim/scenario.hpp"
#include "swingsim/sim_harness.hpp"

namespace fs = std::filesystem;
using namespace swingsim;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
  bool strict = false;
  bool dump_config = false;
};

// Scene shortcuts for running without a scenario file.
struct QuickScene {
  std::string file;
  std::string intent;
  double height = 0.0;
  double distance = 0.4;
  double depth = -1.0;
  double width = 0.30;
};

fs::path output_dir(const Globals& g, const std::string& from_file) {
  if (!g.out.empty()) return g.out;
  if (const char* env = std::getenv("SWINGSIM_OUT"); env && *env) return env;
  if (!from_file.empty()) return from_file;
  return "swingsim_out";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

Scenario build_scenario(const QuickScene& q, const Globals& g) {
  Scenario sc;
  if (!q.file.empty()) {
    sc = load_scenario(q.file);
  } else {
    const std::string name = q.intent.empty() ? (q.height > 0 ? "step_over" : "level") : q.intent;
    const auto intent = parse_intent(name);
    if (!intent) throw ConfigError("unknown intent '" + name + "'", 0);
    sc.trial = default_trial(*intent);
    if (q.height > 0) {
      const double depth = q.depth > 0 ? q.depth : (*intent == GaitIntent::StepOn ? 0.80 : 0.10);
      sc.trial.scene.boxes.push_back(Box{q.distance, q.height, depth, q.width});
    }
  }
  if (g.seed) sc.trial.seed = *g.seed;
  return sc;
}

void add_quick_options(CLI::App* cmd, QuickScene& q) {
  cmd->add_option("scenario", q.file, "Scenario YAML file");
  cmd->add_option("--intent", q.intent, "level, step_over or step_on (no scenario file)");
  cmd->add_option("--height", q.height, "Box height [m] (no scenario file)");
  cmd->add_option("--distance", q.distance, "Box front distance from the toe [m]");
  cmd->add_option("--depth", q.depth, "Box depth [m]");
  cmd->add_option("--width", q.width, "Box width [m]");
}

int cmd_run(const QuickScene& q, const Globals& g) {
  const Scenario sc = build_scenario(q, g);
  if (g.dump_config) {
    std::cout << dump_scenario(sc);
    return 0;
  }
  const fs::path dir = output_dir(g, sc.output_dir);
  fs::create_directories(dir);
  const TrialRun run = run_swing(sc.trial);
  {
    std::ofstream os(dir / "steplog.csv", std::ios::binary);
    write_steplog_csv(os, run.log);
  }
  write_text(dir / "trial_result.json", trial_result_json(run.result, sc.trial));
  std::cout << outcome_name(run.result.outcome) << " swing=" << run.result.swing_duration
            << "s peak_knee=" << rad2deg(run.result.peak_knee_flexion) << "deg rows="
            << run.log.rows.size() << " -> " << dir.string() << "\n";
  return (g.strict && !run.result.success) ? 1 : 0;
}

int cmd_perceive(const QuickScene& q, const Globals& g) {
  const Scenario sc = build_scenario(q, g);
  if (g.dump_config) {
    std::cout << dump_scenario(sc);
    return 0;
  }
  const fs::path dir = output_dir(g, sc.output_dir);
  fs::create_directories(dir);
  const TrialRun run = run_swing(sc.trial);
  const auto& p = run.perception;
  {
    std::ofstream os(dir / "profile.csv", std::ios::binary);
    write_profile_csv(os, p.profile);
  }
  write_text(dir / "keypoints.json", keypoints_json(p));
  write_text(dir / "control_target.json", control_target_json(p));
  std::cout << "z_m=" << p.target.z_m << " x_c=" << p.target.x_c << " keypoints="
            << p.keypoints.keypoints.size() << " -> " << dir.string() << "\n";
  return 0;
}

int cmd_campaign(const std::string& file, const Globals& g) {
  CampaignConfig cfg = file.empty() ? protocol_campaign() : load_campaign(file);
  if (g.seed) cfg.seed = *g.seed;
  if (g.jobs > 0) cfg.jobs = g.jobs;
  const fs::path dir = output_dir(g, "");
  fs::create_directories(dir);
  const CampaignSummary s = run_campaign(cfg);
  write_text(dir / "summary.json", campaign_summary_json(s));
  {
    std::ofstream os(dir / "trials.csv", std::ios::binary);
    write_campaign_index_csv(os, s);
  }
  for (const auto& c : s.conditions) {
    std::cout << c.name << ": " << c.successes << "/" << c.trials;
    for (const auto& [o, n] : c.outcome_counts) std::cout << " " << outcome_name(o) << "=" << n;
    std::cout << "  swing=" << c.swing_duration.mean << "s peak="
              << rad2deg(c.peak_knee_flexion.mean) << "deg\n";
  }
  std::cout << "total: " << s.successes << "/" << s.trials << " -> " << dir.string() << "\n";
  return (g.strict && s.successes != s.trials) ? 1 : 0;
}

struct SweepOptions {
  std::string intent = "step_over";
  std::vector<double> heights{0.04, 0.08, 0.16};
  double dmin = 0.15;
  double dmax = 0.70;
  int steps = 12;
  double depth = -1.0;
  std::string param = "distance";
  std::vector<double> values;
};

// Applies a swept planner parameter; alpha sets both decay rates.
void apply_param(PlannerParams& p, const std::string& name, double v) {
  if (name == "theta0_deg") p.theta_0 = deg2rad(v);
  else if (name == "kmax") p.k_max = v;
  else if (name == "alpha") p.alpha_1 = p.alpha_2 = v;
}

int cmd_sweep(const SweepOptions& o, const Globals& g) {
  const auto intent = parse_intent(o.intent);
  if (!intent) throw ConfigError("unknown intent '" + o.intent + "'", 0);
  if (o.steps < 1 || o.dmax < o.dmin) throw ConfigError("bad sweep range", 0);
  const bool planner_param = o.param != "distance";
  if (planner_param && o.param != "theta0_deg" && o.param != "kmax" && o.param != "alpha")
    throw ConfigError("unknown sweep parameter '" + o.param + "'", 0);
  if (planner_param && o.values.empty()) throw ConfigError("--values required for " + o.param, 0);
  const std::vector<double> values = planner_param ? o.values : std::vector<double>{0.0};
  const fs::path dir = output_dir(g, "");
  fs::create_directories(dir);
  std::ofstream os(dir / "sweep.csv", std::ios::binary);
  os << "param,value,height_m,distance_m,outcome,success,swing_duration_s,"
        "peak_knee_flexion_deg,z_m_m,x_c_m\n";
  int failures = 0;
  char buf[256];
  for (double v : values) {
    for (double h : o.heights) {
      for (int i = 0; i < o.steps; ++i) {
        const double d = o.steps == 1 ? o.dmin : o.dmin + (o.dmax - o.dmin) * i / (o.steps - 1);
        TrialConfig t = default_trial(*intent);
        t.seed = g.seed.value_or(1);
        if (planner_param) apply_param(t.planner, o.param, v);
        t.planner.validate();
        const double depth = o.depth > 0 ? o.depth : (*intent == GaitIntent::StepOn ? 0.80 : 0.10);
        t.scene.boxes.push_back(Box{d, h, depth, 0.30});
        const TrialResult r = run_swing(t).result;
        failures += r.success ? 0 : 1;
        std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%s,%d,%.6f,%.6f,%.6f,%.6f\n",
                      o.param.c_str(), planner_param ? v : d, h, d,
                      std::string(outcome_name(r.outcome)).c_str(), r.success ? 1 : 0,
                      r.swing_duration, rad2deg(r.peak_knee_flexion), r.target.z_m, r.target.x_c);
        os << buf;
      }
    }
  }
  std::cout << "failures: " << failures << " -> " << (dir / "sweep.csv").string() << "\n";
  return (g.strict && failures > 0) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swing controller simulator for a powered knee prosthesis"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the random seed");
  app.add_option("--out", g.out, "Output directory (default $SWINGSIM_OUT or swingsim_out)");
  app.add_option("--jobs", g.jobs, "Worker threads for campaigns")->check(CLI::PositiveNumber);
  app.add_flag("--strict", g.strict, "Exit 1 if any trial fails");
  app.add_flag("--dump-config", g.dump_config, "Print the effective scenario and exit");

  QuickScene run_q, perceive_q;
  auto* run = app.add_subcommand("run", "Simulate one swing");
  add_quick_options(run, run_q);
  auto* perceive = app.add_subcommand("perceive", "Run the perception pipeline only");
  add_quick_options(perceive, perceive_q);

  std::string campaign_file;
  auto* campaign = app.add_subcommand("campaign", "Run a campaign (default: the full protocol)");
  campaign->add_option("file", campaign_file, "Campaign YAML file");

  SweepOptions sw;
  auto* sweep = app.add_subcommand(
      "sweep", "Sweep obstacle distance per height, optionally per planner parameter value");
  sweep->add_option("--param", sw.param, "distance, theta0_deg, kmax or alpha");
  sweep->add_option("--values", sw.values, "Values of --param (planner parameters only)");
  sweep->add_option("--intent", sw.intent);
  sweep->add_option("--heights", sw.heights, "Box heights [m]");
  sweep->add_option("--dmin", sw.dmin);
  sweep->add_option("--dmax", sw.dmax);
  sweep->add_option("--steps", sw.steps);
  sweep->add_option("--depth", sw.depth);

  auto* presets = app.add_subcommand("show-presets", "Print the human-model presets as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*run) return cmd_run(run_q, g);
    if (*perceive) return cmd_perceive(perceive_q, g);
    if (*campaign) return cmd_campaign(campaign_file, g);
    if (*sweep) return cmd_sweep(sw, g);
    if (*presets) {
      std::cout << presets_json();
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
