#include "swingsim/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace swingsim {
namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

template <class T>
T as(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for '" + key + "'", line_of(n));
  }
}

using Handler = std::function<void(const YAML::Node&)>;

// Dispatch each key of a mapping to its handler; unknown keys are errors.
void visit(const YAML::Node& map, const std::string& section,
           const std::vector<std::pair<std::string, Handler>>& handlers) {
  if (!map.IsMap()) throw ConfigError("section '" + section + "' must be a mapping", line_of(map));
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    auto it = std::find_if(handlers.begin(), handlers.end(),
                           [&](const auto& h) { return h.first == key; });
    if (it == handlers.end()) {
      throw ConfigError("unknown key '" + key + "' in section '" + section + "'",
                        line_of(kv.first));
    }
    it->second(kv.second);
  }
}

Handler meters(double& dst, const std::string& key) {
  return [&dst, key](const YAML::Node& n) { dst = as<double>(n, key); };
}
Handler degrees(double& dst, const std::string& key) {
  return [&dst, key](const YAML::Node& n) { dst = deg2rad(as<double>(n, key)); };
}
Handler integer(int& dst, const std::string& key) {
  return [&dst, key](const YAML::Node& n) { dst = as<int>(n, key); };
}

std::vector<std::pair<std::string, Handler>> geometry_keys(LegGeometry& g) {
  return {{"thigh_m", meters(g.thigh_length, "thigh_m")},
          {"shank_m", meters(g.shank_length, "shank_m")},
          {"toe_m", meters(g.toe_offset, "toe_m")},
          {"heel_m", meters(g.heel_offset, "heel_m")}};
}

std::vector<std::pair<std::string, Handler>> camera_keys(CameraModel& c, PerceptionParams& p) {
  return {{"fov_deg", degrees(c.fov, "fov_deg")},
          {"lateral_fov_deg", degrees(c.lateral_fov, "lateral_fov_deg")},
          {"max_range_m", meters(c.max_range, "max_range_m")},
          {"rays_vertical", integer(c.rays_vertical, "rays_vertical")},
          {"rays_lateral", integer(c.rays_lateral, "rays_lateral")},
          {"mount_along_m", meters(c.mount_along, "mount_along_m")},
          {"mount_perpendicular_m", meters(c.mount_perpendicular, "mount_perpendicular_m")},
          {"mount_pitch_deg", degrees(c.mount_pitch, "mount_pitch_deg")},
          {"depth_noise_sigma_m", meters(c.depth_noise_sigma, "depth_noise_sigma_m")},
          {"clusters", integer(p.clusters, "clusters")},
          {"kmeans_restarts", integer(p.kmeans_restarts, "kmeans_restarts")},
          {"corridor_width_m", meters(p.corridor_width, "corridor_width_m")},
          {"edge_threshold_m", meters(p.edge_threshold, "edge_threshold_m")},
          {"default_distance_m", meters(p.default_distance, "default_distance_m")}};
}

std::vector<std::pair<std::string, Handler>> planner_keys(PlannerParams& p) {
  return {{"theta0_deg", degrees(p.theta_0, "theta0_deg")},
          {"kmax", meters(p.k_max, "kmax")},
          {"alpha1", meters(p.alpha_1, "alpha1")},
          {"alpha2", meters(p.alpha_2, "alpha2")},
          {"delta_m", meters(p.delta, "delta_m")},
          {"conv_tol_deg", degrees(p.conv_tol, "conv_tol_deg")},
          {"knee_limit_deg", degrees(p.knee_limit, "knee_limit_deg")},
          {"dt_s", meters(p.dt, "dt_s")}};
}

std::vector<std::pair<std::string, Handler>> human_keys(HipTrajectoryParams& h) {
  return {{"swing_duration_s", meters(h.swing_duration, "swing_duration_s")},
          {"theta_h_start_deg", degrees(h.theta_h_start, "theta_h_start_deg")},
          {"theta_h_end_deg", degrees(h.theta_h_end, "theta_h_end_deg")},
          {"hip_height_base_m", meters(h.hip_height_base, "hip_height_base_m")},
          {"hip_lift_m", meters(h.hip_lift_amplitude, "hip_lift_m")},
          {"forward_speed_m_per_s", meters(h.forward_speed, "forward_speed_m_per_s")},
          {"progression_stop_fraction", meters(h.progression_stop_fraction, "progression_stop_fraction")},
          {"progression_ramp_s", meters(h.progression_ramp, "progression_ramp_s")},
          {"lowering_onset_fraction", meters(h.lowering_onset_fraction, "lowering_onset_fraction")},
          {"lowering_depth_m", meters(h.lowering_depth, "lowering_depth_m")},
          {"lowering_duration_s", meters(h.lowering_duration, "lowering_duration_s")},
          {"extension_deg", degrees(h.extension_angle, "extension_deg")},
          {"noise_sigma_deg", degrees(h.noise_sigma, "noise_sigma_deg")}};
}

std::vector<std::pair<std::string, Handler>> trial_keys(TrialConfig& t, std::string* output_dir) {
  std::vector<std::pair<std::string, Handler>> keys = {
      {"seed", [&t](const YAML::Node& n) { t.seed = as<std::uint64_t>(n, "seed"); }},
      {"tracking_lag_tau_s", meters(t.tracking_lag_tau, "tracking_lag_tau_s")},
      {"toe_off_knee_deg", degrees(t.toe_off_knee, "toe_off_knee_deg")},
      {"capture_thigh_deg", degrees(t.capture_thigh, "capture_thigh_deg")},
      {"capture_lead_s", meters(t.capture_lead, "capture_lead_s")},
      {"timeout_factor", meters(t.timeout_factor, "timeout_factor")},
      {"auto_hip_height",
       [&t](const YAML::Node& n) { t.auto_hip_height = as<bool>(n, "auto_hip_height"); }},
      {"auto_lowering",
       [&t](const YAML::Node& n) { t.auto_lowering = as<bool>(n, "auto_lowering"); }},
      {"landing_overshoot_m", meters(t.landing_overshoot, "landing_overshoot_m")}};
  if (output_dir) {
    keys.emplace_back("output_dir",
                      [output_dir](const YAML::Node& n) { *output_dir = as<std::string>(n, "output_dir"); });
  }
  return keys;
}

void parse_scene(const YAML::Node& node, ObstacleScene& scene) {
  visit(node, "scene",
        {{"ground_height_m", meters(scene.ground_height, "ground_height_m")},
         {"boxes", [&scene](const YAML::Node& list) {
            if (!list.IsSequence()) throw ConfigError("'boxes' must be a list", line_of(list));
            scene.boxes.clear();
            for (const auto& item : list) {
              Box b;
              visit(item, "scene.boxes",
                    {{"front_m", meters(b.front_x, "front_m")},
                     {"height_m", meters(b.height, "height_m")},
                     {"depth_m", meters(b.depth, "depth_m")},
                     {"width_m", meters(b.width, "width_m")}});
              scene.boxes.push_back(b);
            }
          }}});
}

YAML::Node load_root(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  if (root.IsNull()) return YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("top level must be a mapping", line_of(root));
  return root;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void validate_or_throw(const TrialConfig& trial) {
  try {
    trial.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0);
  }
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

Scenario parse_scenario(const std::string& yaml_text) {
  const YAML::Node root = load_root(yaml_text);
  Scenario sc;
  TrialConfig& t = sc.trial;

  // The intent selects the human preset before any override applies.
  if (const auto human = root["human"]; human && human.IsMap() && human["intent"]) {
    const auto name = as<std::string>(human["intent"], "intent");
    const auto intent = parse_intent(name);
    if (!intent) throw ConfigError("unknown intent '" + name + "'", line_of(human["intent"]));
    t = default_trial(*intent);
  }

  visit(root, "<top>",
        {{"geometry", [&](const YAML::Node& n) { visit(n, "geometry", geometry_keys(t.geometry)); }},
         {"camera", [&](const YAML::Node& n) { visit(n, "camera", camera_keys(t.camera, t.perception)); }},
         {"planner", [&](const YAML::Node& n) { visit(n, "planner", planner_keys(t.planner)); }},
         {"human",
          [&](const YAML::Node& n) {
            auto keys = human_keys(t.human);
            keys.emplace_back("intent", [](const YAML::Node&) {});
            visit(n, "human", keys);
          }},
         {"scene", [&](const YAML::Node& n) { parse_scene(n, t.scene); }},
         {"trial", [&](const YAML::Node& n) { visit(n, "trial", trial_keys(t, &sc.output_dir)); }}});
  t.perception.delta = t.planner.delta;
  validate_or_throw(t);
  return sc;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

std::string dump_scenario(const Scenario& sc) {
  const TrialConfig& t = sc.trial;
  YAML::Emitter out;
  out << YAML::BeginMap;
  auto kv = [&out](const char* key, double v) { out << YAML::Key << key << YAML::Value << num(v); };
  auto kd = [&kv](const char* key, double rad) { kv(key, rad2deg(rad)); };

  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  kv("thigh_m", t.geometry.thigh_length);
  kv("shank_m", t.geometry.shank_length);
  kv("toe_m", t.geometry.toe_offset);
  kv("heel_m", t.geometry.heel_offset);
  out << YAML::EndMap;

  out << YAML::Key << "camera" << YAML::Value << YAML::BeginMap;
  kd("fov_deg", t.camera.fov);
  kd("lateral_fov_deg", t.camera.lateral_fov);
  kv("max_range_m", t.camera.max_range);
  out << YAML::Key << "rays_vertical" << YAML::Value << t.camera.rays_vertical;
  out << YAML::Key << "rays_lateral" << YAML::Value << t.camera.rays_lateral;
  kv("mount_along_m", t.camera.mount_along);
  kv("mount_perpendicular_m", t.camera.mount_perpendicular);
  kd("mount_pitch_deg", t.camera.mount_pitch);
  kv("depth_noise_sigma_m", t.camera.depth_noise_sigma);
  out << YAML::Key << "clusters" << YAML::Value << t.perception.clusters;
  out << YAML::Key << "kmeans_restarts" << YAML::Value << t.perception.kmeans_restarts;
  kv("corridor_width_m", t.perception.corridor_width);
  kv("edge_threshold_m", t.perception.edge_threshold);
  kv("default_distance_m", t.perception.default_distance);
  out << YAML::EndMap;

  out << YAML::Key << "planner" << YAML::Value << YAML::BeginMap;
  kd("theta0_deg", t.planner.theta_0);
  kv("kmax", t.planner.k_max);
  kv("alpha1", t.planner.alpha_1);
  kv("alpha2", t.planner.alpha_2);
  kv("delta_m", t.planner.delta);
  kd("conv_tol_deg", t.planner.conv_tol);
  kd("knee_limit_deg", t.planner.knee_limit);
  kv("dt_s", t.planner.dt);
  out << YAML::EndMap;

  const auto& h = t.human;
  out << YAML::Key << "human" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "intent" << YAML::Value << std::string(intent_name(t.intent));
  kv("swing_duration_s", h.swing_duration);
  kd("theta_h_start_deg", h.theta_h_start);
  kd("theta_h_end_deg", h.theta_h_end);
  kv("hip_height_base_m", h.hip_height_base);
  kv("hip_lift_m", h.hip_lift_amplitude);
  kv("forward_speed_m_per_s", h.forward_speed);
  kv("progression_stop_fraction", h.progression_stop_fraction);
  kv("progression_ramp_s", h.progression_ramp);
  kv("lowering_onset_fraction", h.lowering_onset_fraction);
  kv("lowering_depth_m", h.lowering_depth);
  kv("lowering_duration_s", h.lowering_duration);
  kd("extension_deg", h.extension_angle);
  kd("noise_sigma_deg", h.noise_sigma);
  out << YAML::EndMap;

  out << YAML::Key << "scene" << YAML::Value << YAML::BeginMap;
  kv("ground_height_m", t.scene.ground_height);
  out << YAML::Key << "boxes" << YAML::Value << YAML::BeginSeq;
  for (const auto& b : t.scene.boxes) {
    out << YAML::BeginMap;
    kv("front_m", b.front_x);
    kv("height_m", b.height);
    kv("depth_m", b.depth);
    kv("width_m", b.width);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "trial" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << t.seed;
  kv("tracking_lag_tau_s", t.tracking_lag_tau);
  kd("toe_off_knee_deg", t.toe_off_knee);
  kd("capture_thigh_deg", t.capture_thigh);
  kv("capture_lead_s", t.capture_lead);
  kv("timeout_factor", t.timeout_factor);
  out << YAML::Key << "auto_hip_height" << YAML::Value << t.auto_hip_height;
  out << YAML::Key << "auto_lowering" << YAML::Value << t.auto_lowering;
  kv("landing_overshoot_m", t.landing_overshoot);
  if (!sc.output_dir.empty()) out << YAML::Key << "output_dir" << YAML::Value << sc.output_dir;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

CampaignConfig parse_campaign(const std::string& yaml_text) {
  const YAML::Node root = load_root(yaml_text);
  CampaignConfig cfg;
  TrialConfig& t = cfg.base;

  auto parse_condition = [](const YAML::Node& item) {
    CampaignCondition c;
    if (!item.IsMap()) throw ConfigError("condition must be a mapping", line_of(item));
    std::string intent = "step_over";
    int line = line_of(item);
    if (item["intent"]) {
      intent = as<std::string>(item["intent"], "intent");
      line = line_of(item["intent"]);
    }
    const auto parsed = parse_intent(intent);
    if (!parsed) throw ConfigError("unknown intent '" + intent + "'", line);
    visit(item, "campaign.conditions",
          {{"name", [&c](const YAML::Node& n) { c.name = as<std::string>(n, "name"); }},
           {"intent", [](const YAML::Node&) {}},
           {"count", integer(c.count, "count")},
           {"heights_m", [&c](const YAML::Node& n) { c.heights = as<std::vector<double>>(n, "heights_m"); }},
           {"distance_min_m", meters(c.distance_min, "distance_min_m")},
           {"distance_max_m", meters(c.distance_max, "distance_max_m")},
           {"box_depth_m", meters(c.box_depth, "box_depth_m")},
           {"box_width_m", meters(c.box_width, "box_width_m")},
           {"human", [&](const YAML::Node& n) {
              HipTrajectoryParams h = preset(*parsed);
              visit(n, "campaign.conditions.human", human_keys(h));
              try {
                h.validate();
              } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what(), line_of(n));
              }
              c.human = h;
            }}});
    c.intent = *parsed;
    if (c.name.empty()) c.name = intent;
    if (c.count < 0 || c.distance_max < c.distance_min) {
      throw ConfigError("condition '" + c.name + "': bad count or distance range", line_of(item));
    }
    return c;
  };

  visit(root, "<top>",
        {{"campaign",
          [&](const YAML::Node& n) {
            visit(n, "campaign",
                  {{"seed", [&](const YAML::Node& v) { cfg.seed = as<std::uint64_t>(v, "seed"); }},
                   {"jobs", integer(cfg.jobs, "jobs")},
                   {"profile",
                    [&](const YAML::Node& v) {
                      const auto name = as<std::string>(v, "profile");
                      if (name != "paper") throw ConfigError("unknown profile '" + name + "'", line_of(v));
                      cfg.conditions = protocol_campaign().conditions;
                    }},
                   {"conditions", [&](const YAML::Node& list) {
                      if (!list.IsSequence()) throw ConfigError("'conditions' must be a list", line_of(list));
                      std::vector<CampaignCondition> conds;
                      for (const auto& item : list) conds.push_back(parse_condition(item));
                      cfg.conditions = std::move(conds);
                    }}});
          }},
         {"geometry", [&](const YAML::Node& n) { visit(n, "geometry", geometry_keys(t.geometry)); }},
         {"camera", [&](const YAML::Node& n) { visit(n, "camera", camera_keys(t.camera, t.perception)); }},
         {"planner", [&](const YAML::Node& n) { visit(n, "planner", planner_keys(t.planner)); }},
         {"human",
          [&](const YAML::Node& n) {
            visit(n, "human", {{"noise_sigma_deg", degrees(t.human.noise_sigma, "noise_sigma_deg")}});
          }},
         {"trial", [&](const YAML::Node& n) { visit(n, "trial", trial_keys(t, nullptr)); }}});
  if (cfg.conditions.empty()) cfg.conditions = protocol_campaign().conditions;
  t.perception.delta = t.planner.delta;
  validate_or_throw(t);
  return cfg;
}

CampaignConfig load_campaign(const std::string& path) { return parse_campaign(read_file(path)); }

}  // namespace swingsim
