#include "swingsim/report.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace swingsim {
namespace {

using json = nlohmann::ordered_json;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid "-0.000000".
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

json stats_json(const Stats& s) { return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}}; }

json stats_deg_json(const Stats& s) {
  return {{"mean", rad2deg(s.mean)}, {"min", rad2deg(s.min)}, {"max", rad2deg(s.max)}};
}

json result_body(const TrialResult& r) {
  json j;
  j["outcome"] = outcome_name(r.outcome);
  j["success"] = r.success;
  j["swing_duration_s"] = r.swing_duration;
  j["peak_knee_flexion_deg"] = rad2deg(r.peak_knee_flexion);
  j["min_clearance_over_obstacle_m"] = opt(r.min_clearance_over_obstacle);
  j["landing_x_m"] = opt(r.landing_x);
  j["landing_surface"] = r.landing_surface ? json(surface_name(*r.landing_surface)) : json(nullptr);
  j["control_target"] = {{"z_m_m", r.target.z_m}, {"x_c_m", r.target.x_c}};
  j["perception_no_returns"] = r.perception_no_returns;
  j["events_s"] = {{"exit_mz", opt(r.t_exit_mz)},       {"exit_mx", opt(r.t_exit_mx)},
                   {"phase_two", opt(r.t_phase_two)},   {"phase_three", opt(r.t_phase_three)},
                   {"converge", opt(r.t_converge)},     {"mirror", opt(r.t_mirror)}};
  j["mirror_lock_error_rad"] = opt(r.mirror_lock_error);
  j["phase_two_min_margin_m"] = opt(r.phase_two_min_margin);
  return j;
}

json hip_params_json(const HipTrajectoryParams& p) {
  return {{"swing_duration_s", p.swing_duration},
          {"theta_h_start_deg", rad2deg(p.theta_h_start)},
          {"theta_h_end_deg", rad2deg(p.theta_h_end)},
          {"hip_height_base_m", p.hip_height_base},
          {"hip_lift_m", p.hip_lift_amplitude},
          {"forward_speed_m_per_s", p.forward_speed},
          {"progression_stop_fraction", p.progression_stop_fraction},
          {"progression_ramp_s", p.progression_ramp},
          {"lowering_onset_fraction", p.lowering_onset_fraction},
          {"lowering_depth_m", p.lowering_depth},
          {"lowering_duration_s", p.lowering_duration},
          {"extension_deg", rad2deg(p.extension_angle)},
          {"noise_sigma_deg", rad2deg(p.noise_sigma)}};
}

}  // namespace

std::string trial_result_json(const TrialResult& result, const TrialConfig& config) {
  json j;
  j["intent"] = intent_name(config.intent);
  j["seed"] = config.seed;
  j["result"] = result_body(result);
  return j.dump(2) + "\n";
}

std::string campaign_summary_json(const CampaignSummary& s) {
  json j;
  j["seed"] = s.seed;
  j["trials"] = s.trials;
  j["successes"] = s.successes;
  j["success_rate"] = s.success_rate;
  json conds = json::array();
  for (const auto& c : s.conditions) {
    json cj;
    cj["name"] = c.name;
    cj["intent"] = intent_name(c.intent);
    cj["trials"] = c.trials;
    cj["successes"] = c.successes;
    cj["success_rate"] = c.success_rate;
    json oc = json::object();
    for (const auto& [o, n] : c.outcome_counts) oc[std::string(outcome_name(o))] = n;
    cj["outcomes"] = oc;
    cj["swing_duration_s"] = stats_json(c.swing_duration);
    cj["peak_knee_flexion_deg"] = stats_deg_json(c.peak_knee_flexion);
    cj["min_clearance_m"] = opt(c.min_clearance);
    cj["exit_order_violations"] = c.exit_order_violations;
    cj["max_mirror_lock_error_rad"] = c.max_mirror_lock_error;
    conds.push_back(cj);
  }
  j["conditions"] = conds;
  return j.dump(2) + "\n";
}

std::string keypoints_json(const PerceptionResult& p) {
  json kps = json::array();
  for (const auto& k : p.keypoints.keypoints) kps.push_back({{"x_m", k.x}, {"z_m", k.z}});
  json j;
  j["capture_toe"] = {{"x_m", p.capture.cloud.capture_toe.x}, {"z_m", p.capture.cloud.capture_toe.z}};
  j["no_returns"] = p.capture.no_returns;
  j["points"] = p.capture.cloud.points.size();
  j["profile_points"] = p.profile.size();
  j["keypoints"] = kps;
  j["estimate"] = {{"z_m_prime_m", p.estimate.z_m_prime}, {"x_c_raw_m", opt(p.estimate.x_c_raw)}};
  return j.dump(2) + "\n";
}

std::string control_target_json(const PerceptionResult& p) {
  json j{{"z_m_m", p.target.z_m}, {"x_c_m", p.target.x_c}};
  return j.dump(2) + "\n";
}

std::string presets_json() {
  json j = json::object();
  for (auto intent : {GaitIntent::Level, GaitIntent::StepOver, GaitIntent::StepOn}) {
    j[std::string(intent_name(intent))] = hip_params_json(preset(intent));
  }
  return j.dump(2) + "\n";
}

void write_steplog_csv(std::ostream& os, const StepLog& log) {
  os << "t,phase,theta_h,theta_h_dot,theta_k,theta_k_dot_cmd,theta_k_dot_actual,x_h,z_h,x_t,z_t,"
        "x_l,z_l,z_m,x_c,k_slope,C_t,k_1,k_2,gamma_1\n";
  for (const auto& r : log.rows) {
    os << fixed6(r.t) << ',' << phase_name(r.phase);
    for (double v : {r.theta_h, r.theta_h_dot, r.theta_k, r.theta_k_dot_cmd, r.theta_k_dot_actual,
                     r.x_h, r.z_h, r.x_t, r.z_t, r.x_l, r.z_l, r.z_m, r.x_c, r.k_slope, r.c_t,
                     r.k_1, r.k_2, r.gamma_1}) {
      os << ',' << fixed6(v);
    }
    os << '\n';
  }
}

void write_profile_csv(std::ostream& os, std::span<const Vec2> profile) {
  os << "x_m,z_m\n";
  for (const auto& p : profile) os << fixed6(p.x) << ',' << fixed6(p.z) << '\n';
}

void write_campaign_index_csv(std::ostream& os, const CampaignSummary& s) {
  os << "index,condition,intent,seed,height_m,distance_m,outcome,success,swing_duration_s,"
        "peak_knee_flexion_deg,min_clearance_m,landing_x_m\n";
  auto o = [](const std::optional<double>& v) { return v ? fixed6(*v) : std::string(); };
  for (const auto& r : s.records) {
    os << r.index << ',' << r.condition << ',' << intent_name(r.intent) << ',' << r.seed << ','
       << o(r.height) << ',' << o(r.distance) << ',' << outcome_name(r.result.outcome) << ','
       << (r.result.success ? 1 : 0) << ',' << fixed6(r.result.swing_duration) << ','
       << fixed6(rad2deg(r.result.peak_knee_flexion)) << ','
       << o(r.result.min_clearance_over_obstacle) << ',' << o(r.result.landing_x) << '\n';
  }
}

}  // namespace swingsim
