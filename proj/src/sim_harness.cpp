#include "swingsim/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "swingsim/seeding.hpp"

namespace swingsim {
namespace {

constexpr double kLiftoffClearance = 0.002;

// Segment a-b clipped to x in [x0, x1]; returns the lowest z on the clipped
// part, or nullopt when the segment does not overlap the span.
std::optional<double> lowest_over_span(Vec2 a, Vec2 b, double x0, double x1) {
  if (a.x > b.x) std::swap(a, b);
  const double lo = std::max(a.x, x0);
  const double hi = std::min(b.x, x1);
  if (lo > hi) return std::nullopt;
  auto z_at = [&](double x) {
    if (b.x == a.x) return std::min(a.z, b.z);
    return a.z + (b.z - a.z) * (x - a.x) / (b.x - a.x);
  };
  return std::min(z_at(lo), z_at(hi));
}

bool segment_hits_box(Vec2 a, Vec2 b, const Box& box, double ground) {
  const auto low = lowest_over_span(a, b, box.front_x, box.back_x());
  return low && *low < ground + box.height;
}

}  // namespace

void TrialConfig::validate() const {
  geometry.validate();
  planner.validate();
  human.validate();
  camera.validate();
  scene.validate();
  if (!(tracking_lag_tau >= 0.0)) throw std::invalid_argument("trial: tau must be >= 0");
  if (!(timeout_factor > 0.0)) throw std::invalid_argument("trial: timeout factor must be > 0");
  if (toe_off_knee < 0.0 || toe_off_knee > planner.knee_limit) {
    throw std::invalid_argument("trial: toe-off knee angle outside joint limits");
  }
  if (perception.clusters < 1) throw std::invalid_argument("trial: clusters must be >= 1");
}

TrialConfig default_trial(GaitIntent intent) {
  TrialConfig cfg;
  cfg.intent = intent;
  cfg.human = preset(intent);
  return cfg;
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::SuccessStepOver: return "SUCCESS_STEP_OVER";
    case Outcome::SuccessStepOn: return "SUCCESS_STEP_ON";
    case Outcome::SuccessLevel: return "SUCCESS_LEVEL";
    case Outcome::Trip: return "TRIP";
    case Outcome::Scuff: return "SCUFF";
    case Outcome::Timeout: return "TIMEOUT";
  }
  return "?";
}

std::string_view surface_name(LandingSurface s) {
  return s == LandingSurface::Ground ? "GROUND" : "OBSTACLE_TOP";
}

Outcome success_outcome(GaitIntent intent) {
  switch (intent) {
    case GaitIntent::StepOver: return Outcome::SuccessStepOver;
    case GaitIntent::StepOn: return Outcome::SuccessStepOn;
    default: return Outcome::SuccessLevel;
  }
}

ContactResult contact_check(const FootPoints& current, const FootPoints& previous,
                            const ObstacleScene& scene, bool in_mirror, bool armed,
                            double scuff_tolerance) {
  const double g = scene.ground_height;
  for (const auto& box : scene.boxes) {
    const double top = g + box.height;
    if (segment_hits_box(current.knee, current.ankle, box, g)) {
      return {ContactKind::Trip, current.ankle};
    }
    if (!segment_hits_box(current.heel, current.toe, box, g)) continue;

    const Vec2 low = current.heel.z < current.toe.z ? current.heel : current.toe;
    // Top entry: last tick the foot was over the span and entirely above it.
    const auto before = lowest_over_span(previous.heel, previous.toe, box.front_x, box.back_x());
    const bool from_above = before && *before >= top;
    const bool descending = low.z < (current.heel.z < current.toe.z ? previous.heel.z : previous.toe.z);
    if (in_mirror && from_above && descending) {
      Vec2 point = low;
      if (point.x < box.front_x || point.x > box.back_x()) {
        point = {std::clamp(point.x, box.front_x, box.back_x()), top};
      }
      return {ContactKind::LandObstacleTop, point};
    }
    return {ContactKind::Trip, low};
  }

  // Ground outside box footprints.
  for (const auto* pts : {&current.heel, &current.toe}) {
    const Vec2 p = *pts;
    if (scene.surface_height(p.x) > g) continue;
    if (p.z > g) continue;
    if (!armed && p.z > g - scuff_tolerance) continue;
    const Vec2 prev = pts == &current.heel ? previous.heel : previous.toe;
    if (in_mirror && p.z < prev.z) return {ContactKind::LandGround, p};
    return {ContactKind::Scuff, p};
  }
  return {};
}

TrialRun run_swing(const TrialConfig& config) {
  config.validate();
  TrialRun run;
  TrialResult& res = run.result;
  const auto& geom = config.geometry;
  const auto& pp = config.planner;
  const double ground = config.scene.ground_height;

  HipTrajectoryParams human = config.human;
  if (config.auto_hip_height) {
    human.hip_height_base =
        hip_height_for_toe_contact(geom, human.theta_h_start, config.toe_off_knee, ground);
  }
  if (config.auto_lowering) {
    double surface = ground;
    if (config.intent == GaitIntent::StepOn && !config.scene.boxes.empty()) {
      surface = ground + config.scene.boxes.front().height;
    }
    const double th = human.theta_h_end - human.extension_angle;
    const double tk = std::clamp(th - pp.theta_0, 0.0, pp.knee_limit);
    const FootPoints f = forward_points(geom, {0.0, 0.0, th, 0.0}, tk);
    const double lowest = std::min(f.toe.z, f.heel.z);
    human.lowering_depth = human.hip_height_base - (surface - config.landing_overshoot - lowest);
  }
  // World frame: toe-off toe at x = 0.
  const double x_offset =
      -toe_forward_at(geom, {0.0, human.hip_height_base, human.theta_h_start, 0.0},
                      config.toe_off_knee);
  const HipTrajectory traj(human, split_seed(config.seed, streams::kHuman));
  auto hip_at = [&](double t) {
    HipPose h = traj.at(t);
    h.x_h += x_offset;
    return h;
  };

  PerceptionParams perception_params = config.perception;
  perception_params.delta = pp.delta;
  // Late-stance capture; the stance toe sits where the swing will start.
  const Vec2 capture_toe{0.0, ground};
  const HipPose capture_hip{x_offset - human.forward_speed * config.capture_lead,
                            human.hip_height_base, config.capture_thigh, 0.0};
  run.perception = perceive(config.scene, camera_pose_from_thigh(capture_hip, config.camera),
                            config.camera, capture_toe, perception_params, config.seed);
  res.perception_no_returns = run.perception.capture.no_returns;
  ControlTarget target = run.perception.target;
  target.x_c += capture_toe.x;
  res.target = target;

  JointState joint{config.toe_off_knee, 0.0, 0.0};
  PhaseState state;
  const double dt = pp.dt;
  const double t_end = config.timeout_factor * human.swing_duration;
  const auto max_ticks = static_cast<long>(std::ceil(t_end / dt));
  bool armed = false;
  FootPoints prev = forward_points(geom, hip_at(0.0), joint.theta_k);
  run.log.rows.reserve(static_cast<std::size_t>(max_ticks) + 1);

  for (long i = 0; i <= max_ticks; ++i) {
    const double t = static_cast<double>(i) * dt;
    const HipPose hip = hip_at(t);
    const FootPoints fp = forward_points(geom, hip, joint.theta_k);
    res.peak_knee_flexion = std::max(res.peak_knee_flexion, joint.theta_k);

    const bool mirror = state.phase == Phase::ThreeMirror;
    const ContactResult contact = contact_check(fp, prev, config.scene, mirror, armed);
    if (contact.kind != ContactKind::None) {
      res.swing_duration = t;
      switch (contact.kind) {
        case ContactKind::Trip: res.outcome = Outcome::Trip; break;
        case ContactKind::Scuff: res.outcome = Outcome::Scuff; break;
        case ContactKind::LandObstacleTop:
          res.outcome = Outcome::SuccessStepOn;
          res.landing_surface = LandingSurface::ObstacleTop;
          res.landing_x = contact.point.x;
          break;
        default: {
          res.landing_surface = LandingSurface::Ground;
          res.landing_x = contact.point.x;
          const bool crossed = std::any_of(
              config.scene.boxes.begin(), config.scene.boxes.end(),
              [&](const Box& b) { return b.front_x > 0.0 && b.back_x() < contact.point.x; });
          res.outcome = crossed ? Outcome::SuccessStepOver : Outcome::SuccessLevel;
        }
      }
      break;
    }
    if (i == max_ticks) {
      res.swing_duration = t;
      res.outcome = Outcome::Timeout;
      break;
    }
    armed = armed || std::min(fp.heel.z, fp.toe.z) > ground + kLiftoffClearance;

    if (!res.t_exit_mz && fp.toe.z >= target.z_m) res.t_exit_mz = t;
    if (!res.t_exit_mx && fp.toe.x >= target.x_c) res.t_exit_mx = t;
    for (const auto& box : config.scene.boxes) {
      if (auto low = lowest_over_span(fp.heel, fp.toe, box.front_x, box.back_x())) {
        const double clearance = *low - (ground + box.height);
        res.min_clearance_over_obstacle =
            std::min(res.min_clearance_over_obstacle.value_or(clearance), clearance);
      }
    }

    const double measured = joint.theta_k_dot;
    const PlannerCommand cmd = planner_step(geom, hip, joint, measured, target, state, pp);
    const PhaseState& next = cmd.phase_after;

    if (next.phase != state.phase || i == 0) {
      if (next.phase == Phase::Two) res.t_phase_two = t;
      if (phase_group(next.phase) == 3 && !res.t_phase_three) res.t_phase_three = t;
      if (next.phase == Phase::ThreeConverge) res.t_converge = t;
      if (next.phase == Phase::ThreeMirror) res.t_mirror = t;
      if (phase_group(next.phase) != phase_group(state.phase) || i == 0) {
        const double excess = std::abs(cmd.knee_vel_cmd - measured) -
                              std::abs(next.theta_k_ddot_ini) * dt;
        res.blend_continuity_excess = std::max(res.blend_continuity_excess, excess);
      }
    }
    if (next.phase == Phase::Two) {
      const double margin = fp.toe.z - target.z_m;
      res.phase_two_min_margin = std::min(res.phase_two_min_margin.value_or(margin), margin);
    }
    if (next.phase == Phase::ThreeMirror) {
      const double err = std::abs(fp.shank_angle - pp.theta_0);
      res.mirror_lock_error = std::max(res.mirror_lock_error.value_or(0.0), err);
    }

    StepLogRow row;
    row.t = t;
    row.phase = next.phase;
    row.theta_h = hip.theta_h;
    row.theta_h_dot = hip.theta_h_dot;
    row.theta_k = joint.theta_k;
    row.theta_k_dot_cmd = cmd.knee_vel_cmd;
    row.theta_k_dot_actual = joint.theta_k_dot;
    row.x_h = hip.x_h;
    row.z_h = hip.z_h;
    row.x_t = fp.toe.x;
    row.z_t = fp.toe.z;
    row.x_l = fp.heel.x;
    row.z_l = fp.heel.z;
    row.z_m = target.z_m;
    row.x_c = target.x_c;
    row.k_slope = cmd.diag.k_slope;
    row.c_t = cmd.diag.c_t;
    row.k_1 = cmd.diag.k_1;
    row.k_2 = cmd.diag.k_2;
    row.gamma_1 = cmd.diag.gamma_1;
    run.log.rows.push_back(row);

    // Knee tracking: ideal or first-order lag, then joint-limit clamp.
    double velocity = cmd.knee_vel_cmd;
    if (config.tracking_lag_tau > 0.0) {
      velocity = joint.theta_k_dot +
                 (cmd.knee_vel_cmd - joint.theta_k_dot) * std::min(1.0, dt / config.tracking_lag_tau);
    }
    const double next_knee = std::clamp(joint.theta_k + velocity * dt, 0.0, pp.knee_limit);
    const double actual = (next_knee - joint.theta_k) / dt;
    joint.theta_k_ddot = (actual - joint.theta_k_dot) / dt;
    joint.theta_k_dot = actual;
    joint.theta_k = next_knee;
    state = next;
    prev = fp;
  }

  res.success = res.outcome == success_outcome(config.intent);
  return run;
}

CampaignConfig protocol_campaign(std::uint64_t seed) {
  CampaignConfig cfg;
  cfg.seed = seed;
  for (double h : {0.04, 0.08, 0.16}) {
    CampaignCondition c;
    c.name = "step_over_" + std::to_string(static_cast<int>(std::lround(h * 100))) + "cm";
    c.intent = GaitIntent::StepOver;
    c.count = 50;
    c.heights = {h};
    c.distance_min = 0.15;
    c.distance_max = 0.70;
    c.box_depth = 0.10;
    cfg.conditions.push_back(c);
  }
  CampaignCondition on;
  on.name = "step_on_16cm";
  on.intent = GaitIntent::StepOn;
  on.count = 30;
  on.heights = {0.16};
  on.distance_min = 0.15;
  on.distance_max = 0.40;
  on.box_depth = 0.80;
  cfg.conditions.push_back(on);

  CampaignCondition level;
  level.name = "level";
  level.intent = GaitIntent::Level;
  level.count = 50;
  cfg.conditions.push_back(level);
  return cfg;
}

TrialRecord campaign_trial(const CampaignConfig& config, int index, TrialConfig& out) {
  int remaining = index;
  const CampaignCondition* cond = nullptr;
  for (const auto& c : config.conditions) {
    if (remaining < c.count) {
      cond = &c;
      break;
    }
    remaining -= c.count;
  }
  if (!cond) throw std::out_of_range("campaign: trial index out of range");

  TrialRecord rec;
  rec.index = index;
  rec.condition = cond->name;
  rec.intent = cond->intent;
  rec.seed = split_seed(config.seed, static_cast<std::uint64_t>(index));

  out = config.base;
  out.intent = cond->intent;
  out.human = cond->human.value_or(preset(cond->intent));
  out.human.noise_sigma = config.base.human.noise_sigma;
  out.seed = rec.seed;
  out.scene.boxes.clear();
  if (!cond->heights.empty()) {
    std::mt19937_64 rng(split_seed(rec.seed, streams::kScenario));
    std::uniform_int_distribution<std::size_t> pick(0, cond->heights.size() - 1);
    std::uniform_real_distribution<double> dist(cond->distance_min, cond->distance_max);
    const double h = cond->heights[pick(rng)];
    const double d = dist(rng);
    out.scene.boxes.push_back({d, h, cond->box_depth, cond->box_width});
    rec.height = h;
    rec.distance = d;
  }
  return rec;
}

namespace {

Stats stats_of(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  return s;
}

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& config) {
  int total = 0;
  for (const auto& c : config.conditions) total += c.count;

  CampaignSummary summary;
  summary.seed = config.seed;
  summary.records.resize(static_cast<std::size_t>(total));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < total; i = next++) {
      TrialConfig trial;
      TrialRecord rec = campaign_trial(config, i, trial);
      try {
        rec.result = run_swing(trial).result;
      } catch (const std::exception&) {
        rec.result = TrialResult{};  // recorded as a timeout, never aborts
      }
      summary.records[static_cast<std::size_t>(i)] = std::move(rec);
    }
  };
  const int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  for (const auto& cond : config.conditions) {
    ConditionSummary cs;
    cs.name = cond.name;
    cs.intent = cond.intent;
    std::vector<double> durations, peaks;
    for (const auto& rec : summary.records) {
      if (rec.condition != cond.name) continue;
      const auto& r = rec.result;
      ++cs.trials;
      if (r.success) ++cs.successes;
      auto it = std::find_if(cs.outcome_counts.begin(), cs.outcome_counts.end(),
                             [&](const auto& p) { return p.first == r.outcome; });
      if (it == cs.outcome_counts.end()) {
        cs.outcome_counts.emplace_back(r.outcome, 1);
      } else {
        ++it->second;
      }
      durations.push_back(r.swing_duration);
      peaks.push_back(r.peak_knee_flexion);
      if (r.min_clearance_over_obstacle) {
        cs.min_clearance = std::min(cs.min_clearance.value_or(*r.min_clearance_over_obstacle),
                                    *r.min_clearance_over_obstacle);
      }
      if (r.success && rec.height) {
        const bool ordered = r.t_exit_mz && (!r.t_exit_mx || *r.t_exit_mz < *r.t_exit_mx);
        if (!ordered) ++cs.exit_order_violations;
      }
      cs.max_mirror_lock_error = std::max(cs.max_mirror_lock_error, r.mirror_lock_error.value_or(0.0));
    }
    std::sort(cs.outcome_counts.begin(), cs.outcome_counts.end());
    cs.success_rate = cs.trials > 0 ? static_cast<double>(cs.successes) / cs.trials : 0.0;
    cs.swing_duration = stats_of(durations);
    cs.peak_knee_flexion = stats_of(peaks);
    summary.trials += cs.trials;
    summary.successes += cs.successes;
    summary.conditions.push_back(std::move(cs));
  }
  summary.success_rate =
      summary.trials > 0 ? static_cast<double>(summary.successes) / summary.trials : 0.0;
  return summary;
}

}  // namespace swingsim
