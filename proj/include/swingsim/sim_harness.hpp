#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swingsim/human_model.hpp"
#include "swingsim/leg_kinematics.hpp"
#include "swingsim/perception.hpp"
#include "swingsim/swing_planner.hpp"

namespace swingsim {

struct TrialConfig {
  ObstacleScene scene;
  GaitIntent intent = GaitIntent::Level;
  LegGeometry geometry;
  PlannerParams planner;
  HipTrajectoryParams human = preset(GaitIntent::Level);
  CameraModel camera;
  PerceptionParams perception;
  std::uint64_t seed = 1;
  double tracking_lag_tau = 0.0;  ///< first-order knee tracking lag [s], 0 = ideal
  double toe_off_knee = deg2rad(20.0);
  double capture_thigh = deg2rad(-10.0);  ///< thigh angle at the late-stance capture
  double capture_lead = 0.10;             ///< capture happens this long before toe-off [s]
  double timeout_factor = 2.0;            ///< x nominal swing duration
  /// Place the hip so the toe rests on the ground at toe-off, overriding
  /// human.hip_height_base.
  bool auto_hip_height = true;
  /// Derive human.lowering_depth from the landing posture so the foot meets
  /// the intended surface (box top for step-on, ground otherwise).
  bool auto_lowering = true;
  double landing_overshoot = 0.02;  ///< lowering target below the surface [m]

  /// Throws std::invalid_argument on any invalid block.
  void validate() const;
  friend bool operator==(const TrialConfig&, const TrialConfig&) = default;
};

/// Preset human parameters for the intent, other fields at their defaults.
TrialConfig default_trial(GaitIntent intent);

struct StepLogRow {
  double t = 0.0;
  Phase phase = Phase::One;
  double theta_h = 0.0;
  double theta_h_dot = 0.0;
  double theta_k = 0.0;
  double theta_k_dot_cmd = 0.0;
  double theta_k_dot_actual = 0.0;
  double x_h = 0.0;
  double z_h = 0.0;
  double x_t = 0.0;
  double z_t = 0.0;
  double x_l = 0.0;
  double z_l = 0.0;
  double z_m = 0.0;
  double x_c = 0.0;
  double k_slope = 0.0;
  double c_t = 0.0;
  double k_1 = 0.0;
  double k_2 = 0.0;
  double gamma_1 = 0.0;
};

struct StepLog {
  std::vector<StepLogRow> rows;
};

enum class Outcome { SuccessStepOver, SuccessStepOn, SuccessLevel, Trip, Scuff, Timeout };
enum class LandingSurface { Ground, ObstacleTop };

std::string_view outcome_name(Outcome o);
std::string_view surface_name(LandingSurface s);
/// The successful outcome that matches an intent.
Outcome success_outcome(GaitIntent intent);

struct TrialResult {
  Outcome outcome = Outcome::Timeout;
  bool success = false;  ///< outcome matches the intent
  double swing_duration = 0.0;
  double peak_knee_flexion = 0.0;
  std::optional<double> min_clearance_over_obstacle;
  std::optional<double> landing_x;
  std::optional<LandingSurface> landing_surface;
  bool perception_no_returns = false;
  ControlTarget target;  ///< x_c absolute in the world frame
  // Event times, absent if the event never happened.
  std::optional<double> t_exit_mz;
  std::optional<double> t_exit_mx;
  std::optional<double> t_phase_two;
  std::optional<double> t_phase_three;
  std::optional<double> t_converge;
  std::optional<double> t_mirror;
  /// Largest |shank angle - theta_0| between mirror entry and contact.
  std::optional<double> mirror_lock_error;
  /// Smallest toe margin above z_m while phase two was active.
  std::optional<double> phase_two_min_margin;
  /// Largest |command - measured| on the first tick of a phase minus
  /// |initial acceleration| * dt.
  double blend_continuity_excess = 0.0;
};

enum class ContactKind { None, Trip, Scuff, LandGround, LandObstacleTop };

struct ContactResult {
  ContactKind kind = ContactKind::None;
  Vec2 point;  ///< contacting foot point
};

/// Geometric contact classification of the current pose against the scene.
/// `previous` is the pose one tick earlier (direction of motion). Ground
/// touches are ignored until `armed` (the foot has lifted off) unless the
/// penetration exceeds scuff_tolerance.
ContactResult contact_check(const FootPoints& current, const FootPoints& previous,
                            const ObstacleScene& scene, bool in_mirror, bool armed,
                            double scuff_tolerance = 0.005);

struct TrialRun {
  StepLog log;
  TrialResult result;
  PerceptionResult perception;
};

/// One swing from late-stance capture to contact or timeout.
TrialRun run_swing(const TrialConfig& config);

struct CampaignCondition {
  std::string name;
  GaitIntent intent = GaitIntent::StepOver;
  int count = 0;
  std::vector<double> heights;  ///< empty: no obstacle
  double distance_min = 0.15;
  double distance_max = 0.70;
  double box_depth = 0.10;
  double box_width = 0.30;
  std::optional<HipTrajectoryParams> human;  ///< replaces the intent preset

  friend bool operator==(const CampaignCondition&, const CampaignCondition&) = default;
};

struct CampaignConfig {
  std::uint64_t seed = 2024;
  std::vector<CampaignCondition> conditions;
  /// Everything but scene, intent, human parameters and seed is taken from
  /// here for each trial.
  TrialConfig base;
  int jobs = 1;
};

/// Protocol with 150 step-overs over {4, 8, 16} cm boxes at 15-70 cm, 30
/// step-ons onto a 16 cm box and 50 level steps.
CampaignConfig protocol_campaign(std::uint64_t seed = 2024);

struct TrialRecord {
  int index = 0;
  std::string condition;
  GaitIntent intent = GaitIntent::Level;
  std::uint64_t seed = 0;
  std::optional<double> height;
  std::optional<double> distance;
  TrialResult result;
};

struct Stats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct ConditionSummary {
  std::string name;
  GaitIntent intent = GaitIntent::Level;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  std::vector<std::pair<Outcome, int>> outcome_counts;
  Stats swing_duration;
  Stats peak_knee_flexion;
  std::optional<double> min_clearance;
  int exit_order_violations = 0;
  double max_mirror_lock_error = 0.0;
};

struct CampaignSummary {
  std::uint64_t seed = 0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  std::vector<ConditionSummary> conditions;
  std::vector<TrialRecord> records;
};

/// Derives a per-trial scene and seed from the campaign seed, runs every
/// trial (on `jobs` threads) and aggregates per condition.
CampaignSummary run_campaign(const CampaignConfig& config);

/// Build the trial config for the i-th trial of a campaign. Exposed for
/// replaying single trials.
TrialRecord campaign_trial(const CampaignConfig& config, int index, TrialConfig& out);

}  // namespace swingsim
