#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "swingsim/leg_kinematics.hpp"
#include "swingsim/perception.hpp"

namespace swingsim {

struct PlannerParams {
  double delta = 0.01;                ///< safety margin added to obstacle height [m]
  double theta_0 = deg2rad(5.0);      ///< landing shank lean [rad]
  double k_max = 3.0;                 ///< late-swing slope magnitude limit
  double alpha_1 = 0.05;              ///< per-tick decay of the velocity cross-fade
  double alpha_2 = 0.05;              ///< per-tick decay of the acceleration carry-over
  double dt = 0.001;                  ///< controller tick [s]
  double conv_tol = deg2rad(0.5);     ///< knee convergence tolerance [rad]
  double knee_limit = deg2rad(85.0);  ///< hardware flexion limit [rad]

  void validate() const;
  friend bool operator==(const PlannerParams&, const PlannerParams&) = default;
};

/// Hip pose and obstacle parameters from which the forbidden regions are
/// built. x_c is an absolute world x here.
struct RegionSnapshot {
  HipPose hip_pose_used;
  double z_m = 0.0;
  double x_c = 0.0;

  friend bool operator==(const RegionSnapshot&, const RegionSnapshot&) = default;
};

enum class Phase { One, Two, ThreeTangent, ThreeConverge, ThreeMirror };

std::string_view phase_name(Phase p);
/// 1, 2 or 3. Velocity blending restarts only when this changes.
int phase_group(Phase p);

struct PhaseState {
  Phase phase = Phase::One;
  int ticks_in_phase = 0;
  double theta_k_ddot_ini = 0.0;
  double hip_vel_running_max = 0.0;
  double theta_k_star = 0.0;
  double theta_h_star = 0.0;
  std::optional<RegionSnapshot> frozen_region;
  double last_k2 = 0.0;
  std::optional<double> prev_hip_vel;  ///< hip velocity one tick earlier
};

/// Per-tick internals, logged for debugging.
struct PlannerDiagnostics {
  double k_slope = 0.0;  ///< slope actually applied to the hip velocity
  double k_1 = 0.0;
  double k_min = 0.0;
  double k_2 = 0.0;
  double c_t = 0.0;
  double gamma_1 = 0.0;
};

struct PlannerCommand {
  double knee_vel_cmd = 0.0;
  double raw_planner_vel = 0.0;
  PhaseState phase_after;
  PlannerDiagnostics diag;
};

/// Upper edge of the toe-below-obstacle region at a given thigh angle: the
/// smallest knee angle from which the toe stays at or above z_m for every
/// larger flexion up to the limit. Returns 0 when the whole column is clear
/// and nullopt when the toe cannot reach z_m even at the limit.
std::optional<double> mz_boundary_knee(const LegGeometry& geom, const RegionSnapshot& region,
                                       double theta_h_query, double knee_limit);

struct RegionPeak {
  double theta_h = 0.0;
  double theta_k = 0.0;
};

/// Highest point of the boundary for thigh angles in
/// [region hip angle, theta_h_max]. Unreachable columns count as the knee
/// limit.
RegionPeak mz_peak(const LegGeometry& geom, const RegionSnapshot& region, double knee_limit,
                   double theta_h_max = deg2rad(80.0));

/// Thigh rotation at fixed knee angle that brings the toe forward to x_c.
std::optional<double> mx_exit_distance(const LegGeometry& geom, const HipPose& hip, double theta_k,
                                       double x_c);

struct Phase1Terms {
  double velocity = 0.0;
  double slope = 0.0;
  std::optional<double> k_1;
  double k_min = 0.0;
};

Phase1Terms phase1_velocity(const LegGeometry& geom, const HipPose& hip, const JointState& joint,
                            const RegionSnapshot& region, const PlannerParams& params);

/// Finite-difference slope of the boundary at theta_h (+-0.25 deg).
std::optional<double> boundary_slope(const LegGeometry& geom, const RegionSnapshot& region,
                                     double theta_h, double knee_limit);

struct TangentResult {
  double velocity = 0.0;
  double k_2 = 0.0;
  bool region_cleared = false;  ///< boundary is zero on both sides of the stencil
  bool region_lost = false;     ///< no knee angle keeps the toe above z_m here
  PhaseState state;
};

TangentResult phase2_velocity(const LegGeometry& geom, const HipPose& hip, const JointState& joint,
                              const RegionSnapshot& region, const PhaseState& state,
                              const PlannerParams& params);

struct Phase3Result {
  double velocity = 0.0;
  double k_2 = 0.0;
  double c_t = 0.0;
  PhaseState state;
};

Phase3Result phase3_velocity(const LegGeometry& geom, const HipPose& hip, const JointState& joint,
                             const RegionSnapshot& region, const PhaseState& state,
                             const PlannerParams& params);

/// Exponential cross-fade from the measured knee velocity to the planned one
/// over the first ticks of a phase.
double blend_command(double raw_vel, double measured_knee_vel, const PhaseState& state,
                     const PlannerParams& params);

PlannerCommand planner_step(const LegGeometry& geom, const HipPose& hip, const JointState& joint,
                            double measured_knee_vel, const ControlTarget& target,
                            const PhaseState& state, const PlannerParams& params);

/// Minimum-jerk return of the ankle from start_angle to 0 over duration.
double min_jerk_ankle(double t, double start_angle, double duration);

}  // namespace swingsim
