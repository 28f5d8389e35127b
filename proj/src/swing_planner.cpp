#include "swingsim/swing_planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "swingsim/min_jerk.hpp"

namespace swingsim {
namespace {

constexpr double kBisectTol = 1e-7;
constexpr double kSlopeStencil = deg2rad(0.25);
constexpr double kPhaseTwoDescentFactor = 10.0;
constexpr double kEdgeMargin = deg2rad(1.0);  // aim above the M_z edge
constexpr double kProgressionStep = 1e-4;  // [m]
constexpr double kMirrorGain = 20.0;  // [1/s]
constexpr double kMinHipVelocity = 0.1;
constexpr double kMinHipTravel = deg2rad(1.0);

HipPose with_theta(HipPose hip, double theta_h) {
  hip.theta_h = theta_h;
  return hip;
}

template <class F>
double bisect(F&& f, double lo, double hi) {
  // f(lo) < 0 <= f(hi)
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

void PlannerParams::validate() const {
  if (!(delta > 0.0 && theta_0 > 0.0 && k_max > 0.0 && alpha_1 > 0.0 && alpha_2 > 0.0 &&
        dt > 0.0 && conv_tol > 0.0 && knee_limit > 0.0)) {
    throw std::invalid_argument("planner parameters must all be positive");
  }
}

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::One: return "ONE";
    case Phase::Two: return "TWO";
    case Phase::ThreeTangent: return "THREE_TANGENT";
    case Phase::ThreeConverge: return "THREE_CONVERGE";
    case Phase::ThreeMirror: return "THREE_MIRROR";
  }
  return "?";
}

int phase_group(Phase p) {
  switch (p) {
    case Phase::One: return 1;
    case Phase::Two: return 2;
    default: return 3;
  }
}

std::optional<double> mz_boundary_knee(const LegGeometry& geom, const RegionSnapshot& region,
                                       double theta_h_query, double knee_limit) {
  const HipPose hip = with_theta(region.hip_pose_used, theta_h_query);
  auto gap = [&](double theta_k) { return toe_height_at(geom, hip, theta_k) - region.z_m; };

  if (gap(knee_limit) < 0.0) return std::nullopt;

  // With the foot perpendicular to the shank, toe height along a column is a
  // sinusoid in the shank angle: decreasing until the shank leans back by
  // atan(toe/shank), increasing beyond.
  const double valley_shank = std::atan2(geom.toe_offset, geom.shank_length);
  const double valley = std::clamp(theta_h_query + valley_shank, 0.0, knee_limit);
  if (gap(valley) >= 0.0) return 0.0;
  return bisect(gap, valley, knee_limit);
}

RegionPeak mz_peak(const LegGeometry& geom, const RegionSnapshot& region, double knee_limit,
                   double theta_h_max) {
  const double lo = region.hip_pose_used.theta_h;
  const double hi = std::max(lo, theta_h_max);
  auto value = [&](double th) {
    return mz_boundary_knee(geom, region, th, knee_limit).value_or(knee_limit);
  };

  constexpr double step = deg2rad(0.5);
  bool any_reachable = false;
  RegionPeak best{lo, -1.0};
  for (double th = lo; th <= hi + 1e-12; th += step) {
    const auto b = mz_boundary_knee(geom, region, th, knee_limit);
    any_reachable = any_reachable || b.has_value();
    const double v = b.value_or(knee_limit);
    if (v > best.theta_k) best = {th, v};
  }
  if (!any_reachable) return {lo, knee_limit};
  if (best.theta_k >= knee_limit) return best;

  // Golden-section refinement around the coarse maximum.
  constexpr double inv_phi = 0.6180339887498949;
  double a = std::max(lo, best.theta_h - step);
  double b = std::min(hi, best.theta_h + step);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = value(c);
  double fd = value(d);
  while (b - a > 1e-6) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = value(d);
    }
  }
  const double th = 0.5 * (a + b);
  const double v = value(th);
  if (v > best.theta_k) best = {th, v};
  return best;
}

std::optional<double> mx_exit_distance(const LegGeometry& geom, const HipPose& hip, double theta_k,
                                       double x_c) {
  auto gap = [&](double dth) {
    return toe_forward_at(geom, with_theta(hip, hip.theta_h + dth), theta_k) - x_c;
  };
  if (gap(0.0) >= 0.0) return 0.0;

  const double max_travel = deg2rad(85.0) - hip.theta_h;
  constexpr double step = deg2rad(5.0);
  double prev = 0.0;
  for (double dth = step; prev < max_travel; dth += step) {
    dth = std::min(dth, max_travel);
    if (gap(dth) >= 0.0) return bisect(gap, prev, dth);
    prev = dth;
  }
  return std::nullopt;
}

Phase1Terms phase1_velocity(const LegGeometry& geom, const HipPose& hip, const JointState& joint,
                            const RegionSnapshot& region, const PlannerParams& params) {
  Phase1Terms out;
  double travel = -hip.theta_h;  // swing to vertical when M_x cannot be left
  if (auto d = mx_exit_distance(geom, hip, joint.theta_k, region.x_c)) travel = *d;
  travel = std::max(travel, kMinHipTravel);

  const RegionPeak peak = mz_peak(geom, region, params.knee_limit);
  out.k_min = (std::min(peak.theta_k + kEdgeMargin, params.knee_limit) - joint.theta_k) / travel;
  out.slope = out.k_min;
  if (auto edge = mz_boundary_knee(geom, region, hip.theta_h, params.knee_limit)) {
    out.k_1 = (std::min(*edge + kEdgeMargin, params.knee_limit) - joint.theta_k) / travel;
    out.slope = std::max(*out.k_1, out.k_min);
  }
  // Forward progression also eats into the thigh travel left to x_c.
  double closing = hip.theta_h_dot;
  if (hip.x_h_dot != 0.0) {
    HipPose ahead = hip;
    ahead.x_h += kProgressionStep;
    if (auto d0 = mx_exit_distance(geom, hip, joint.theta_k, region.x_c)) {
      if (auto d1 = mx_exit_distance(geom, ahead, joint.theta_k, region.x_c)) {
        closing -= hip.x_h_dot * (*d1 - *d0) / kProgressionStep;
      }
    }
  }
  out.velocity = out.slope * closing;
  return out;
}

std::optional<double> boundary_slope(const LegGeometry& geom, const RegionSnapshot& region,
                                     double theta_h, double knee_limit) {
  const auto lo = mz_boundary_knee(geom, region, theta_h - kSlopeStencil, knee_limit);
  const auto hi = mz_boundary_knee(geom, region, theta_h + kSlopeStencil, knee_limit);
  if (!lo || !hi) return std::nullopt;
  return (*hi - *lo) / (2.0 * kSlopeStencil);
}

TangentResult phase2_velocity(const LegGeometry& geom, const HipPose& hip, const JointState& joint,
                              const RegionSnapshot& region, const PhaseState& state,
                              const PlannerParams& params) {
  (void)joint;
  TangentResult out;
  out.state = state;
  const RegionSnapshot active = state.frozen_region.value_or(region);

  const auto lo = mz_boundary_knee(geom, active, hip.theta_h - kSlopeStencil, params.knee_limit);
  const auto hi = mz_boundary_knee(geom, active, hip.theta_h + kSlopeStencil, params.knee_limit);
  double k2 = state.last_k2;
  if (lo && hi) {
    k2 = (*hi - *lo) / (2.0 * kSlopeStencil);
    out.region_cleared = (*lo == 0.0 && *hi == 0.0);
  } else {
    out.region_lost = true;
  }

  if (k2 < 0.0) {
    out.state.frozen_region = active;
  } else {
    out.state.frozen_region.reset();
  }
  out.state.last_k2 = k2;
  out.k_2 = k2;
  out.velocity = k2 * hip.theta_h_dot;
  return out;
}

namespace {

// Hip velocity extrapolated to mid-tick, so the integrated knee follows the
// hip's travel over the tick, plus a proportional pull back to the lean that
// absorbs tracking overshoot. The pull is zero while the shank sits at theta_0.
double mirror_velocity(const HipPose& hip, const JointState& joint, const PhaseState& state,
                       const PlannerParams& params) {
  double v = hip.theta_h_dot;
  if (state.prev_hip_vel) v += 0.5 * (hip.theta_h_dot - *state.prev_hip_vel);
  return v + kMirrorGain * ((hip.theta_h - params.theta_0) - joint.theta_k);
}

}  // namespace

Phase3Result phase3_velocity(const LegGeometry& geom, const HipPose& hip, const JointState& joint,
                             const RegionSnapshot& region, const PhaseState& state,
                             const PlannerParams& params) {
  Phase3Result out;
  out.state = state;
  PhaseState& st = out.state;
  st.hip_vel_running_max = std::max({st.hip_vel_running_max, hip.theta_h_dot, kMinHipVelocity});
  const double omega = st.hip_vel_running_max;

  if (st.phase == Phase::ThreeTangent) {
    auto tangent = phase2_velocity(geom, hip, joint, region, st, params);
    st = tangent.state;
    out.k_2 = tangent.k_2;
    // The slope only saturates on the descending side; a cleared column means
    // the descent has already gone vertical, a lost one that tracking is over.
    if (tangent.k_2 <= -params.k_max || tangent.region_cleared || tangent.region_lost) {
      st.theta_k_star = joint.theta_k;
      st.theta_h_star = hip.theta_h;
      const double denom = st.theta_k_star - st.theta_h_star + params.theta_0;
      st.phase = denom > 0.0 ? Phase::ThreeConverge : Phase::ThreeMirror;
    } else {
      out.velocity = std::min(tangent.k_2, params.k_max) * omega;
      return out;
    }
  }

  if (st.phase == Phase::ThreeConverge) {
    const double error = joint.theta_k - (hip.theta_h - params.theta_0);
    if (error <= params.conv_tol) {
      st.phase = Phase::ThreeMirror;
    } else {
      const double denom = st.theta_k_star - st.theta_h_star + params.theta_0;
      out.c_t = std::min(error / denom, 1.0);
      out.velocity = -out.c_t * params.k_max * omega;
      return out;
    }
  }

  out.velocity = mirror_velocity(hip, joint, state, params);
  return out;
}

double blend_command(double raw_vel, double measured_knee_vel, const PhaseState& state,
                     const PlannerParams& params) {
  const double n = static_cast<double>(state.ticks_in_phase);
  const double g1 = std::exp(-params.alpha_1 * n);
  const double g2 = std::exp(-params.alpha_2 * n);
  return (1.0 - g1) * raw_vel +
         g1 * (measured_knee_vel + g2 * state.theta_k_ddot_ini * params.dt);
}

PlannerCommand planner_step(const LegGeometry& geom, const HipPose& hip, const JointState& joint,
                            double measured_knee_vel, const ControlTarget& target,
                            const PhaseState& state, const PlannerParams& params) {
  PlannerCommand cmd;
  PhaseState st = state;
  const FootPoints fp = forward_points(geom, hip, joint.theta_k);

  auto enter = [&](Phase p) {
    st.phase = p;
    st.ticks_in_phase = 0;
    st.theta_k_ddot_ini = joint.theta_k_ddot;
  };
  if (phase_group(st.phase) < 3 && fp.heel.x > hip.x_h) {
    enter(Phase::ThreeTangent);
    st.hip_vel_running_max = std::max(hip.theta_h_dot, kMinHipVelocity);
  } else if (st.phase == Phase::One && fp.toe.z >= target.z_m) {
    enter(Phase::Two);
  }

  const RegionSnapshot fresh{hip, target.z_m, target.x_c};
  switch (phase_group(st.phase)) {
    case 1: {
      const auto p1 = phase1_velocity(geom, hip, joint, fresh, params);
      cmd.raw_planner_vel = p1.velocity;
      cmd.diag.k_slope = p1.slope;
      cmd.diag.k_1 = p1.k_1.value_or(0.0);
      cmd.diag.k_min = p1.k_min;
      break;
    }
    case 2: {
      auto p2 = phase2_velocity(geom, hip, joint, fresh, st, params);
      st = p2.state;
      // Past the far edge the boundary drops almost vertically and the
      // finite difference explodes; cap the descent rate.
      const double floor = -kPhaseTwoDescentFactor * params.k_max;
      const double slope = p2.region_cleared ? -params.k_max : std::max(p2.k_2, floor);
      cmd.raw_planner_vel = slope * hip.theta_h_dot;
      cmd.diag.k_slope = slope;
      cmd.diag.k_2 = p2.k_2;
      break;
    }
    default: {
      auto p3 = phase3_velocity(geom, hip, joint, fresh, st, params);
      st = p3.state;
      cmd.raw_planner_vel = p3.velocity;
      cmd.diag.k_2 = p3.k_2;
      cmd.diag.c_t = p3.c_t;
      cmd.diag.k_slope = hip.theta_h_dot != 0.0 ? p3.velocity / hip.theta_h_dot : 0.0;
      break;
    }
  }

  cmd.diag.gamma_1 = std::exp(-params.alpha_1 * st.ticks_in_phase);
  if (st.phase == Phase::ThreeMirror) {
    // Shank lean is locked kinematically; no cross-fade.
    cmd.knee_vel_cmd = cmd.raw_planner_vel;
  } else {
    cmd.knee_vel_cmd = blend_command(cmd.raw_planner_vel, measured_knee_vel, st, params);
    if (st.phase != Phase::One) {
      // Descent momentum carried by the cross-fade must not take the knee
      // past the landing lean within the tick.
      const double lean_floor =
          hip.theta_h_dot + ((hip.theta_h - params.theta_0) - joint.theta_k) / params.dt;
      cmd.knee_vel_cmd = std::max(cmd.knee_vel_cmd, lean_floor);
    }
  }
  ++st.ticks_in_phase;
  st.prev_hip_vel = hip.theta_h_dot;
  cmd.phase_after = st;
  return cmd;
}

double min_jerk_ankle(double t, double start_angle, double duration) {
  if (duration <= 0.0) return 0.0;
  return start_angle * (1.0 - min_jerk_blend(t / duration));
}

}  // namespace swingsim
