#include "swingsim/human_model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "swingsim/min_jerk.hpp"

namespace swingsim {

std::string_view intent_name(GaitIntent intent) {
  switch (intent) {
    case GaitIntent::Level: return "level";
    case GaitIntent::StepOver: return "step_over";
    case GaitIntent::StepOn: return "step_on";
  }
  return "?";
}

std::optional<GaitIntent> parse_intent(std::string_view name) {
  if (name == "level") return GaitIntent::Level;
  if (name == "step_over") return GaitIntent::StepOver;
  if (name == "step_on") return GaitIntent::StepOn;
  return std::nullopt;
}

void HipTrajectoryParams::validate() const {
  auto fraction = [](double f) { return f > 0.0 && f <= 1.0; };
  if (!(swing_duration > 0.0)) throw std::invalid_argument("human: swing_duration must be > 0");
  if (!(theta_h_end > theta_h_start)) throw std::invalid_argument("human: theta_h_end must exceed theta_h_start");
  if (!fraction(progression_stop_fraction) || !fraction(lowering_onset_fraction)) {
    throw std::invalid_argument("human: fractions must lie in (0, 1]");
  }
  if (!(hip_height_base > 0.0)) throw std::invalid_argument("human: hip height must be > 0");
  if (!(progression_ramp > 0.0) || !(lowering_duration > 0.0)) {
    throw std::invalid_argument("human: ramp durations must be > 0");
  }
  if (!(forward_speed >= 0.0) || !(noise_sigma >= 0.0) ||
      !(extension_angle >= 0.0) || !(hip_lift_amplitude >= 0.0)) {
    throw std::invalid_argument("human: speeds, amplitudes and sigma must be >= 0");
  }
}

HipTrajectoryParams preset(GaitIntent intent) {
  HipTrajectoryParams p;
  switch (intent) {
    case GaitIntent::Level:
      break;
    case GaitIntent::StepOver:
      p.swing_duration = 0.81;
      p.theta_h_end = deg2rad(70.0);
      p.hip_lift_amplitude = 0.07;
      p.progression_stop_fraction = 1.0;
      p.lowering_onset_fraction = 0.75;
      p.extension_angle = deg2rad(25.0);
      break;
    case GaitIntent::StepOn:
      p.swing_duration = 0.64;
      p.theta_h_end = deg2rad(65.0);
      p.hip_lift_amplitude = 0.08;
      p.progression_stop_fraction = 0.6;
      p.lowering_onset_fraction = 0.7;
      p.extension_angle = deg2rad(10.0);
      break;
  }
  return p;
}

HipTrajectory::HipTrajectory(const HipTrajectoryParams& params, std::uint64_t seed)
    : params_(params) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(1.0, 4.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  // Equal amplitudes; RMS of the sum is sigma.
  const double amp = params_.noise_sigma * std::sqrt(2.0 / waves_.size());
  for (auto& w : waves_) w = {amp, 2.0 * std::numbers::pi * freq(rng), phase(rng)};
}

HipPose HipTrajectory::at(double t) const {
  const auto& p = params_;
  const double T = p.swing_duration;
  HipPose hip;

  // Thigh: min-jerk rise, then extension from the landing-cue onset.
  const double rise = p.theta_h_end - p.theta_h_start;
  const double t_cue = p.lowering_onset_fraction * T;
  const double s_cue = (t - t_cue) / p.lowering_duration;
  hip.theta_h = p.theta_h_start + rise * min_jerk_blend(t / T) -
                p.extension_angle * min_jerk_blend(s_cue);
  hip.theta_h_dot = rise * min_jerk_blend_rate(t / T) / T -
                    p.extension_angle * min_jerk_blend_rate(s_cue) / p.lowering_duration;
  for (const auto& w : waves_) {
    hip.theta_h += w.amplitude * (std::sin(w.omega * t + w.phase) - std::sin(w.phase));
    hip.theta_h_dot += w.amplitude * w.omega * std::cos(w.omega * t + w.phase);
  }

  // Forward progression at constant speed, ramped linearly to rest at the stop time.
  const double t_stop = p.progression_stop_fraction * T;
  const double ramp = std::min(p.progression_ramp, t_stop);
  const double t_ramp = t_stop - ramp;
  if (t <= t_ramp) {
    hip.x_h = p.forward_speed * t;
    hip.x_h_dot = p.forward_speed;
  } else {
    const double tau = std::min(t, t_stop) - t_ramp;
    hip.x_h = p.forward_speed * (t_ramp + tau - 0.5 * tau * tau / ramp);
    hip.x_h_dot = t >= t_stop ? 0.0 : p.forward_speed * (1.0 - tau / ramp);
  }

  // Height: sin^2 lift over the nominal swing, minus the lowering cue.
  hip.z_h = p.hip_height_base - p.lowering_depth * min_jerk_blend(s_cue);
  if (t < T) {
    const double s = std::sin(std::numbers::pi * t / T);
    hip.z_h += p.hip_lift_amplitude * s * s;
  }
  return hip;
}

HipPose hip_pose(const HipTrajectoryParams& params, double t, std::uint64_t seed) {
  return HipTrajectory(params, seed).at(t);
}

}  // namespace swingsim
