#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "swingsim/leg_kinematics.hpp"

namespace swingsim {

enum class GaitIntent { Level, StepOver, StepOn };

std::string_view intent_name(GaitIntent intent);
std::optional<GaitIntent> parse_intent(std::string_view name);

/// Open-loop description of the user's hip during one swing. Times are
/// relative to toe-off; x_h is relative to the toe-off hip position.
struct HipTrajectoryParams {
  double swing_duration = 0.61;
  double theta_h_start = deg2rad(-15.0);
  double theta_h_end = deg2rad(30.0);
  double hip_height_base = 0.88;
  double hip_lift_amplitude = 0.01;
  double forward_speed = 0.7;
  /// Progression halts at this fraction of the swing (reached through a
  /// linear velocity ramp of progression_ramp seconds).
  double progression_stop_fraction = 1.0;
  double progression_ramp = 0.10;
  /// Start of the landing cue: hip lowering plus thigh extension.
  double lowering_onset_fraction = 0.7;
  double lowering_depth = 0.02;  ///< negative values raise the hip
  double lowering_duration = 0.25;
  double extension_angle = deg2rad(10.0);
  double noise_sigma = 0.0;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
  friend bool operator==(const HipTrajectoryParams&, const HipTrajectoryParams&) = default;
};

HipTrajectoryParams preset(GaitIntent intent);

/// Deterministic hip trajectory. Noise on theta_h is a seeded sum of slow
/// sinusoids, so the trajectory stays smooth.
class HipTrajectory {
 public:
  explicit HipTrajectory(const HipTrajectoryParams& params, std::uint64_t seed = 0);

  HipPose at(double t) const;
  const HipTrajectoryParams& params() const { return params_; }

 private:
  struct Wave {
    double amplitude;
    double omega;
    double phase;
  };
  HipTrajectoryParams params_;
  std::array<Wave, 3> waves_{};
};

HipPose hip_pose(const HipTrajectoryParams& params, double t, std::uint64_t seed = 0);

}  // namespace swingsim
