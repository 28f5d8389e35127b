#pragma once

#include <numbers>

namespace swingsim {

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Point in the sagittal plane of the world frame (x forward, z up).
struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Link lengths of the two-link leg with a foot rigidly perpendicular to the
/// shank. All four lengths must be strictly positive.
struct LegGeometry {
  double thigh_length = 0.44;
  double shank_length = 0.43;  ///< knee to ankle
  double toe_offset = 0.15;    ///< ankle to toe along the foot line
  double heel_offset = 0.07;   ///< ankle to heel, opposite direction

  /// Throws std::invalid_argument if any length is not strictly positive.
  void validate() const;

  friend bool operator==(const LegGeometry&, const LegGeometry&) = default;
};

/// Hip position in the world frame and thigh angle from world vertical
/// (positive = flexed forward).
struct HipPose {
  double x_h = 0.0;
  double z_h = 1.0;
  double theta_h = 0.0;
  double theta_h_dot = 0.0;
  double x_h_dot = 0.0;  ///< forward progression speed [m/s]

  friend bool operator==(const HipPose&, const HipPose&) = default;
};

/// Knee flexion (shank rotated backward relative to the thigh).
struct JointState {
  double theta_k = 0.0;
  double theta_k_dot = 0.0;
  double theta_k_ddot = 0.0;
};

struct FootPoints {
  Vec2 knee;
  Vec2 ankle;
  Vec2 toe;
  Vec2 heel;
  /// theta_h - theta_k, from world vertical, positive = forward lean.
  double shank_angle = 0.0;
};

// Pure kinematic chain hip -> knee -> ankle -> {toe, heel}.
FootPoints forward_points(const LegGeometry& geom, const HipPose& hip, double theta_k);

double toe_height_at(const LegGeometry& geom, const HipPose& hip, double theta_k);
double toe_forward_at(const LegGeometry& geom, const HipPose& hip, double theta_k);

/// Hip height that puts the toe exactly on `ground` for the given thigh and
/// knee angles.
double hip_height_for_toe_contact(const LegGeometry& geom, double theta_h, double theta_k,
                                  double ground = 0.0);

}  // namespace swingsim
