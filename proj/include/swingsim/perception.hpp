#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swingsim/leg_kinematics.hpp"

namespace swingsim {

/// Axis-aligned box resting on the ground, centered laterally on y = 0.
struct Box {
  double front_x = 0.5;
  double height = 0.16;
  double depth = 0.10;
  double width = 0.30;

  double back_x() const { return front_x + depth; }
  friend bool operator==(const Box&, const Box&) = default;
};

struct ObstacleScene {
  double ground_height = 0.0;
  std::vector<Box> boxes;

  /// Throws std::invalid_argument on non-positive box dimensions or boxes
  /// overlapping in x.
  void validate() const;
  /// Terrain top at x (box top inside a footprint, ground elsewhere).
  double surface_height(double x) const;

  friend bool operator==(const ObstacleScene&, const ObstacleScene&) = default;
};

struct CameraModel {
  double fov = deg2rad(65.0);          ///< vertical fan
  double lateral_fov = deg2rad(20.0);  ///< lateral fan
  /// Ground look-ahead: returns farther than this ahead of the capture toe
  /// are discarded.
  double max_range = 1.0;
  int rays_vertical = 240;
  int rays_lateral = 9;
  double mount_along = 0.10;          ///< below the hip along the thigh
  double mount_perpendicular = 0.05;  ///< anterior, perpendicular to the thigh
  /// Depression of the optical axis below the thigh's anterior normal.
  double mount_pitch = deg2rad(60.0);
  double depth_noise_sigma = 0.0;

  void validate() const;
  friend bool operator==(const CameraModel&, const CameraModel&) = default;
};

/// Camera position in the sagittal plane (y = 0) and optical axis given as
/// the depression angle below the world horizontal.
struct CameraPose {
  Vec2 position;
  double depression = 0.0;
};

/// Camera pose for a thigh at `hip` with the mount extrinsics of `model`.
CameraPose camera_pose_from_thigh(const HipPose& hip, const CameraModel& model);

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

struct PointCloud {
  std::vector<Point3> points;
  Vec2 capture_toe;
};

struct CaptureResult {
  PointCloud cloud;
  /// True when no ray returned (e.g. camera pointed skyward).
  bool no_returns = false;
};

CaptureResult capture(const ObstacleScene& scene, const CameraPose& pose, const CameraModel& model,
                      Vec2 capture_toe, std::uint64_t seed);

/// Keeps points within corridor_width/2 of the prosthesis plane and drops y.
std::vector<Vec2> crop_and_project(const PointCloud& cloud, double corridor_width = 0.15,
                                   double y_prosthesis = 0.0);

/// Pruned sagittal elevation map, strictly increasing in x.
struct ElevationKeypoints {
  std::vector<Vec2> keypoints;
};

ElevationKeypoints kmeans_prune(std::span<const Vec2> points, int k, std::uint64_t seed,
                                int restarts = 4);

struct ObstacleEstimate {
  double z_m_prime = 0.0;
  std::optional<double> x_c_raw;
};

ObstacleEstimate extract_estimate(const ElevationKeypoints& keypoints, Vec2 toe,
                                  double edge_threshold = 0.02);

struct ControlTarget {
  double z_m = 0.0;
  double x_c = 0.0;
  friend bool operator==(const ControlTarget&, const ControlTarget&) = default;
};

inline constexpr double kDefaultObstacleDistance = 0.20;

ControlTarget control_modify(const ObstacleEstimate& est, double z_t, double delta = 0.01,
                             double default_distance = kDefaultObstacleDistance);

struct PerceptionParams {
  int clusters = 30;
  int kmeans_restarts = 4;
  double corridor_width = 0.15;
  double edge_threshold = 0.02;
  double delta = 0.01;
  double default_distance = kDefaultObstacleDistance;

  friend bool operator==(const PerceptionParams&, const PerceptionParams&) = default;
};

/// Everything produced by one capture, kept for inspection and plotting.
struct PerceptionResult {
  CaptureResult capture;
  std::vector<Vec2> profile;
  ElevationKeypoints keypoints;
  ObstacleEstimate estimate;
  ControlTarget target;  ///< x_c relative to the capture toe
};

/// Full pipeline capture -> crop -> prune -> extract -> modify. A capture
/// with no returns, or nothing left after cropping, falls back to level
/// ground.
PerceptionResult perceive(const ObstacleScene& scene, const CameraPose& pose,
                          const CameraModel& model, Vec2 capture_toe,
                          const PerceptionParams& params, std::uint64_t seed);

}  // namespace swingsim
