#include "swingsim/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "swingsim/kmeans.hpp"
#include "swingsim/seeding.hpp"

namespace swingsim {
namespace {

// Hard sensor range along a ray; the look-ahead cut is applied separately.
constexpr double kSensorRange = 4.0;

struct Ray {
  Point3 origin;
  Point3 dir;
};

std::optional<double> hit_ground(const Ray& r, double ground) {
  if (r.dir.z >= 0.0) return std::nullopt;
  const double t = (ground - r.origin.z) / r.dir.z;
  return t > 0.0 ? std::optional<double>(t) : std::nullopt;
}

std::optional<double> hit_box(const Ray& r, const Box& b, double ground) {
  const double lo[3] = {b.front_x, -0.5 * b.width, ground};
  const double hi[3] = {b.back_x(), 0.5 * b.width, ground + b.height};
  const double o[3] = {r.origin.x, r.origin.y, r.origin.z};
  const double d[3] = {r.dir.x, r.dir.y, r.dir.z};
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d[a]) < 1e-15) {
      if (o[a] < lo[a] || o[a] > hi[a]) return std::nullopt;
      continue;
    }
    double t0 = (lo[a] - o[a]) / d[a];
    double t1 = (hi[a] - o[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_enter > t_exit || t_enter <= 0.0) return std::nullopt;
  return t_enter;
}

}  // namespace

void ObstacleScene::validate() const {
  for (const auto& b : boxes) {
    if (!(b.height > 0.0) || !(b.depth > 0.0) || !(b.width > 0.0)) {
      throw std::invalid_argument("scene: box dimensions must be positive");
    }
  }
  auto sorted = boxes;
  std::sort(sorted.begin(), sorted.end(),
            [](const Box& a, const Box& b) { return a.front_x < b.front_x; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].front_x < sorted[i - 1].back_x()) {
      throw std::invalid_argument("scene: boxes overlap in x");
    }
  }
}

double ObstacleScene::surface_height(double x) const {
  double h = ground_height;
  for (const auto& b : boxes) {
    if (x >= b.front_x && x <= b.back_x()) h = std::max(h, ground_height + b.height);
  }
  return h;
}

void CameraModel::validate() const {
  if (!(fov > 0.0 && fov < std::numbers::pi)) throw std::invalid_argument("camera: fov out of (0, pi)");
  if (!(lateral_fov >= 0.0 && lateral_fov < std::numbers::pi)) {
    throw std::invalid_argument("camera: lateral fov out of [0, pi)");
  }
  if (rays_vertical < 2 || rays_lateral < 2) throw std::invalid_argument("camera: need >= 2 rays per axis");
  if (!(depth_noise_sigma >= 0.0)) throw std::invalid_argument("camera: noise sigma must be >= 0");
  if (!(max_range > 0.0)) throw std::invalid_argument("camera: max range must be positive");
}

CameraPose camera_pose_from_thigh(const HipPose& hip, const CameraModel& model) {
  const double s = std::sin(hip.theta_h);
  const double c = std::cos(hip.theta_h);
  CameraPose pose;
  // down the thigh (s, -c), anterior normal (c, s)
  pose.position = {hip.x_h + model.mount_along * s + model.mount_perpendicular * c,
                   hip.z_h - model.mount_along * c + model.mount_perpendicular * s};
  pose.depression = model.mount_pitch - hip.theta_h;
  return pose;
}

CaptureResult capture(const ObstacleScene& scene, const CameraPose& pose, const CameraModel& model,
                      Vec2 capture_toe, std::uint64_t seed) {
  CaptureResult out;
  out.cloud.capture_toe = capture_toe;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  const Point3 origin{pose.position.x, 0.0, pose.position.z};
  for (int i = 0; i < model.rays_vertical; ++i) {
    const double frac_v = static_cast<double>(i) / (model.rays_vertical - 1) - 0.5;
    const double alpha = pose.depression + model.fov * frac_v;
    for (int j = 0; j < model.rays_lateral; ++j) {
      const double frac_l = static_cast<double>(j) / (model.rays_lateral - 1) - 0.5;
      const double beta = model.lateral_fov * frac_l;
      Ray ray{origin,
              {std::cos(beta) * std::cos(alpha), std::sin(beta), -std::cos(beta) * std::sin(alpha)}};

      std::optional<double> t = hit_ground(ray, scene.ground_height);
      for (const auto& b : scene.boxes) {
        auto tb = hit_box(ray, b, scene.ground_height);
        if (tb && (!t || *tb < *t)) t = tb;
      }
      // Draw unconditionally so the noise stream does not depend on geometry.
      const double n = noise(rng);
      if (!t || *t > kSensorRange) continue;
      const double range = std::max(1e-6, *t + model.depth_noise_sigma * n);
      Point3 p{origin.x + range * ray.dir.x, origin.y + range * ray.dir.y,
               origin.z + range * ray.dir.z};
      if (p.x - capture_toe.x > model.max_range) continue;
      out.cloud.points.push_back(p);
    }
  }
  out.no_returns = out.cloud.points.empty();
  return out;
}

std::vector<Vec2> crop_and_project(const PointCloud& cloud, double corridor_width,
                                   double y_prosthesis) {
  std::vector<Vec2> out;
  const double half = 0.5 * corridor_width;
  for (const auto& p : cloud.points) {
    if (std::abs(p.y - y_prosthesis) <= half) out.push_back({p.x, p.z});
  }
  return out;
}

ElevationKeypoints kmeans_prune(std::span<const Vec2> points, int k, std::uint64_t seed,
                                int restarts) {
  std::vector<Vec2> centers;
  if (points.size() < static_cast<std::size_t>(std::max(k, 1))) {
    centers.assign(points.begin(), points.end());
  } else {
    KMeansOptions opts;
    opts.k = k;
    opts.restarts = restarts;
    centers = kmeans(points, opts, seed).centers;
  }
  std::sort(centers.begin(), centers.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.z > b.z);
  });
  // Equal x: keep the highest (sorted first).
  ElevationKeypoints out;
  for (const auto& c : centers) {
    if (out.keypoints.empty() || c.x > out.keypoints.back().x) out.keypoints.push_back(c);
  }
  return out;
}

ObstacleEstimate extract_estimate(const ElevationKeypoints& keypoints, Vec2 toe,
                                  double edge_threshold) {
  ObstacleEstimate est;
  est.z_m_prime = toe.z;
  std::vector<Vec2> ahead;
  for (const auto& kp : keypoints.keypoints) {
    if (kp.x > toe.x) ahead.push_back(kp);
  }
  if (ahead.empty()) return est;

  est.z_m_prime = ahead.front().z;
  for (const auto& kp : ahead) est.z_m_prime = std::max(est.z_m_prime, kp.z);

  double best_jump = 0.0;
  std::optional<std::size_t> before;
  for (std::size_t i = 0; i + 1 < ahead.size(); ++i) {
    const double jump = ahead[i + 1].z - ahead[i].z;
    if (jump > best_jump) {
      best_jump = jump;
      before = i;
    }
  }
  if (before && best_jump > edge_threshold) est.x_c_raw = ahead[*before].x - toe.x;
  return est;
}

ControlTarget control_modify(const ObstacleEstimate& est, double z_t, double delta,
                             double default_distance) {
  ControlTarget target;
  target.z_m = std::max(est.z_m_prime, z_t) + delta;
  const bool level = est.z_m_prime <= z_t || !est.x_c_raw;
  target.x_c = level ? default_distance : *est.x_c_raw;
  return target;
}

PerceptionResult perceive(const ObstacleScene& scene, const CameraPose& pose,
                          const CameraModel& model, Vec2 capture_toe,
                          const PerceptionParams& params, std::uint64_t seed) {
  PerceptionResult res;
  res.capture = capture(scene, pose, model, capture_toe, split_seed(seed, streams::kCapture));
  res.estimate.z_m_prime = capture_toe.z;
  if (!res.capture.no_returns) {
    res.profile = crop_and_project(res.capture.cloud, params.corridor_width);
    if (!res.profile.empty()) {
      res.keypoints = kmeans_prune(res.profile, params.clusters,
                                   split_seed(seed, streams::kClustering), params.kmeans_restarts);
      res.estimate = extract_estimate(res.keypoints, capture_toe, params.edge_threshold);
    }
  }
  res.target = control_modify(res.estimate, capture_toe.z, params.delta, params.default_distance);
  return res;
}

}  // namespace swingsim
