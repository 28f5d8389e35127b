#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "swingsim/kmeans.hpp"
#include "swingsim/perception.hpp"

using namespace swingsim;

namespace {

CameraPose pose_45() { return {Vec2{0.0, 1.0}, deg2rad(45.0)}; }

// Hit point of a sagittal ray against the ground and a box, by marching.
// Slow but independent of the library's slab test.
std::optional<Vec2> march(Vec2 o, double depression, double angle_off, const Box& box,
                          double max_len) {
  const double a = -(depression + angle_off);
  const double dx = std::cos(a), dz = std::sin(a);
  for (double s = 0.0; s < max_len; s += 1e-5) {
    const double x = o.x + s * dx, z = o.z + s * dz;
    if (z <= 0.0) return Vec2{x, 0.0};
    if (x >= box.front_x && x <= box.back_x() && z <= box.height) return Vec2{x, z};
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("flat ground returns lie on the ground plane") {
  CameraModel cam;
  cam.max_range = 5.0;
  const auto c = capture(ObstacleScene{}, pose_45(), cam, {0.0, 0.0}, 1);
  REQUIRE_FALSE(c.no_returns);
  REQUIRE(!c.cloud.points.empty());
  for (const auto& p : c.cloud.points) CHECK(std::abs(p.z) < 1e-9);
}

TEST_CASE("box returns: top face and ground on both sides") {
  CameraModel cam;
  cam.max_range = 5.0;
  ObstacleScene scene;
  scene.boxes.push_back(Box{0.5, 0.16, 0.10, 0.30});
  const auto c = capture(scene, pose_45(), cam, {0.0, 0.0}, 1);
  bool top = false, before = false, after = false;
  for (const auto& p : c.cloud.points) {
    if (std::abs(p.z - 0.16) < 1e-9 && p.x >= 0.5 && p.x <= 0.6) top = true;
    if (std::abs(p.z) < 1e-9 && p.x < 0.5) before = true;
    if (std::abs(p.z) < 1e-9 && p.x > 0.6) after = true;
  }
  CHECK(top);
  CHECK(before);
  CHECK(after);

  // Central-plane returns agree with a marched ray.
  for (const auto& p : c.cloud.points) {
    if (std::abs(p.y) > 1e-12) continue;
    const double ang = std::atan2(1.0 - p.z, p.x) - deg2rad(45.0);
    const auto ref = march({0.0, 1.0}, deg2rad(45.0), ang, scene.boxes[0], 5.0);
    REQUIRE(ref);
    CHECK(std::abs(ref->x - p.x) < 1e-3);
    CHECK(std::abs(ref->z - p.z) < 1e-3);
  }
}

TEST_CASE("capture is deterministic for a seed") {
  CameraModel cam;
  ObstacleScene scene;
  scene.boxes.push_back(Box{0.5, 0.16, 0.10, 0.30});
  const auto a = capture(scene, pose_45(), cam, {0.0, 0.0}, 42);
  const auto b = capture(scene, pose_45(), cam, {0.0, 0.0}, 42);
  CHECK(a.cloud.points == b.cloud.points);
  cam.depth_noise_sigma = 0.005;
  const auto n1 = capture(scene, pose_45(), cam, {0.0, 0.0}, 42);
  const auto n2 = capture(scene, pose_45(), cam, {0.0, 0.0}, 42);
  CHECK(n1.cloud.points == n2.cloud.points);
}

TEST_CASE("crop keeps the prosthesis corridor and drops y") {
  PointCloud cloud;
  cloud.points = {{0.3, 0.10, 0.0}, {0.4, 0.0, 0.16}, {0.5, -0.05, 0.02}};
  const auto prof = crop_and_project(cloud, 0.15, 0.0);
  REQUIRE(prof.size() == 2);
  CHECK(prof[0] == Vec2{0.4, 0.16});
  CHECK(prof[1] == Vec2{0.5, 0.02});
}

TEST_CASE("cropped box capture shows the step") {
  CameraModel cam;
  cam.max_range = 5.0;
  ObstacleScene scene;
  scene.boxes.push_back(Box{0.5, 0.16, 0.10, 0.30});
  const auto prof = crop_and_project(capture(scene, pose_45(), cam, {0.0, 0.0}, 1).cloud);
  double zmax = 0.0, zmin = 1.0;
  for (const auto& p : prof) {
    zmax = std::max(zmax, p.z);
    zmin = std::min(zmin, p.z);
  }
  CHECK(zmax == doctest::Approx(0.16));
  CHECK(zmin == doctest::Approx(0.0));
}

TEST_CASE("k-means on separated pairs") {
  const std::vector<Vec2> pts{{0, 0}, {0.01, 0}, {0.5, 0.16}, {0.51, 0.16}};
  auto r = kmeans(pts, {.k = 2}, 3);
  std::sort(r.centers.begin(), r.centers.end(), [](Vec2 a, Vec2 b) { return a.x < b.x; });
  CHECK(r.centers[0].x == doctest::Approx(0.005));
  CHECK(r.centers[0].z == doctest::Approx(0.0));
  CHECK(r.centers[1].x == doctest::Approx(0.505));
  CHECK(r.centers[1].z == doctest::Approx(0.16));
}

TEST_CASE("k-means with one cluster is the centroid") {
  const std::vector<Vec2> pts{{0, 0}, {1, 2}, {2, 1}, {5, 5}};
  const auto r = kmeans(pts, {.k = 1}, 3);
  CHECK(r.centers[0].x == doctest::Approx(2.0));
  CHECK(r.centers[0].z == doctest::Approx(2.0));
  CHECK(r.objective == doctest::Approx(kmeans_objective(pts, r.centers, r.assignment)));
}

TEST_CASE("k-means reaches the exhaustive optimum on small sets") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + trial % 9;  // 4..12
    const int k = 1 + trial % 3;
    std::vector<Vec2> pts;
    std::vector<oracle::Pt> ref;
    for (int i = 0; i < n; ++i) {
      pts.push_back({u(rng), u(rng)});
      ref.push_back({pts.back().x, pts.back().z});
    }
    const auto r = kmeans(pts, {.k = k, .max_iterations = 100, .restarts = 20}, trial);
    CHECK(std::abs(r.objective - oracle::kmeans_exhaustive(ref, k)) <= 1e-9);
  }
}

TEST_CASE("estimate from keypoints") {
  SUBCASE("largest jump, front at the pre-jump keypoint") {
    const ElevationKeypoints kp{{{0.2, 0}, {0.4, 0}, {0.5, 0.16}, {0.6, 0.16}}};
    const auto e = extract_estimate(kp, {0.0, 0.0});
    CHECK(e.z_m_prime == doctest::Approx(0.16));
    REQUIRE(e.x_c_raw);
    CHECK(*e.x_c_raw == doctest::Approx(0.4));
  }
  SUBCASE("flat") {
    const ElevationKeypoints kp{{{0.2, 0}, {0.4, 0}, {0.6, 0}}};
    const auto e = extract_estimate(kp, {0.0, 0.0});
    CHECK(e.z_m_prime == 0.0);
    CHECK_FALSE(e.x_c_raw);
  }
  SUBCASE("single keypoint") {
    const ElevationKeypoints kp{{{0.3, 0.05}}};
    const auto e = extract_estimate(kp, {0.0, 0.0});
    CHECK(e.z_m_prime == doctest::Approx(0.05));
    CHECK_FALSE(e.x_c_raw);
  }
}

TEST_CASE("control target modification") {
  SUBCASE("obstacle") {
    const auto t = control_modify({0.16, 0.4}, 0.02);
    CHECK(t.z_m == doctest::Approx(0.17));
    CHECK(t.x_c == doctest::Approx(0.4));
  }
  SUBCASE("level ground") {
    const auto t = control_modify({0.0, std::nullopt}, 0.02);
    CHECK(t.z_m == doctest::Approx(0.03));
    CHECK(t.x_c == doctest::Approx(0.20));
  }
  SUBCASE("tie counts as level") {
    const auto t = control_modify({0.02, 0.4}, 0.02);
    CHECK(t.z_m == doctest::Approx(0.03));
    CHECK(t.x_c == doctest::Approx(0.20));
  }
}

TEST_CASE("scene validation") {
  ObstacleScene s;
  s.boxes = {Box{0.4, 0.1, 0.2, 0.3}, Box{0.5, 0.1, 0.2, 0.3}};
  CHECK_THROWS(s.validate());
  s.boxes = {Box{0.4, -0.1, 0.2, 0.3}};
  CHECK_THROWS(s.validate());
  s.boxes = {Box{0.4, 0.1, 0.2, 0.3}};
  CHECK_NOTHROW(s.validate());
  CHECK(s.surface_height(0.5) == doctest::Approx(0.1));
  CHECK(s.surface_height(0.7) == 0.0);
}
