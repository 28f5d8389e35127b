#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swingsim/leg_kinematics.hpp"

namespace swingsim {

struct KMeansOptions {
  int k = 30;
  int max_iterations = 100;
  /// Independent k-means++ restarts; the lowest objective wins.
  int restarts = 4;
};

struct KMeansResult {
  std::vector<Vec2> centers;
  std::vector<int> assignment;  ///< cluster index per input point
  double objective = 0.0;       ///< sum of squared distances to assigned centers
  int iterations = 0;           ///< Lloyd iterations of the winning restart
};

/// Lloyd's algorithm with k-means++ seeding. Stops at an assignment fixpoint
/// or after max_iterations. Requires points.size() >= k >= 1. Clusters that
/// go empty are reseeded at the point farthest from its center.
KMeansResult kmeans(std::span<const Vec2> points, const KMeansOptions& opts, std::uint64_t seed);

double kmeans_objective(std::span<const Vec2> points, std::span<const Vec2> centers,
                        std::span<const int> assignment);

}  // namespace swingsim
