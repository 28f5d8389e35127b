#include "swingsim/kmeans.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace swingsim {
namespace {

double sq_dist(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x;
  const double dz = a.z - b.z;
  return dx * dx + dz * dz;
}

std::vector<Vec2> seed_plus_plus(std::span<const Vec2> points, int k, std::mt19937_64& rng) {
  std::vector<Vec2> centers;
  centers.reserve(static_cast<std::size_t>(k));
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  centers.push_back(points[pick(rng)]);

  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d2[i] = sq_dist(points[i], centers[0]);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t chosen = 0;
    if (total <= 0.0) {
      // All remaining mass is on existing centers (duplicate points).
      chosen = pick(rng);
    } else {
      double r = unit(rng) * total;
      for (std::size_t i = 0; i < d2.size(); ++i) {
        r -= d2[i];
        if (r <= 0.0) {
          chosen = i;
          break;
        }
        chosen = i;
      }
    }
    centers.push_back(points[chosen]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], sq_dist(points[i], centers.back()));
    }
  }
  return centers;
}

KMeansResult lloyd(std::span<const Vec2> points, std::vector<Vec2> centers, int max_iterations) {
  const std::size_t n = points.size();
  const std::size_t k = centers.size();
  KMeansResult res;
  res.assignment.assign(n, -1);

  std::vector<double> sx(k), sz(k);
  std::vector<int> count(k);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = sq_dist(points[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (res.assignment[i] != best) {
        res.assignment[i] = best;
        changed = true;
      }
    }
    res.iterations = it + 1;
    if (!changed && it > 0) break;

    std::fill(sx.begin(), sx.end(), 0.0);
    std::fill(sz.begin(), sz.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(res.assignment[i]);
      sx[c] += points[i].x;
      sz[c] += points[i].z;
      ++count[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) {
        centers[c] = {sx[c] / count[c], sz[c] / count[c]};
        continue;
      }
      // Empty cluster: move it onto the worst-served point.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = sq_dist(points[i], centers[static_cast<std::size_t>(res.assignment[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers[c] = points[far];
      res.assignment[far] = static_cast<int>(c);
    }
  }
  res.centers = std::move(centers);
  res.objective = kmeans_objective(points, res.centers, res.assignment);
  return res;
}

}  // namespace

double kmeans_objective(std::span<const Vec2> points, std::span<const Vec2> centers,
                        std::span<const int> assignment) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += sq_dist(points[i], centers[static_cast<std::size_t>(assignment[i])]);
  }
  return total;
}

KMeansResult kmeans(std::span<const Vec2> points, const KMeansOptions& opts, std::uint64_t seed) {
  if (opts.k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (points.size() < static_cast<std::size_t>(opts.k)) {
    throw std::invalid_argument("kmeans: fewer points than clusters");
  }
  std::mt19937_64 rng(seed);
  KMeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const int restarts = std::max(1, opts.restarts);
  for (int r = 0; r < restarts; ++r) {
    auto res = lloyd(points, seed_plus_plus(points, opts.k, rng), opts.max_iterations);
    if (res.objective < best.objective) best = std::move(res);
  }
  return best;
}

}  // namespace swingsim
