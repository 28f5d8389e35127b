#pragma once

#include <algorithm>

namespace swingsim {

/// Quintic minimum-jerk blend 10s^3 - 15s^4 + 6s^5 on s in [0, 1], clamped
/// outside.
inline double min_jerk_blend(double s) {
  s = std::clamp(s, 0.0, 1.0);
  const double s3 = s * s * s;
  return s3 * (10.0 + s * (-15.0 + 6.0 * s));
}

/// d/ds of min_jerk_blend (zero outside [0, 1]).
inline double min_jerk_blend_rate(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double s2 = s * s;
  return 30.0 * s2 * (1.0 - s) * (1.0 - s);
}

}  // namespace swingsim
