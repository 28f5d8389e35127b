#include "swingsim/leg_kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace swingsim {

void LegGeometry::validate() const {
  if (!(thigh_length > 0.0) || !(shank_length > 0.0) || !(toe_offset > 0.0) ||
      !(heel_offset > 0.0)) {
    throw std::invalid_argument("leg geometry: all lengths must be strictly positive");
  }
}

FootPoints forward_points(const LegGeometry& geom, const HipPose& hip, double theta_k) {
  FootPoints p;
  const double shank = hip.theta_h - theta_k;
  const double cs = std::cos(shank);
  const double ss = std::sin(shank);

  p.knee = {hip.x_h + geom.thigh_length * std::sin(hip.theta_h),
            hip.z_h - geom.thigh_length * std::cos(hip.theta_h)};
  p.ankle = {p.knee.x + geom.shank_length * ss, p.knee.z - geom.shank_length * cs};
  p.toe = {p.ankle.x + geom.toe_offset * cs, p.ankle.z + geom.toe_offset * ss};
  p.heel = {p.ankle.x - geom.heel_offset * cs, p.ankle.z - geom.heel_offset * ss};
  p.shank_angle = shank;
  return p;
}

double toe_height_at(const LegGeometry& geom, const HipPose& hip, double theta_k) {
  return forward_points(geom, hip, theta_k).toe.z;
}

double toe_forward_at(const LegGeometry& geom, const HipPose& hip, double theta_k) {
  return forward_points(geom, hip, theta_k).toe.x;
}

double hip_height_for_toe_contact(const LegGeometry& geom, double theta_h, double theta_k,
                                  double ground) {
  HipPose at_zero{0.0, 0.0, theta_h, 0.0};
  return ground - toe_height_at(geom, at_zero, theta_k);
}

}  // namespace swingsim
