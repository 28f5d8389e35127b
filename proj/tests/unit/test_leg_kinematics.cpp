#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "swingsim/leg_kinematics.hpp"

using namespace swingsim;

TEST_CASE("straight vertical leg") {
  const LegGeometry g;
  const FootPoints f = forward_points(g, {0.0, 1.0, 0.0, 0.0}, 0.0);
  CHECK(f.knee.x == doctest::Approx(0.0));
  CHECK(f.knee.z == doctest::Approx(0.56));
  CHECK(f.ankle.x == doctest::Approx(0.0));
  CHECK(f.ankle.z == doctest::Approx(0.13));
  CHECK(f.toe.x == doctest::Approx(0.15));
  CHECK(f.toe.z == doctest::Approx(0.13));
  CHECK(f.heel.x == doctest::Approx(-0.07));
  CHECK(f.heel.z == doctest::Approx(0.13));
}

TEST_CASE("flexed hip and knee against hand computation") {
  const LegGeometry g;
  const FootPoints f = forward_points(g, {0.0, 1.0, deg2rad(30.0), 0.0}, deg2rad(60.0));
  // knee (0.22, 0.618949), shank at -30 deg
  CHECK(std::abs(f.ankle.x - 0.0050) < 1e-4);
  CHECK(std::abs(f.ankle.z - 0.2466) < 1e-4);
  CHECK(std::abs(f.toe.x - 0.1349) < 1e-4);
  CHECK(std::abs(f.toe.z - 0.1716) < 1e-4);
  CHECK(f.shank_angle == doctest::Approx(deg2rad(-30.0)));
}

TEST_CASE("shank angle equals thigh minus knee") {
  const LegGeometry g;
  const double th0 = deg2rad(5.0);
  CHECK(forward_points(g, {0.0, 1.0, th0, 0.0}, 0.0).shank_angle == doctest::Approx(th0));
}

TEST_CASE("matches the reference chain over random poses") {
  const LegGeometry g;
  const oracle::Leg o;
  for (int i = 0; i < 200; ++i) {
    const double th = oracle::deg(-30.0 + 0.55 * i);
    const double tk = oracle::deg(0.4 * i);
    const HipPose hip{0.1 * (i % 7), 0.9 + 0.001 * i, th, 0.0};
    const FootPoints f = forward_points(g, hip, tk);
    const auto toe = oracle::toe_at(o, hip.x_h, hip.z_h, th, tk);
    const auto an = oracle::ankle_at(o, hip.x_h, hip.z_h, th, tk);
    CHECK(f.toe.x == doctest::Approx(toe.x).epsilon(1e-12));
    CHECK(f.toe.z == doctest::Approx(toe.z).epsilon(1e-12));
    CHECK(f.ankle.x == doctest::Approx(an.x).epsilon(1e-12));
    // Heel and toe straddle the ankle on the foot line.
    CHECK((f.heel.x + f.toe.x * g.heel_offset / g.toe_offset) ==
          doctest::Approx(f.ankle.x * (1.0 + g.heel_offset / g.toe_offset)));
    CHECK(toe_height_at(g, hip, tk) == f.toe.z);
    CHECK(toe_forward_at(g, hip, tk) == f.toe.x);
  }
}

TEST_CASE("hip height for toe contact puts the toe on the surface") {
  const LegGeometry g;
  const double h = hip_height_for_toe_contact(g, deg2rad(-15.0), deg2rad(20.0), 0.05);
  CHECK(toe_height_at(g, {0.0, h, deg2rad(-15.0), 0.0}, deg2rad(20.0)) ==
        doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("geometry validation") {
  LegGeometry g;
  CHECK_NOTHROW(g.validate());
  g.shank_length = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
