#include <string>

#include "doctest.h"
#include "swingsim/scenario.hpp"

using namespace swingsim;

TEST_CASE("dump and parse round-trip") {
  Scenario sc;
  sc.trial = default_trial(GaitIntent::StepOver);
  sc.trial.scene.boxes.push_back(Box{0.45, 0.08, 0.1, 0.3});
  sc.trial.planner.k_max = 2.5;
  sc.trial.seed = 99;
  const Scenario back = parse_scenario(dump_scenario(sc));
  CHECK(back.trial == sc.trial);
  CHECK(dump_scenario(back) == dump_scenario(sc));
}

TEST_CASE("intent picks the preset unless overridden") {
  const Scenario sc = parse_scenario("human:\n  intent: step_on\n");
  CHECK(sc.trial.intent == GaitIntent::StepOn);
  CHECK(sc.trial.human.swing_duration == doctest::Approx(0.64));
  const Scenario sc2 = parse_scenario("human:\n  intent: step_on\n  swing_duration_s: 0.7\n");
  CHECK(sc2.trial.human.swing_duration == doctest::Approx(0.7));
}

TEST_CASE("unknown or unsuffixed keys are rejected with their line") {
  try {
    parse_scenario("planner:\n  kmax: 3\ngeometry:\n  thigh: 0.44\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("thigh") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("bogus:\n  a: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("geometry:\n  thigh_m: abc\n"), ConfigError);
}

TEST_CASE("physically invalid values are config errors") {
  CHECK_THROWS_AS(parse_scenario("geometry:\n  thigh_m: -0.44\n"), ConfigError);
}

TEST_CASE("campaign file") {
  const CampaignConfig c = parse_campaign(
      "campaign:\n"
      "  seed: 12\n"
      "  conditions:\n"
      "    - name: over\n"
      "      intent: step_over\n"
      "      count: 4\n"
      "      heights_m: [0.04, 0.08]\n");
  CHECK(c.seed == 12);
  REQUIRE(c.conditions.size() == 1);
  CHECK(c.conditions[0].count == 4);
  CHECK(c.conditions[0].heights.size() == 2);
  CHECK_THROWS_AS(parse_campaign("campaign:\n  sed: 1\n"), ConfigError);
}
