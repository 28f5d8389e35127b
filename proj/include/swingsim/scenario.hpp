#pragma once

#include <stdexcept>
#include <string>

#include "swingsim/sim_harness.hpp"

namespace swingsim {

/// Invalid configuration text. line() is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Scenario file: sections geometry, camera, planner, human, scene, trial.
/// Physical values use unit-suffixed keys (_m, _deg, _s, _m_per_s);
/// unknown keys are rejected.
struct Scenario {
  TrialConfig trial;
  std::string output_dir;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(const std::string& yaml_text);
Scenario load_scenario(const std::string& path);
std::string dump_scenario(const Scenario& scenario);

/// Campaign file: a `campaign` section (seed, jobs, profile, conditions)
/// plus optional geometry/camera/planner/trial sections and a human section
/// limited to noise_sigma_deg.
CampaignConfig parse_campaign(const std::string& yaml_text);
CampaignConfig load_campaign(const std::string& path);

}  // namespace swingsim
