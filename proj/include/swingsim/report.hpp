#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "swingsim/perception.hpp"
#include "swingsim/sim_harness.hpp"

namespace swingsim {

// Writers for the on-disk formats. JSON is pretty-printed with two-space
// indent and a stable key order so identical inputs give identical bytes.
// CSV values use fixed notation with six decimals.

std::string trial_result_json(const TrialResult& result, const TrialConfig& config);
std::string campaign_summary_json(const CampaignSummary& summary);
/// Keypoints (with the estimate) and the control target of one capture.
std::string keypoints_json(const PerceptionResult& perception);
std::string control_target_json(const PerceptionResult& perception);
std::string presets_json();

void write_steplog_csv(std::ostream& os, const StepLog& log);
void write_profile_csv(std::ostream& os, std::span<const Vec2> profile);
void write_campaign_index_csv(std::ostream& os, const CampaignSummary& summary);

}  // namespace swingsim
