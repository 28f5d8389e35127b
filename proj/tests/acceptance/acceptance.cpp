// End-to-end acceptance checks. One PASS/FAIL line per criterion; nonzero exit
// if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "swingsim/kmeans.hpp"
#include "swingsim/report.hpp"
#include "swingsim/sim_harness.hpp"
#include "swingsim/swing_planner.hpp"

using namespace swingsim;

namespace {

// Tolerances.
constexpr double kCampaignSeconds = 60.0;
constexpr double kPeakGapDeg = 10.0;
constexpr double kObstaclePeakLo = 70.0, kObstaclePeakHi = 85.0;
constexpr double kLevelPeakLo = 50.0, kLevelPeakHi = 70.0;
constexpr double kSwingTol = 0.15;
constexpr double kZmTol = 0.005, kXcTol = 0.02;
constexpr double kBoundaryTolDeg = 0.1;
constexpr double kSlopeTol = 0.01;
constexpr double kKMeansTol = 1e-9;
constexpr double kBlendExample = 1.4482, kBlendExampleTol = 5e-5;
const double kMirrorTol = deg2rad(0.5) + 1e-3;

int failures = 0;

void report(bool ok, const char* id, const std::string& what) {
  std::printf("%s %s %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

void campaign_criteria() {
  const CampaignConfig cfg = protocol_campaign();
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignSummary s = run_campaign(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int over = 0, on = 0, over_ok = 0, on_ok = 0;
  std::vector<double> peak_obstacle, peak_level, sw_over, sw_on, sw_level;
  int order_bad = 0, obstacle_ok = 0;
  double lock = 0.0;
  for (const auto& rec : s.records) {
    const auto& r = rec.result;
    switch (rec.intent) {
      case GaitIntent::StepOver:
        ++over;
        over_ok += r.success;
        sw_over.push_back(r.swing_duration);
        break;
      case GaitIntent::StepOn:
        ++on;
        on_ok += r.success;
        sw_on.push_back(r.swing_duration);
        break;
      case GaitIntent::Level:
        sw_level.push_back(r.swing_duration);
        break;
    }
    (rec.height ? peak_obstacle : peak_level).push_back(rad2deg(r.peak_knee_flexion));
    if (rec.height && r.success) {
      ++obstacle_ok;
      if (!(r.t_exit_mz && (!r.t_exit_mx || *r.t_exit_mz < *r.t_exit_mx))) ++order_bad;
    }
    if (r.success) lock = std::max(lock, r.mirror_lock_error.value_or(0.0));
  }

  report(over >= 150 && on >= 30 && over_ok == over && on_ok == on && s.successes == s.trials &&
             secs < kCampaignSeconds,
         "C1", fmt("campaign: step-over %d/%d, step-on %d/%d, all %d/%d, %.1f s", over_ok, over,
                   on_ok, on, s.successes, s.trials, secs));

  const double po = mean_of(peak_obstacle), pl = mean_of(peak_level);
  report(po - pl >= kPeakGapDeg && po >= kObstaclePeakLo && po <= kObstaclePeakHi &&
             pl >= kLevelPeakLo && pl <= kLevelPeakHi,
         "C3", fmt("peak knee flexion: obstacle mean %.2f deg, level mean %.2f deg, gap %.2f", po,
                   pl, po - pl));

  const double mo = mean_of(sw_over), mn = mean_of(sw_on), ml = mean_of(sw_level);
  report(mo > mn && mn >= ml && std::abs(mo - 0.81) <= kSwingTol &&
             std::abs(mn - 0.64) <= kSwingTol && std::abs(ml - 0.61) <= kSwingTol,
         "C4", fmt("swing time: step-over %.3f s, step-on %.3f s, level %.3f s", mo, mn, ml));

  report(order_bad == 0 && obstacle_ok > 0, "C6e",
         fmt("exit order M_z before M_x: %d violations in %d successful obstacle trials",
             order_bad, obstacle_ok));
  report(lock <= kMirrorTol, "C6f",
         fmt("mirror lock: max |shank - theta_0| %.5f rad (limit %.5f)", lock, kMirrorTol));

  // Same seed, different thread count.
  CampaignConfig again = cfg;
  again.jobs = 4;
  const std::string a = campaign_summary_json(s);
  const std::string b = campaign_summary_json(run_campaign(again));
  report(a == b, "C7", fmt("determinism: summary JSON %zu bytes, identical=%d", a.size(), a == b));
}

// Strike time and whether it falls after the knee has started extending.
struct Strike {
  Outcome outcome;
  double t;
  double t_peak;
};

Strike far_trial(double height, double distance, std::optional<double> max_range) {
  TrialConfig cfg = default_trial(GaitIntent::StepOver);
  cfg.scene.boxes.push_back(Box{distance, height, 0.10, 0.30});
  if (max_range) cfg.camera.max_range = *max_range;
  const TrialRun run = run_swing(cfg);
  double t_peak = 0.0, peak = -1.0;
  for (const auto& row : run.log.rows) {
    if (row.theta_k > peak) {
      peak = row.theta_k;
      t_peak = row.t;
    }
  }
  return {run.result.outcome, run.result.swing_duration, t_peak};
}

void lookahead_criterion() {
  // The camera sees half a metre; the box sits just past that.
  constexpr double kShortRange = 0.5;
  bool ok = true;
  std::string detail;
  for (double h : {0.08, 0.16}) {
    for (double d : {0.6, 0.7}) {
      const Strike blind = far_trial(h, d, kShortRange);
      const Strike seen = far_trial(h, d, std::nullopt);
      const bool late = blind.t > blind.t_peak;
      const bool pass = blind.outcome == Outcome::Trip && late &&
                        seen.outcome == Outcome::SuccessStepOver;
      ok = ok && pass;
      detail += fmt(" [h=%.2f d=%.2f: %s at %.3f s (peak %.3f s), in view %s]", h, d,
                    std::string(outcome_name(blind.outcome)).c_str(), blind.t, blind.t_peak,
                    std::string(outcome_name(seen.outcome)).c_str());
    }
  }
  report(ok, "C2", "obstacle beyond look-ahead trips late, in view succeeds:" + detail);
}

void perception_criterion() {
  double zerr = 0.0, xerr = 0.0;
  for (double h : {0.04, 0.08, 0.16}) {
    for (double d : {0.2, 0.4, 0.6}) {
      TrialConfig cfg = default_trial(GaitIntent::StepOver);
      cfg.scene.boxes.push_back(Box{d, h, 0.10, 0.30});
      const ControlTarget t = run_swing(cfg).perception.target;
      zerr = std::max(zerr, std::abs(t.z_m - (h + cfg.planner.delta)));
      xerr = std::max(xerr, std::abs(t.x_c - d));
    }
  }
  report(zerr <= kZmTol && xerr <= kXcTol, "C5",
         fmt("noiseless perception: max |z_m - (h+delta)| %.5f m, max |x_c - d| %.5f m", zerr,
             xerr));
}

void boundary_oracles() {
  const LegGeometry geom;
  const oracle::Leg leg;
  const double limit = deg2rad(85.0);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> th(deg2rad(-15.0), deg2rad(75.0));
  std::uniform_real_distribution<double> zm(0.01, 0.35);
  std::uniform_real_distribution<double> zh(0.80, 1.00);

  double worst = 0.0;
  int disagree = 0;
  for (int i = 0; i < 1000; ++i) {
    const double t = th(rng), z = zm(rng), h = zh(rng);
    const RegionSnapshot r{HipPose{0.0, h, t, 0.0}, z, 0.3};
    const auto b = mz_boundary_knee(geom, r, t, limit);
    const auto g = oracle::boundary_grid(leg, 0.0, h, t, z, limit, oracle::deg(0.01));
    if (b.has_value() != g.has_value()) {
      ++disagree;
      continue;
    }
    if (b) worst = std::max(worst, std::abs(*b - *g));
  }
  report(disagree == 0 && rad2deg(worst) <= kBoundaryTolDeg, "C6a",
         fmt("M_z boundary vs 0.01 deg grid, 1000 states: max error %.4f deg, %d reachability "
             "mismatches",
             rad2deg(worst), disagree));

  const double stencil = oracle::deg(0.25);
  double slope_err = 0.0;
  int n = 0;
  for (int i = 0; n < 500 && i < 5000; ++i) {
    const double t = th(rng), z = zm(rng), h = zh(rng);
    const auto lo = oracle::boundary_scan(leg, 0.0, h, t - stencil, z, limit, oracle::deg(0.01));
    const auto hi = oracle::boundary_scan(leg, 0.0, h, t + stencil, z, limit, oracle::deg(0.01));
    if (!lo || !hi || *lo == 0.0 || *hi == 0.0 || *lo >= limit || *hi >= limit) continue;
    const auto k2 = boundary_slope(geom, RegionSnapshot{HipPose{0.0, h, t, 0.0}, z, 0.3}, t, limit);
    if (!k2) {
      slope_err = INFINITY;
      break;
    }
    slope_err = std::max(slope_err, std::abs(*k2 - (*hi - *lo) / (2.0 * stencil)));
    ++n;
  }
  report(slope_err <= kSlopeTol && n >= 500, "C6b",
         fmt("k_2 vs grid secant, %d states: max error %.5f", n, slope_err));
}

void kmeans_oracle() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int sets = 0;
  for (int n = 3; n <= 12; ++n) {
    for (int k = 1; k <= 3 && k <= n; ++k) {
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<Vec2> pts;
        std::vector<oracle::Pt> ref;
        for (int i = 0; i < n; ++i) {
          pts.push_back({u(rng), 0.2 * u(rng)});
          ref.push_back({pts.back().x, pts.back().z});
        }
        const auto r = kmeans(pts, {.k = k, .max_iterations = 200, .restarts = 20}, rng());
        worst = std::max(worst, std::abs(r.objective - oracle::kmeans_exhaustive(ref, k)));
        ++sets;
      }
    }
  }
  report(worst <= kKMeansTol, "C6c",
         fmt("k-means vs exhaustive partition, %d sets: max objective gap %.3g", sets, worst));
}

void blend_oracle() {
  PlannerParams pp;
  PhaseState st;
  st.theta_k_ddot_ini = 3.0;
  st.ticks_in_phase = 0;
  const double at0 = blend_command(2.0, 0.5, st, pp);
  st.ticks_in_phase = 1000;
  const double atinf = blend_command(2.0, 0.5, st, pp);
  st.ticks_in_phase = 20;
  st.theta_k_ddot_ini = 0.0;
  const double at20 = blend_command(2.0, 0.5, st, pp);
  const bool ok = std::abs(at0 - (0.5 + 3.0 * pp.dt)) < 1e-12 &&
                  std::abs(atinf - 2.0) <= 1e-5 * 2.0 &&
                  std::abs(at20 - kBlendExample) <= kBlendExampleTol;
  report(ok, "C6d", fmt("blending: n=0 %.6f, n=1000 %.6f, n=20 %.5f", at0, atinf, at20));
}

}  // namespace

int main() {
  campaign_criteria();
  lookahead_criterion();
  perception_criterion();
  boundary_oracles();
  kmeans_oracle();
  blend_oracle();
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
