#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swingsim/leg_kinematics.hpp"
#include "swingsim/report.hpp"
#include "swingsim/scenario.hpp"
#include "swingsim/sim_harness.hpp"
#include "swingsim/swing_planner.hpp"

namespace py = pybind11;
using namespace swingsim;

namespace {

// Step log as a dict of equal-length float arrays, one per column.
py::dict steplog_arrays(const StepLog& log) {
  const auto n = static_cast<py::ssize_t>(log.rows.size());
  py::dict out;
  auto column = [&](const char* name, auto get) {
    py::array_t<double> a(n);
    auto w = a.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < n; ++i) w(i) = get(log.rows[static_cast<std::size_t>(i)]);
    out[name] = a;
  };
  column("t", [](const StepLogRow& r) { return r.t; });
  column("phase", [](const StepLogRow& r) { return static_cast<double>(r.phase); });
  column("theta_h", [](const StepLogRow& r) { return r.theta_h; });
  column("theta_h_dot", [](const StepLogRow& r) { return r.theta_h_dot; });
  column("theta_k", [](const StepLogRow& r) { return r.theta_k; });
  column("theta_k_dot_cmd", [](const StepLogRow& r) { return r.theta_k_dot_cmd; });
  column("x_h", [](const StepLogRow& r) { return r.x_h; });
  column("z_h", [](const StepLogRow& r) { return r.z_h; });
  column("x_t", [](const StepLogRow& r) { return r.x_t; });
  column("z_t", [](const StepLogRow& r) { return r.z_t; });
  return out;
}

py::object loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Swing controller simulator for a powered knee prosthesis";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<LegGeometry>(m, "LegGeometry")
      .def(py::init<>())
      .def(py::init([](double thigh, double shank, double toe, double heel) {
             LegGeometry g{thigh, shank, toe, heel};
             g.validate();
             return g;
           }),
           py::arg("thigh"), py::arg("shank"), py::arg("toe"), py::arg("heel"))
      .def_readwrite("thigh_length", &LegGeometry::thigh_length)
      .def_readwrite("shank_length", &LegGeometry::shank_length)
      .def_readwrite("toe_offset", &LegGeometry::toe_offset)
      .def_readwrite("heel_offset", &LegGeometry::heel_offset);

  m.def(
      "forward_points",
      [](const LegGeometry& g, double x_h, double z_h, double theta_h, double theta_k) {
        const FootPoints f = forward_points(g, {x_h, z_h, theta_h, 0.0}, theta_k);
        auto pt = [](Vec2 p) { return py::make_tuple(p.x, p.z); };
        py::dict d;
        d["knee"] = pt(f.knee);
        d["ankle"] = pt(f.ankle);
        d["toe"] = pt(f.toe);
        d["heel"] = pt(f.heel);
        d["shank_angle"] = f.shank_angle;
        return d;
      },
      py::arg("geometry"), py::arg("x_h"), py::arg("z_h"), py::arg("theta_h"), py::arg("theta_k"),
      "Knee, ankle, toe and heel positions (radians in, metres out).");

  m.def(
      "mz_boundary_knee",
      [](double z_h, double theta_h, double z_m, double knee_limit) {
        const RegionSnapshot r{HipPose{0.0, z_h, theta_h, 0.0}, z_m, 0.0};
        return mz_boundary_knee(LegGeometry{}, r, theta_h, knee_limit);
      },
      py::arg("z_h"), py::arg("theta_h"), py::arg("z_m"), py::arg("knee_limit") = deg2rad(85.0),
      "Upper edge of the toe-below-obstacle region for the default leg, or None.");

  m.def(
      "run_scenario",
      [](const std::string& yaml_text, std::optional<std::uint64_t> seed) {
        Scenario sc = parse_scenario(yaml_text);
        if (seed) sc.trial.seed = *seed;
        TrialRun run;
        {
          py::gil_scoped_release release;
          run = run_swing(sc.trial);
        }
        py::dict out = loads(trial_result_json(run.result, sc.trial));
        out["steplog"] = steplog_arrays(run.log);
        return out;
      },
      py::arg("yaml_text") = "", py::arg("seed") = py::none(),
      "Simulate one swing from scenario YAML text. Returns the trial result "
      "with the step log as arrays.");

  m.def(
      "run_campaign",
      [](std::uint64_t seed, int jobs) {
        CampaignConfig cfg = protocol_campaign(seed);
        cfg.jobs = jobs;
        std::string text;
        {
          py::gil_scoped_release release;
          text = campaign_summary_json(run_campaign(cfg));
        }
        return loads(text);
      },
      py::arg("seed") = 2024, py::arg("jobs") = 1,
      "Run the full step-over/step-on/level protocol and return the summary.");

  m.def("presets", []() { return loads(presets_json()); }, "Human-model presets per intent.");
  m.def(
      "default_scenario",
      [](const std::string& intent) {
        const auto i = parse_intent(intent);
        if (!i) throw py::value_error("unknown intent '" + intent + "'");
        Scenario sc;
        sc.trial = default_trial(*i);
        return dump_scenario(sc);
      },
      py::arg("intent") = "level", "Default scenario YAML for an intent.");
}
