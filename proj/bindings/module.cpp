#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "heraldsim/analytic.hpp"
#include "heraldsim/basis.hpp"
#include "heraldsim/config.hpp"
#include "heraldsim/entanglement.hpp"
#include "heraldsim/evolve.hpp"
#include "heraldsim/hamiltonian.hpp"
#include "heraldsim/herald.hpp"
#include "heraldsim/scans.hpp"
#include "heraldsim/sweep.hpp"
#include "heraldsim/verify.hpp"

namespace py = pybind11;
using namespace heraldsim;

namespace {

// one pulse window end to end: prepare, evolve, post-select every TLS on |g>
HeraldResult herald_after_pulse(const SystemConfig& config, const IntegratorSpec& spec) {
  const auto basis = basis_for(config);
  const auto psi0 = initial_state(config, basis);
  const GeneratorTable table(config, basis);
  Vector out = propagate_vector(table, psi0.amplitudes(), 0.0, 1.0, spec);
  out /= out.norm(); // drift is bounded by the integrator's own monitor
  return project_all_ground(PureState(basis, std::move(out)));
}

const PureState& conditional_or_throw(const HeraldResult& result) {
  if (!result.conditional_state)
    throw std::invalid_argument("herald: the result is degenerate");
  return *result.conditional_state;
}

double w_state_fidelity(const HeraldResult& result) {
  const auto& basis = conditional_or_throw(result).basis();
  return conditional_fidelity(result, target_w_state(basis.arms, basis.sideband_cut));
}

double weighted_state_fidelity(const HeraldResult& result,
                               const std::vector<Complex>& weights) {
  const auto& basis = conditional_or_throw(result).basis();
  return conditional_fidelity(
      result, target_weighted_state(basis.arms, basis.sideband_cut, weights));
}

std::vector<double> conditional_pair_negativities(const HeraldResult& result) {
  const auto& conditional = conditional_or_throw(result);
  const int arms = conditional.basis().arms;
  std::vector<double> values;
  for (int a = 0; a < arms; ++a)
    for (int b = a + 1; b < arms; ++b)
      values.push_back(negativity(reduced_state(conditional, {a, b}), 0));
  return values;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "heralded multipartite entanglement transfer: simulator and closed forms";
  m.attr("__version__") = version_string;

  // ------------------------------------------------------------ closed forms
  py::class_<analytic::LocalAmplitudes>(m, "LocalAmplitudes",
                                        "single-arm amplitudes after a pulse")
      .def_readonly("c_minus", &analytic::LocalAmplitudes::c_minus)
      .def_readonly("c_plus", &analytic::LocalAmplitudes::c_plus)
      .def_readonly("s", &analytic::LocalAmplitudes::s);
  m.def("local_amplitudes", &analytic::local_amplitudes, py::arg("area"),
        py::arg("delta") = 0.0);
  m.def("p_heralding", &analytic::p_heralding, py::arg("arms"), py::arg("area"),
        py::arg("delta") = 0.0);
  m.def("g_optimal", &analytic::g_optimal, py::arg("arms"));
  m.def("p_max", &analytic::p_max, py::arg("arms"));
  m.def("p_max_asymptotic", &analytic::p_max_asymptotic, py::arg("arms"));
  m.def("pairwise_negativity_wn", &analytic::pairwise_negativity_wn, py::arg("arms"));
  m.def("pairwise_pt_eigenvalues", &analytic::pairwise_pt_eigenvalues, py::arg("arms"));
  m.def("alpha_weights", &analytic::alpha_weights, py::arg("areas"), py::arg("deltas"),
        py::arg("phases"));
  m.def("normalized_pathway_weights", &analytic::normalized_pathway_weights,
        py::arg("alpha"));
  m.def("fidelity_perturbed", &analytic::fidelity_perturbed, py::arg("alpha"),
        py::arg("target_phases") = std::vector<double>{});
  m.def("bloch_siegert_delta_eff", &analytic::bloch_siegert_delta_eff, py::arg("area"),
        py::arg("detuning"), py::arg("window"), py::arg("omega_plus"),
        py::arg("kappa") = 6.0);
  m.def("pair_negativity_weighted", &analytic::pair_negativity_weighted, py::arg("c_a"),
        py::arg("c_b"), py::arg("rest_weight"));

  // ---------------------------------------------------------- configuration
  py::enum_<Model>(m, "Model")
      .value("rwa", Model::rwa)
      .value("full", Model::full);
  py::enum_<StepMethod>(m, "StepMethod")
      .value("fixed_step", StepMethod::fixed_step)
      .value("adaptive", StepMethod::adaptive);
  py::class_<IntegratorSpec>(m, "IntegratorSpec")
      .def(py::init<>())
      .def_readwrite("method", &IntegratorSpec::method)
      .def_readwrite("tolerance", &IntegratorSpec::tolerance)
      .def_readwrite("max_step", &IntegratorSpec::max_step)
      .def_readwrite("min_steps", &IntegratorSpec::min_steps)
      .def_readwrite("steps_per_fast_period", &IntegratorSpec::steps_per_fast_period);
  py::class_<SystemConfig>(m, "SystemConfig")
      .def_readwrite("excitation_amplitudes", &SystemConfig::excitation_amplitudes)
      .def_readwrite("ground_amplitude", &SystemConfig::ground_amplitude)
      .def_readwrite("sideband_cut", &SystemConfig::sideband_cut)
      .def_property_readonly("arms", &SystemConfig::arm_count)
      .def("validate", &SystemConfig::validate);
  m.def("symmetric_rwa_config", &symmetric_rwa_config, py::arg("arms"), py::arg("area"),
        py::arg("delta") = 0.0, py::arg("sideband_cut") = 2);
  m.def("resonant_full_config", &resonant_full_config, py::arg("arms"), py::arg("area"),
        py::arg("omega"), py::arg("window"), py::arg("sideband_cut") = 3);

  // ------------------------------------------------------------- simulation
  py::class_<HeraldResult>(m, "HeraldResult")
      .def_readonly("probability", &HeraldResult::probability)
      .def_readonly("degenerate", &HeraldResult::degenerate)
      .def_readonly("branch_amplitudes", &HeraldResult::branch_amplitudes)
      .def_readonly("passive_amplitude", &HeraldResult::passive_amplitude);
  m.def("herald_after_pulse", &herald_after_pulse, py::arg("config"),
        py::arg("integrator") = IntegratorSpec{},
        "evolve the initial register across the unit window and post-select");
  m.def("w_state_fidelity", &w_state_fidelity, py::arg("result"));
  m.def("weighted_state_fidelity", &weighted_state_fidelity, py::arg("result"),
        py::arg("weights"));
  m.def("conditional_pair_negativities", &conditional_pair_negativities,
        py::arg("result"));

  // ------------------------------------------------------------------ scans
  py::class_<scans::ScanOptions>(m, "ScanOptions")
      .def(py::init<>())
      .def_readwrite("model", &scans::ScanOptions::model)
      .def_readwrite("sideband_cut", &scans::ScanOptions::sideband_cut)
      .def_readwrite("omega", &scans::ScanOptions::omega)
      .def_readwrite("integrator", &scans::ScanOptions::integrator);
  py::class_<SweepTable>(m, "SweepTable")
      .def_property_readonly("parameter_name", &SweepTable::parameter_name)
      .def_property_readonly("parameter_values", &SweepTable::parameter_values)
      .def_property_readonly("column_names", &SweepTable::column_names)
      .def("column", &SweepTable::column, py::arg("name"))
      .def("to_csv", [](const SweepTable& table) { return to_csv(table); })
      .def_property_readonly(
          "manifest_json", [](const SweepTable& table) { return table.manifest.dump(); });
  py::class_<scans::OptimizationResult>(m, "OptimizationResult")
      .def_readonly("area_optimal", &scans::OptimizationResult::area_optimal)
      .def_readonly("p_max", &scans::OptimizationResult::p_max);
  py::enum_<scans::MismatchKind>(m, "MismatchKind")
      .value("coupling", scans::MismatchKind::coupling)
      .value("detuning", scans::MismatchKind::detuning);

  m.def("linspace", &linspace, py::arg("lo"), py::arg("hi"), py::arg("points"));
  m.def("logspace", &logspace, py::arg("lo"), py::arg("hi"), py::arg("points"));
  m.def("sweep_pulse_area", &scans::sweep_pulse_area, py::arg("arms"),
        py::arg("area_grid"), py::arg("options") = scans::ScanOptions{});
  m.def("optimize_pulse_area", &scans::optimize_pulse_area, py::arg("arms"),
        py::arg("options") = scans::ScanOptions{});
  m.def("sweep_detuning", &scans::sweep_detuning, py::arg("arms"), py::arg("area"),
        py::arg("delta_grid"), py::arg("options") = scans::ScanOptions{});
  m.def("mismatch_scan", &scans::mismatch_scan, py::arg("kind"), py::arg("spread_grid"),
        py::arg("base_area"), py::arg("base_delta") = 0.0,
        py::arg("options") = scans::ScanOptions{});
  m.def("time_resolved_trace", &scans::time_resolved_trace, py::arg("samples") = 201,
        py::arg("total_area") = pi / 2, py::arg("options") = scans::ScanOptions{});
  m.def("weighted_resource_scan", &scans::weighted_resource_scan, py::arg("theta_grid"),
        py::arg("phi_grid"), py::arg("area") = 0.0,
        py::arg("options") = scans::ScanOptions{});
  m.def("beyond_rwa_comparison", &scans::beyond_rwa_comparison, py::arg("window_grid"),
        py::arg("area") = 0.6, py::arg("kappa") = 6.0,
        py::arg("integrator") =
            IntegratorSpec{StepMethod::fixed_step, 1e-6, 0.0, 512, 120});
  m.def(
      "gaussian_width_scan",
      [](const std::vector<double>& width_grid, const std::vector<double>& delta_grid,
         double peak_area, const scans::ScanOptions& options) {
        auto tables = scans::gaussian_width_scan(width_grid, delta_grid, peak_area, options);
        return py::make_tuple(std::move(tables.width_table),
                              std::move(tables.detuning_table));
      },
      py::arg("width_grid"), py::arg("delta_grid"), py::arg("peak_area") = 0.0,
      py::arg("options") = scans::ScanOptions{});
  m.def(
      "run_manifest",
      [](const std::string& manifest_json) {
        auto output = scans::run_from_manifest(nlohmann::json::parse(manifest_json));
        py::dict tables;
        for (auto& [name, table] : output.tables)
          tables[py::str(name)] = std::move(table);
        py::dict result;
        result["tables"] = std::move(tables);
        result["summary"] = output.summary;
        result["manifest_json"] = output.manifest.dump();
        return result;
      },
      py::arg("manifest_json"),
      "replay a recorded manifest; returns tables keyed by name ('' when single)");

  // ------------------------------------------------------------------ checks
  m.def(
      "run_checks",
      []() {
        std::vector<std::tuple<std::string, bool, std::string>> rows;
        for (auto& result : verify::run_all_checks())
          rows.emplace_back(std::move(result.name), result.passed,
                            std::move(result.detail));
        return rows;
      },
      "run the analytic-vs-numeric check suite; returns (name, passed, detail) rows");
}
