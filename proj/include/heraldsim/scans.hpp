#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heraldsim/config.hpp"
#include "heraldsim/evolve.hpp"
#include "heraldsim/sweep.hpp"

namespace heraldsim {
namespace scans {

// Shared scan knobs.  Full-model runs treat the pulse window as one unit of
// time with `omega` cycles of the carrier inside it (omega0 follows from the
// common detuning) and are desk-scaled to at most three arms.
struct ScanOptions {
  Model model = Model::rwa;
  int sideband_cut = 2; // raised to at least 3 for full-model runs
  double omega = 100.0; // carrier for full-model runs, units 1/window
  IntegratorSpec integrator{};
};

// Heralding probability against pulse area.
// columns: p_numeric, p_analytic, abs_err
SweepTable sweep_pulse_area(int arms, const std::vector<double>& area_grid,
                            const ScanOptions& options = {});

struct OptimizationResult {
  double area_optimal = 0.0;
  double p_max = 0.0;
};
// Deterministic maximization of the heralding probability over the pulse
// area: coarse grid at step <= 0.01, then golden-section refinement until the
// bracket is narrower than 1e-6.
OptimizationResult optimize_pulse_area(int arms, const ScanOptions& options = {});

// Heralding at fixed area against the normalized common detuning
// delta = Delta*T/2.  Degenerate grid points leave the conditional columns
// not-a-number.
// columns: p_numeric, p_analytic, abs_err, fidelity_conditional, witness
SweepTable sweep_detuning(int arms, double area, const std::vector<double>& delta_grid,
                          const ScanOptions& options = {});

enum class MismatchKind { coupling, detuning };
// Three-arm parameter-spread scan around (base_area, base_delta):
//   coupling: areas {g(1+eta), g, g(1-eta)} at the common detuning
//   detuning: deltas {d+eta, d, d-eta} at the common area
// columns: p_numeric, fidelity_numeric, fidelity_closed_form, fidelity_abs_err,
//          weight_1, weight_2, weight_3, witness
SweepTable mismatch_scan(MismatchKind kind, const std::vector<double>& spread_grid,
                         double base_area, double base_delta = 0.0,
                         const ScanOptions& options = {});

// Three symmetric resonant arms followed across the pulse window at uniform
// sample times; conditional columns are not-a-number where the heralding
// probability sits below the herald floor.
// columns: atomic_pair_negativity, electron_pair_negativity_unconditional,
//          electron_pair_negativity_conditional, conditional_constant,
//          yield_numeric, yield_analytic, p_numeric, fidelity_unconditional
SweepTable time_resolved_trace(int samples = 201, double total_area = pi / 2,
                               const ScanOptions& options = {});

// Transfer of a weighted single-excitation resource with amplitudes
// (sin t cos p, sin t sin p, cos t) over a flattened (theta, phi) grid; area
// <= 0 selects the three-arm resonant optimum.
// columns: theta, phi, atomic_pair_negativity, electron_pair_negativity,
//          pair_negativity_max_err, atomic_rest_entropy, electron_rest_entropy,
//          rest_entropy_max_err, p_numeric, fidelity_conditional
SweepTable weighted_resource_scan(const std::vector<double>& theta_grid,
                                  const std::vector<double>& phi_grid,
                                  double area = 0.0,
                                  const ScanOptions& options = {});

// Full-Hamiltonian heralding versus the rotating-frame closed forms for
// three resonant arms, scanned over the window length omega*T at fixed total
// area; the effective-detuning column applies the counter-rotating shift.
// columns: p_full, p_rwa_numeric, p_rwa_analytic, p_bloch_siegert,
//          delta_p_rwa, delta_p_bs, rwa_numeric_err, slope_rwa, slope_bs
SweepTable beyond_rwa_comparison(
    const std::vector<double>& window_grid, double area = 0.6, double kappa = 6.0,
    const IntegratorSpec& integrator = {StepMethod::fixed_step, 1e-6, 0.0, 512, 120});

struct GaussianScanTables {
  SweepTable width_table;    // parameter tau_over_t:
                             //   electron_pair_negativity_unconditional, accumulated_area
  SweepTable detuning_table; // parameter delta:
                             //   negativity_gaussian, negativity_square
};
// Fixed-peak Gaussian envelopes against the square pulse of the same peak for
// three arms: unconditional electron entanglement versus relative width at
// resonance, and versus common detuning at tau/T = 1.2.  peak_area <= 0
// selects the three-arm resonant optimum for Gmax*T.
GaussianScanTables gaussian_width_scan(const std::vector<double>& width_grid,
                                       const std::vector<double>& delta_grid,
                                       double peak_area = 0.0,
                                       const ScanOptions& options = {});

// ------------------------------------------------------------- manifests ---

// Every driver stamps its table's manifest with the subcommand name, scalar
// parameters, explicit grids, and scan options; feeding that manifest back
// reproduces the same tables byte-for-byte.
struct RunOutput {
  std::vector<std::pair<std::string, SweepTable>> tables; // name ("" if single)
  std::string summary;     // printed lines for grid-free runs
  nlohmann::json manifest;
};
// errors: std::invalid_argument on an unknown subcommand or missing fields
RunOutput run_from_manifest(const nlohmann::json& manifest);

nlohmann::json options_to_json(const ScanOptions& options);
ScanOptions options_from_json(const nlohmann::json& node);
nlohmann::json integrator_to_json(const IntegratorSpec& spec);
IntegratorSpec integrator_from_json(const nlohmann::json& node);

} // namespace scans
} // namespace heraldsim
