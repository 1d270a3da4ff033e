#include "heraldsim/scans.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>

#include "heraldsim/analytic.hpp"
#include "heraldsim/entanglement.hpp"
#include "heraldsim/hamiltonian.hpp"
#include "heraldsim/herald.hpp"

namespace heraldsim {
namespace scans {

namespace {

constexpr double nan_cell = std::numeric_limits<double>::quiet_NaN();

void require_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty())
    throw std::invalid_argument(std::string("scans: empty ") + what + " grid");
}

void require_ascending(const std::vector<double>& grid, const char* what) {
  require_grid(grid, what);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument(std::string("scans: ") + what +
                                  " grid must be strictly ascending");
}

// symmetric N-arm setup at normalized common detuning delta = Delta*T/2, for
// either model; the full model runs `omega` carrier cycles per unit window
SystemConfig symmetric_config(int arms, double area, double delta,
                              const ScanOptions& options) {
  if (options.model == Model::rwa)
    return symmetric_rwa_config(arms, area, delta, options.sideband_cut);
  if (arms > 3)
    throw std::invalid_argument("scans: full-model sweeps are desk-scaled to three arms");
  SystemConfig config;
  config.model = Model::full;
  config.sideband_cut = std::max(options.sideband_cut, 3);
  config.omega = options.omega;
  config.omega0 = options.omega - 2.0 * delta;
  config.arms.assign(static_cast<std::size_t>(arms),
                     ArmParams{square_pulse(area, 1.0), 2.0 * delta, 0.0});
  config.validate();
  return config;
}

double window_of(const SystemConfig& config) {
  return config.arms.front().envelope.window;
}

// evolve across the window and post-select every TLS onto the ground state;
// exchange-only runs integrate inside the reachable invariant sector
HeraldResult run_herald(const SystemConfig& config, const IntegratorSpec& spec) {
  const auto basis = basis_for(config);
  const auto psi0 = initial_state(config, basis);
  if (config.model == Model::rwa) {
    const auto sector = rwa_reachable_subspace(basis, psi0);
    const GeneratorTable table(config, sector);
    const Vector out = propagate_vector(table, sector.project(psi0.amplitudes()), 0.0,
                                        window_of(config), spec);
    return project_all_ground(sector, out);
  }
  const GeneratorTable table(config, basis);
  Vector out = propagate_vector(table, psi0.amplitudes(), 0.0, window_of(config), spec);
  out /= out.norm(); // fixed-step drift is monitored upstream; reproject
  return project_all_ground(PureState(basis, std::move(out)));
}

// same run, returning the final full-register state
PureState run_final_state(const SystemConfig& config, const IntegratorSpec& spec) {
  const auto basis = basis_for(config);
  const auto psi0 = initial_state(config, basis);
  Vector out;
  if (config.model == Model::rwa) {
    const auto sector = rwa_reachable_subspace(basis, psi0);
    const GeneratorTable table(config, sector);
    out = sector.embed(propagate_vector(table, sector.project(psi0.amplitudes()), 0.0,
                                        window_of(config), spec));
  } else {
    const GeneratorTable table(config, basis);
    out = propagate_vector(table, psi0.amplitudes(), 0.0, window_of(config), spec);
  }
  out /= out.norm();
  return PureState(basis, std::move(out));
}

std::vector<double> pair_negativities(const PureState& state, int first_subsystem) {
  const int n = state.basis().arms;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      values.push_back(
          negativity(reduced_state(state, {first_subsystem + a, first_subsystem + b}), 0));
  return values;
}

std::vector<double> rest_entropies(const PureState& state, int first_subsystem) {
  const int n = state.basis().arms;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    values.push_back(von_neumann_entropy(reduced_state(state, {first_subsystem + j})));
  return values;
}

double mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double conditional_witness(const HeraldResult& herald) {
  const auto encoded = effective_qubit_state(*herald.conditional_state);
  return witness_expectation(encoded.state);
}

nlohmann::json make_manifest(const std::string& subcommand, nlohmann::json parameters,
                             nlohmann::json grids, const ScanOptions& options) {
  nlohmann::json manifest;
  manifest["tool"] = "heraldsim";
  manifest["version"] = version_string;
  manifest["subcommand"] = subcommand;
  manifest["parameters"] = std::move(parameters);
  manifest["grids"] = std::move(grids);
  manifest["options"] = options_to_json(options);
  return manifest;
}

// wraps any per-point failure with the grid point that produced it; precondition
// violations keep their type so callers can distinguish bad arguments from bad runs
template <typename Fn>
void at_point(const char* driver, const char* label, double value, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& error) {
    throw std::runtime_error(std::string(driver) + ": grid point " + label + " = " +
                             format_cell(value) + ": " + error.what());
  }
}

struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double standard_error = std::numeric_limits<double>::quiet_NaN();
  int points = 0;
};

// least squares of log10(y) on log10(x) over x >= x_min, ignoring dead residuals
SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y,
                       double x_min) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < x_min || !(y[i] > 1e-14)) continue;
    lx.push_back(std::log10(x[i]));
    ly.push_back(std::log10(y[i]));
  }
  SlopeFit fit;
  fit.points = static_cast<int>(lx.size());
  if (fit.points < 3) return fit;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= fit.points;
  my /= fit.points;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  double ssr = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    const double r = ly[i] - my - fit.slope * (lx[i] - mx);
    ssr += r * r;
  }
  fit.standard_error = std::sqrt(ssr / (fit.points - 2) / sxx);
  return fit;
}

} // namespace

SweepTable sweep_pulse_area(int arms, const std::vector<double>& area_grid,
                            const ScanOptions& options) {
  if (arms < 1) throw std::invalid_argument("scans: arm count must be positive");
  require_ascending(area_grid, "area");
  if (!(area_grid.front() > 0.0))
    throw std::invalid_argument("scans: pulse areas must be positive");
  if (area_grid.back() > pi / 2 + 1e-12)
    throw std::invalid_argument("scans: pulse areas beyond pi/2 are outside the sweep range");

  const auto count = static_cast<std::int64_t>(area_grid.size());
  std::vector<double> p_numeric(count), p_analytic(count), abs_err(count);
  parallel_for_index(count, [&](std::int64_t i) {
    const double g = area_grid[static_cast<std::size_t>(i)];
    at_point("sweep-area", "g", g, [&] {
      p_numeric[i] = run_herald(symmetric_config(arms, g, 0.0, options),
                                options.integrator).probability;
    });
    p_analytic[i] = analytic::p_heralding(arms, g);
    abs_err[i] = std::abs(p_numeric[i] - p_analytic[i]);
  });

  SweepTable table("g", area_grid);
  table.manifest = make_manifest("sweep-area", {{"arms", arms}}, {{"g", area_grid}}, options);
  table.manifest["max_abs_err"] = *std::max_element(abs_err.begin(), abs_err.end());
  table.add_column("p_numeric", std::move(p_numeric));
  table.add_column("p_analytic", std::move(p_analytic));
  table.add_column("abs_err", std::move(abs_err));
  return table;
}

OptimizationResult optimize_pulse_area(int arms, const ScanOptions& options) {
  if (arms < 1) throw std::invalid_argument("scans: arm count must be positive");
  const int coarse_points = static_cast<int>(std::ceil(pi / 2 / 0.01)); // step < 0.01
  std::vector<double> areas(coarse_points), probabilities(coarse_points);
  for (int i = 0; i < coarse_points; ++i)
    areas[i] = (pi / 2) * static_cast<double>(i + 1) / coarse_points;

  std::function<double(double)> p_of_area;
  // kept alive for the exchange-only fast path below
  struct SectorRun {
    SystemConfig config;
    Subspace sector;
    GeneratorTable table;
    Vector start;
  };
  std::shared_ptr<SectorRun> run;

  if (options.model == Model::rwa) {
    // on resonance the exchange dynamics depends only on the accumulated
    // area, so every area is one truncation of a single pi/2 square pulse
    auto config = symmetric_config(arms, pi / 2, 0.0, options);
    const auto basis = basis_for(config);
    const auto psi0 = initial_state(config, basis);
    auto sector = rwa_reachable_subspace(basis, psi0);
    GeneratorTable table(config, sector);
    Vector start = sector.project(psi0.amplitudes());
    run = std::make_shared<SectorRun>(SectorRun{std::move(config), std::move(sector),
                                                std::move(table), std::move(start)});
    std::vector<double> times(areas.size());
    for (std::size_t i = 0; i < areas.size(); ++i) times[i] = areas[i] / (pi / 2);
    const auto samples = time_series_vector(run->table, run->start, times, options.integrator);
    for (std::size_t i = 0; i < samples.size(); ++i)
      probabilities[i] = project_all_ground(run->sector, samples[i]).probability;
    p_of_area = [run, options](double g) {
      const Vector out = propagate_vector(run->table, run->start, 0.0, g / (pi / 2),
                                          options.integrator);
      return project_all_ground(run->sector, out).probability;
    };
  } else {
    parallel_for_index(coarse_points, [&](std::int64_t i) {
      const double g = areas[static_cast<std::size_t>(i)];
      at_point("optimize", "g", g, [&] {
        probabilities[i] =
            run_herald(symmetric_config(arms, g, 0.0, options), options.integrator)
                .probability;
      });
    });
    p_of_area = [arms, options](double g) {
      return run_herald(symmetric_config(arms, g, 0.0, options), options.integrator)
          .probability;
    };
  }

  const auto best = static_cast<int>(
      std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin());
  double lo = best > 0 ? areas[best - 1] : areas.front() / 2;
  double hi = best + 1 < coarse_points ? areas[best + 1] : areas.back();

  // golden-section refinement (unimodal near the optimum)
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = p_of_area(x1), f2 = p_of_area(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = p_of_area(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = p_of_area(x1);
    }
  }
  OptimizationResult result;
  result.area_optimal = 0.5 * (lo + hi);
  result.p_max = p_of_area(result.area_optimal);
  return result;
}

SweepTable sweep_detuning(int arms, double area, const std::vector<double>& delta_grid,
                          const ScanOptions& options) {
  if (arms < 1) throw std::invalid_argument("scans: arm count must be positive");
  if (!(area > 0.0)) throw std::invalid_argument("scans: pulse area must be positive");
  require_grid(delta_grid, "detuning");

  const auto count = static_cast<std::int64_t>(delta_grid.size());
  std::vector<double> p_numeric(count), p_analytic(count), abs_err(count),
      fidelity(count), witness(count);
  parallel_for_index(count, [&](std::int64_t i) {
    const double delta = delta_grid[static_cast<std::size_t>(i)];
    at_point("sweep-detuning", "delta", delta, [&] {
      const auto config = symmetric_config(arms, area, delta, options);
      const auto herald = run_herald(config, options.integrator);
      p_numeric[i] = herald.probability;
      if (herald.degenerate) {
        fidelity[i] = nan_cell;
        witness[i] = nan_cell;
      } else {
        fidelity[i] =
            conditional_fidelity(herald, target_w_state(arms, config.sideband_cut));
        witness[i] = conditional_witness(herald);
      }
    });
    p_analytic[i] = analytic::p_heralding(arms, area, delta);
    abs_err[i] = std::abs(p_numeric[i] - p_analytic[i]);
  });

  SweepTable table("delta", delta_grid);
  table.manifest = make_manifest("sweep-detuning", {{"arms", arms}, {"g", area}},
                                 {{"delta", delta_grid}}, options);
  table.manifest["max_abs_err"] = *std::max_element(abs_err.begin(), abs_err.end());
  table.add_column("p_numeric", std::move(p_numeric));
  table.add_column("p_analytic", std::move(p_analytic));
  table.add_column("abs_err", std::move(abs_err));
  table.add_column("fidelity_conditional", std::move(fidelity));
  table.add_column("witness", std::move(witness));
  return table;
}

SweepTable mismatch_scan(MismatchKind kind, const std::vector<double>& spread_grid,
                         double base_area, double base_delta, const ScanOptions& options) {
  if (options.model != Model::rwa)
    throw std::invalid_argument(
        "scans: the mismatch scan compares against exchange-only closed forms");
  if (!(base_area > 0.0)) throw std::invalid_argument("scans: pulse area must be positive");
  require_grid(spread_grid, "spread");
  const char* label = kind == MismatchKind::coupling ? "eta" : "delta_spread";

  const auto count = static_cast<std::int64_t>(spread_grid.size());
  std::vector<double> p_numeric(count), fidelity_numeric(count), fidelity_closed(count),
      fidelity_err(count), weight_1(count), weight_2(count), weight_3(count), witness(count);
  parallel_for_index(count, [&](std::int64_t i) {
    const double spread = spread_grid[static_cast<std::size_t>(i)];
    at_point("mismatch", label, spread, [&] {
      std::vector<double> areas(3, base_area), deltas(3, base_delta);
      if (kind == MismatchKind::coupling) {
        areas = {base_area * (1.0 + spread), base_area, base_area * (1.0 - spread)};
      } else {
        deltas = {base_delta + spread, base_delta, base_delta - spread};
      }
      SystemConfig config;
      config.sideband_cut = options.sideband_cut;
      for (int j = 0; j < 3; ++j)
        config.arms.push_back(ArmParams{square_pulse(areas[j], 1.0), 2.0 * deltas[j], 0.0});
      config.validate();

      const auto herald = run_herald(config, options.integrator);
      p_numeric[i] = herald.probability;
      const auto alpha = analytic::alpha_weights(areas, deltas, {0.0, 0.0, 0.0});
      const auto weights = analytic::normalized_pathway_weights(alpha);
      weight_1[i] = weights[0];
      weight_2[i] = weights[1];
      weight_3[i] = weights[2];
      fidelity_closed[i] = analytic::fidelity_perturbed(alpha);
      if (herald.degenerate) {
        fidelity_numeric[i] = nan_cell;
        fidelity_err[i] = nan_cell;
        witness[i] = nan_cell;
      } else {
        fidelity_numeric[i] =
            conditional_fidelity(herald, target_w_state(3, config.sideband_cut));
        fidelity_err[i] = std::abs(fidelity_numeric[i] - fidelity_closed[i]);
        witness[i] = conditional_witness(herald);
      }
    });
  });

  SweepTable table(label, spread_grid);
  table.manifest = make_manifest(
      "mismatch",
      {{"kind", kind == MismatchKind::coupling ? "coupling" : "detuning"},
       {"g", base_area},
       {"delta", base_delta}},
      {{"spread", spread_grid}}, options);
  table.add_column("p_numeric", std::move(p_numeric));
  table.add_column("fidelity_numeric", std::move(fidelity_numeric));
  table.add_column("fidelity_closed_form", std::move(fidelity_closed));
  table.add_column("fidelity_abs_err", std::move(fidelity_err));
  table.add_column("weight_1", std::move(weight_1));
  table.add_column("weight_2", std::move(weight_2));
  table.add_column("weight_3", std::move(weight_3));
  table.add_column("witness", std::move(witness));
  return table;
}

SweepTable time_resolved_trace(int samples, double total_area, const ScanOptions& options) {
  if (options.model != Model::rwa)
    throw std::invalid_argument("scans: the time trace is an exchange-only driver");
  if (samples < 2) throw std::invalid_argument("scans: the trace needs at least two samples");
  if (!(total_area > 0.0)) throw std::invalid_argument("scans: pulse area must be positive");

  const auto config = symmetric_rwa_config(3, total_area, 0.0, options.sideband_cut);
  const auto basis = basis_for(config);
  const auto psi0 = initial_state(config, basis);
  const auto times = linspace(0.0, 1.0, samples);
  const auto states = time_series(psi0, config, times, options.integrator);
  const auto target = target_w_state(3, config.sideband_cut);
  const double constant = analytic::pairwise_negativity_wn(3);

  std::vector<double> atomic(samples), unconditional(samples), conditional(samples),
      constant_column(samples, constant), yield_numeric(samples), yield_analytic(samples),
      yield_err(samples), p_numeric(samples), f_unconditional(samples);
  parallel_for_index(samples, [&](std::int64_t i) {
    at_point("time-trace", "t", times[static_cast<std::size_t>(i)], [&] {
      const PureState& state = states[static_cast<std::size_t>(i)];
      atomic[i] = mean(pair_negativities(state, 3));
      unconditional[i] = mean(pair_negativities(state, 0));
      f_unconditional[i] = unconditional_fidelity(state, target);
      const auto herald = project_all_ground(state);
      p_numeric[i] = herald.probability;
      if (herald.degenerate) {
        conditional[i] = nan_cell;
        yield_numeric[i] = nan_cell;
      } else {
        conditional[i] = mean(pair_negativities(*herald.conditional_state, 0));
        yield_numeric[i] = success_weighted_yield(herald.probability, conditional[i]);
      }
      const double a = total_area * times[static_cast<std::size_t>(i)];
      const double s = std::sin(a), c = std::cos(a);
      yield_analytic[i] = constant * s * s * c * c * c * c;
      yield_err[i] = std::abs(yield_numeric[i] - yield_analytic[i]);
    });
  });

  SweepTable table("t", times);
  table.manifest = make_manifest("time-trace",
                                 {{"samples", samples}, {"total_area", total_area}},
                                 nlohmann::json::object(), options);
  table.add_column("atomic_pair_negativity", std::move(atomic));
  table.add_column("electron_pair_negativity_unconditional", std::move(unconditional));
  table.add_column("electron_pair_negativity_conditional", std::move(conditional));
  table.add_column("conditional_constant", std::move(constant_column));
  table.add_column("yield_numeric", std::move(yield_numeric));
  table.add_column("yield_analytic", std::move(yield_analytic));
  table.add_column("yield_abs_err", std::move(yield_err));
  table.add_column("p_numeric", std::move(p_numeric));
  table.add_column("fidelity_unconditional", std::move(f_unconditional));
  return table;
}

SweepTable weighted_resource_scan(const std::vector<double>& theta_grid,
                                  const std::vector<double>& phi_grid, double area,
                                  const ScanOptions& options) {
  if (options.model != Model::rwa)
    throw std::invalid_argument("scans: the resource scan is an exchange-only driver");
  require_grid(theta_grid, "theta");
  require_grid(phi_grid, "phi");
  for (const auto* grid : {&theta_grid, &phi_grid})
    for (double v : *grid)
      if (v < 0.0 || v > pi / 2 + 1e-12)
        throw std::invalid_argument("scans: resource angles must lie in [0, pi/2]");
  const double g = area > 0.0 ? area : analytic::g_optimal(3);

  const auto count = static_cast<std::int64_t>(theta_grid.size() * phi_grid.size());
  std::vector<double> index_values(count);
  for (std::int64_t k = 0; k < count; ++k) index_values[k] = static_cast<double>(k);
  std::vector<double> theta_col(count), phi_col(count), atomic_pair(count),
      electron_pair(count), pair_err(count), atomic_entropy(count), electron_entropy(count),
      entropy_err(count), p_numeric(count), fidelity(count);

  parallel_for_index(count, [&](std::int64_t k) {
    const auto np = static_cast<std::int64_t>(phi_grid.size());
    const double theta = theta_grid[static_cast<std::size_t>(k / np)];
    const double phi = phi_grid[static_cast<std::size_t>(k % np)];
    at_point("weighted-scan", "grid_index", static_cast<double>(k), [&] {
      theta_col[k] = theta;
      phi_col[k] = phi;
      const std::vector<Complex> weights = {Complex(std::sin(theta) * std::cos(phi)),
                                            Complex(std::sin(theta) * std::sin(phi)),
                                            Complex(std::cos(theta))};
      auto config = symmetric_rwa_config(3, g, 0.0, options.sideband_cut);
      config.excitation_amplitudes = weights;
      config.validate();
      const auto basis = basis_for(config);
      const auto psi0 = initial_state(config, basis);

      const auto atomic_pairs = pair_negativities(psi0, 3);
      const auto atomic_rests = rest_entropies(psi0, 3);
      const auto herald = run_herald(config, options.integrator);
      p_numeric[k] = herald.probability;
      fidelity[k] = conditional_fidelity(
          herald, target_weighted_state(3, config.sideband_cut, weights));
      const auto electron_pairs = pair_negativities(*herald.conditional_state, 0);
      const auto electron_rests = rest_entropies(*herald.conditional_state, 0);

      atomic_pair[k] = mean(atomic_pairs);
      electron_pair[k] = mean(electron_pairs);
      pair_err[k] = max_abs_difference(atomic_pairs, electron_pairs);
      atomic_entropy[k] = mean(atomic_rests);
      electron_entropy[k] = mean(electron_rests);
      entropy_err[k] = max_abs_difference(atomic_rests, electron_rests);
    });
  });

  SweepTable table("grid_index", index_values);
  table.manifest = make_manifest("weighted-scan", {{"g", g}},
                                 {{"theta", theta_grid}, {"phi", phi_grid}}, options);
  table.add_column("theta", std::move(theta_col));
  table.add_column("phi", std::move(phi_col));
  table.add_column("atomic_pair_negativity", std::move(atomic_pair));
  table.add_column("electron_pair_negativity", std::move(electron_pair));
  table.add_column("pair_negativity_max_err", std::move(pair_err));
  table.add_column("atomic_rest_entropy", std::move(atomic_entropy));
  table.add_column("electron_rest_entropy", std::move(electron_entropy));
  table.add_column("rest_entropy_max_err", std::move(entropy_err));
  table.add_column("p_numeric", std::move(p_numeric));
  table.add_column("fidelity_conditional", std::move(fidelity));
  return table;
}

SweepTable beyond_rwa_comparison(const std::vector<double>& window_grid, double area,
                                 double kappa, const IntegratorSpec& integrator) {
  require_ascending(window_grid, "window");
  if (!(window_grid.front() > 0.0))
    throw std::invalid_argument("scans: window lengths must be positive");
  if (!(area > 0.0)) throw std::invalid_argument("scans: pulse area must be positive");

  // rotating-frame references are window-independent on resonance
  const double p_rwa_numeric =
      run_herald(symmetric_rwa_config(3, area), IntegratorSpec{}).probability;
  const double p_rwa_analytic = analytic::p_heralding(3, area);

  const auto count = static_cast<std::int64_t>(window_grid.size());
  std::vector<double> p_full(count), p_bs(count), dp_rwa(count), dp_bs(count);
  parallel_for_index(count, [&](std::int64_t i) {
    const double wt = window_grid[static_cast<std::size_t>(i)]; // omega * T
    at_point("beyond-rwa", "omega_t", wt, [&] {
      const auto config = resonant_full_config(3, area, 1.0, wt);
      const auto final_state = run_final_state(config, integrator);
      if (edge_population(final_state) > 1e-6)
        throw std::runtime_error(
            "sideband-edge population above 1e-6; raise the sideband cut");
      p_full[i] = project_all_ground(final_state).probability;
    });
    const double delta_eff =
        analytic::bloch_siegert_delta_eff(area, 0.0, wt, 2.0, kappa);
    p_bs[i] = analytic::p_heralding(3, area, delta_eff);
    dp_rwa[i] = std::abs(p_full[i] - p_rwa_analytic);
    dp_bs[i] = std::abs(p_full[i] - p_bs[i]);
  });

  // power law over the largest available decade of window lengths
  const double fit_from = window_grid.back() / 10.0;
  const auto rwa_fit = fit_log_slope(window_grid, dp_rwa, fit_from);
  const auto bs_fit = fit_log_slope(window_grid, dp_bs, fit_from);

  SweepTable table("omega_t", window_grid);
  ScanOptions recorded;
  recorded.model = Model::full;
  recorded.sideband_cut = 3;
  recorded.omega = 1.0;
  recorded.integrator = integrator;
  table.manifest = make_manifest("beyond-rwa", {{"g", area}, {"kappa", kappa}},
                                 {{"omega_t", window_grid}}, recorded);
  table.manifest["fit"] = {{"from_omega_t", fit_from},
                           {"slope_rwa", rwa_fit.slope},
                           {"slope_rwa_stderr", rwa_fit.standard_error},
                           {"slope_bs", bs_fit.slope},
                           {"slope_bs_stderr", bs_fit.standard_error},
                           {"points", rwa_fit.points}};
  const double rwa_numeric_err = std::abs(p_rwa_numeric - p_rwa_analytic);
  table.add_column("p_full", std::move(p_full));
  table.add_column("p_rwa_numeric", std::vector<double>(count, p_rwa_numeric));
  table.add_column("p_rwa_analytic", std::vector<double>(count, p_rwa_analytic));
  table.add_column("p_bloch_siegert", std::move(p_bs));
  table.add_column("delta_p_rwa", std::move(dp_rwa));
  table.add_column("delta_p_bs", std::move(dp_bs));
  table.add_column("rwa_numeric_err", std::vector<double>(count, rwa_numeric_err));
  table.add_column("slope_rwa", std::vector<double>(count, rwa_fit.slope));
  table.add_column("slope_bs", std::vector<double>(count, bs_fit.slope));
  return table;
}

GaussianScanTables gaussian_width_scan(const std::vector<double>& width_grid,
                                       const std::vector<double>& delta_grid,
                                       double peak_area, const ScanOptions& options) {
  if (options.model != Model::rwa)
    throw std::invalid_argument("scans: the envelope scan is an exchange-only driver");
  require_ascending(width_grid, "width");
  if (!(width_grid.front() > 0.0))
    throw std::invalid_argument("scans: relative widths must be positive");
  require_grid(delta_grid, "detuning");
  const double peak = peak_area > 0.0 ? peak_area : analytic::g_optimal(3);

  const auto make_config = [&](const PulseEnvelope& envelope, double delta) {
    SystemConfig config;
    config.sideband_cut = options.sideband_cut;
    config.arms.assign(3, ArmParams{envelope, 2.0 * delta, 0.0});
    config.validate();
    return config;
  };

  const auto width_count = static_cast<std::int64_t>(width_grid.size());
  std::vector<double> width_negativity(width_count), width_area(width_count);
  parallel_for_index(width_count, [&](std::int64_t i) {
    const double width = width_grid[static_cast<std::size_t>(i)];
    at_point("gaussian", "tau_over_t", width, [&] {
      const auto envelope = gaussian_pulse(peak, 1.0, width);
      const auto final_state =
          run_final_state(make_config(envelope, 0.0), options.integrator);
      width_negativity[i] = mean(pair_negativities(final_state, 0));
      width_area[i] = accumulated_area(envelope, 1.0);
    });
  });

  const auto delta_count = static_cast<std::int64_t>(delta_grid.size());
  std::vector<double> gaussian_negativity(delta_count), square_negativity(delta_count);
  parallel_for_index(delta_count, [&](std::int64_t i) {
    const double delta = delta_grid[static_cast<std::size_t>(i)];
    at_point("gaussian", "delta", delta, [&] {
      const auto gaussian_state = run_final_state(
          make_config(gaussian_pulse(peak, 1.0, 1.2), delta), options.integrator);
      gaussian_negativity[i] = mean(pair_negativities(gaussian_state, 0));
      const auto square_state = run_final_state(
          make_config(square_pulse(peak, 1.0), delta), options.integrator);
      square_negativity[i] = mean(pair_negativities(square_state, 0));
    });
  });

  const auto manifest =
      make_manifest("gaussian", {{"peak_area", peak}},
                    {{"tau_over_t", width_grid}, {"delta", delta_grid}}, options);

  GaussianScanTables tables{SweepTable("tau_over_t", width_grid),
                            SweepTable("delta", delta_grid)};
  tables.width_table.manifest = manifest;
  tables.width_table.add_column("electron_pair_negativity_unconditional",
                                std::move(width_negativity));
  tables.width_table.add_column("accumulated_area", std::move(width_area));
  tables.detuning_table.manifest = manifest;
  tables.detuning_table.add_column("negativity_gaussian", std::move(gaussian_negativity));
  tables.detuning_table.add_column("negativity_square", std::move(square_negativity));
  return tables;
}

// ------------------------------------------------------------- manifests ---

nlohmann::json integrator_to_json(const IntegratorSpec& spec) {
  return {{"method", spec.method == StepMethod::adaptive ? "adaptive" : "fixed_step"},
          {"tolerance", spec.tolerance},
          {"max_step", spec.max_step},
          {"min_steps", spec.min_steps},
          {"steps_per_fast_period", spec.steps_per_fast_period}};
}

IntegratorSpec integrator_from_json(const nlohmann::json& node) {
  IntegratorSpec spec;
  const std::string method = node.value("method", std::string("fixed_step"));
  if (method == "adaptive")
    spec.method = StepMethod::adaptive;
  else if (method != "fixed_step")
    throw std::invalid_argument("manifest: unknown integrator method '" + method + "'");
  spec.tolerance = node.value("tolerance", spec.tolerance);
  spec.max_step = node.value("max_step", spec.max_step);
  spec.min_steps = node.value("min_steps", spec.min_steps);
  spec.steps_per_fast_period =
      node.value("steps_per_fast_period", spec.steps_per_fast_period);
  return spec;
}

nlohmann::json options_to_json(const ScanOptions& options) {
  return {{"model", options.model == Model::full ? "full" : "rwa"},
          {"sideband_cut", options.sideband_cut},
          {"omega", options.omega},
          {"integrator", integrator_to_json(options.integrator)}};
}

ScanOptions options_from_json(const nlohmann::json& node) {
  ScanOptions options;
  const std::string model = node.value("model", std::string("rwa"));
  if (model == "full")
    options.model = Model::full;
  else if (model != "rwa")
    throw std::invalid_argument("manifest: unknown model '" + model + "'");
  options.sideband_cut = node.value("sideband_cut", options.sideband_cut);
  options.omega = node.value("omega", options.omega);
  if (node.contains("integrator"))
    options.integrator = integrator_from_json(node.at("integrator"));
  return options;
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& node, const char* key) {
  if (!node.contains(key))
    throw std::invalid_argument(std::string("manifest: missing field '") + key + "'");
  return node.at(key);
}

} // namespace

RunOutput run_from_manifest(const nlohmann::json& manifest) {
  if (!manifest.is_object())
    throw std::invalid_argument("manifest: expected a JSON object");
  const std::string subcommand = require_field(manifest, "subcommand").get<std::string>();
  const ScanOptions options =
      options_from_json(manifest.value("options", nlohmann::json::object()));
  const nlohmann::json parameters = manifest.value("parameters", nlohmann::json::object());
  const nlohmann::json grids = manifest.value("grids", nlohmann::json::object());
  const auto grid = [&](const char* name) {
    return require_field(grids, name).get<std::vector<double>>();
  };

  RunOutput output;
  if (subcommand == "sweep-area") {
    output.tables.emplace_back(
        "", sweep_pulse_area(require_field(parameters, "arms").get<int>(), grid("g"),
                             options));
  } else if (subcommand == "optimize") {
    const int arms = require_field(parameters, "arms").get<int>();
    const auto result = optimize_pulse_area(arms, options);
    output.summary = "area_optimal = " + format_cell(result.area_optimal) +
                     "\np_max = " + format_cell(result.p_max) + "\n";
    output.manifest = make_manifest("optimize", {{"arms", arms}},
                                    nlohmann::json::object(), options);
    output.manifest["results"] = {{"area_optimal", result.area_optimal},
                                  {"p_max", result.p_max}};
    return output;
  } else if (subcommand == "sweep-detuning") {
    output.tables.emplace_back(
        "", sweep_detuning(require_field(parameters, "arms").get<int>(),
                           require_field(parameters, "g").get<double>(), grid("delta"),
                           options));
  } else if (subcommand == "mismatch") {
    const std::string kind = require_field(parameters, "kind").get<std::string>();
    if (kind != "coupling" && kind != "detuning")
      throw std::invalid_argument("manifest: unknown mismatch kind '" + kind + "'");
    output.tables.emplace_back(
        "", mismatch_scan(kind == "coupling" ? MismatchKind::coupling
                                             : MismatchKind::detuning,
                          grid("spread"), require_field(parameters, "g").get<double>(),
                          parameters.value("delta", 0.0), options));
  } else if (subcommand == "time-trace") {
    output.tables.emplace_back(
        "", time_resolved_trace(parameters.value("samples", 201),
                                parameters.value("total_area", pi / 2), options));
  } else if (subcommand == "weighted-scan") {
    output.tables.emplace_back(
        "", weighted_resource_scan(grid("theta"), grid("phi"),
                                   parameters.value("g", 0.0), options));
  } else if (subcommand == "beyond-rwa") {
    output.tables.emplace_back(
        "", beyond_rwa_comparison(grid("omega_t"), parameters.value("g", 0.6),
                                  parameters.value("kappa", 6.0), options.integrator));
  } else if (subcommand == "gaussian") {
    auto tables = gaussian_width_scan(grid("tau_over_t"), grid("delta"),
                                      parameters.value("peak_area", 0.0), options);
    output.tables.emplace_back("width", std::move(tables.width_table));
    output.tables.emplace_back("detuning", std::move(tables.detuning_table));
  } else {
    throw std::invalid_argument("manifest: unknown subcommand '" + subcommand + "'");
  }
  output.manifest = output.tables.front().second.manifest;
  return output;
}

} // namespace scans
} // namespace heraldsim
