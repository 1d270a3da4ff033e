#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "heraldsim/analytic.hpp"
#include "heraldsim/pulse.hpp"
#include "heraldsim/scans.hpp"

using namespace heraldsim;
using namespace heraldsim::scans;

namespace {

struct WorkerEnvGuard {
  explicit WorkerEnvGuard(const char* value) {
    if (const char* old = std::getenv("HERALDSIM_WORKERS")) saved = old;
    setenv("HERALDSIM_WORKERS", value, 1);
  }
  ~WorkerEnvGuard() {
    if (saved.empty())
      unsetenv("HERALDSIM_WORKERS");
    else
      setenv("HERALDSIM_WORKERS", saved.c_str(), 1);
  }
  std::string saved;
};

double column_max(const SweepTable& table, const std::string& name) {
  const auto& values = table.column(name);
  return *std::max_element(values.begin(), values.end());
}

// index of the largest finite entry
std::size_t argmax_finite(const std::vector<double>& values) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    if (values[i] > best_value) {
      best_value = values[i];
      best = i;
    }
  }
  return best;
}

} // namespace

TEST_CASE("area sweeps agree with the closed-form heralding probability") {
  const auto grid = linspace(0.03, pi / 2, 50);
  const auto table = sweep_pulse_area(3, grid);

  CHECK(column_max(table, "abs_err") < 1e-6);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(table.column("p_analytic")[i] ==
          doctest::Approx(analytic::p_heralding(3, grid[i])).epsilon(1e-14));

  // vanishing pulse transfers nothing
  const auto tiny = sweep_pulse_area(3, {1e-4, 0.5});
  CHECK(tiny.column("p_numeric")[0] < 1e-8);
}

TEST_CASE("area-sweep peaks shift to smaller areas as arms are added") {
  const auto grid = linspace(0.05, pi / 2, 60);
  double previous_peak = pi;
  for (int arms = 2; arms <= 6; ++arms) {
    const auto table = sweep_pulse_area(arms, grid);
    const double peak = grid[argmax_finite(table.column("p_numeric"))];
    CHECK(peak < previous_peak);
    previous_peak = peak;
  }
}

TEST_CASE("area sweeps reject malformed grids") {
  CHECK_THROWS_AS(sweep_pulse_area(3, {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(sweep_pulse_area(3, {0.5, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(sweep_pulse_area(3, {}), std::invalid_argument);
  CHECK_THROWS_AS(sweep_pulse_area(0, {0.5}), std::invalid_argument);
  ScanOptions full;
  full.model = Model::full;
  CHECK_THROWS_AS(sweep_pulse_area(4, {0.5}, full), std::invalid_argument);
}

TEST_CASE("area optimization lands on the closed-form optimum") {
  const auto three = optimize_pulse_area(3);
  CHECK(std::abs(three.area_optimal - analytic::g_optimal(3)) < 2e-6);
  CHECK(std::abs(three.p_max - 4.0 / 27.0) < 1e-9);

  const auto one = optimize_pulse_area(1);
  CHECK(std::abs(one.area_optimal - pi / 2) < 2e-6);
  CHECK(std::abs(one.p_max - 1.0) < 1e-9);

  const auto eight = optimize_pulse_area(8);
  CHECK(std::abs(eight.area_optimal - analytic::g_optimal(8)) < 1e-5);
  CHECK(std::abs(eight.p_max - analytic::p_max(8)) < 1e-6);
  CHECK(eight.p_max == doctest::Approx((1.0 / 8.0) * std::pow(7.0 / 8.0, 7)).epsilon(1e-9));
}

TEST_CASE("detuning sweeps reproduce the suppression curve and stay faithful") {
  const double g = analytic::g_optimal(3);
  const auto grid = linspace(-5.0, 5.0, 41);
  const auto table = sweep_detuning(3, g, grid);

  CHECK(column_max(table, "abs_err") < 1e-6);
  // resonant center point equals the optimum
  CHECK(table.column("p_numeric")[20] == doctest::Approx(4.0 / 27.0).epsilon(1e-9));
  // suppression is even in the detuning sign
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t mirror = grid.size() - 1 - i;
    CHECK(std::abs(table.column("p_numeric")[i] - table.column("p_numeric")[mirror]) < 1e-9);
  }
  // symmetric arms keep a perfect conditional target everywhere
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(table.column("fidelity_conditional")[i] - 1.0) < 1e-9);
    CHECK(std::abs(table.column("witness")[i] + 1.0 / 3.0) < 1e-6);
  }
}

TEST_CASE("mismatch scans match the pathway-weight closed forms") {
  const double g = analytic::g_optimal(3);

  const auto coupling = mismatch_scan(MismatchKind::coupling, linspace(0.0, 0.3, 13), g);
  CHECK(column_max(coupling, "fidelity_abs_err") < 1e-7);
  // symmetric point: perfect target, equal pathways, deepest witness
  CHECK(std::abs(coupling.column("fidelity_numeric")[0] - 1.0) < 1e-9);
  CHECK(std::abs(coupling.column("weight_1")[0] - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(coupling.column("weight_2")[0] - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(coupling.column("witness")[0] + 1.0 / 3.0) < 1e-9);
  // a stronger first arm boosts its own transfer but weakens its spectator
  // role; near the optimum the direct gain wins
  const std::size_t probe = 4;
  CHECK(coupling.column("weight_1")[probe] > coupling.column("weight_2")[probe]);
  CHECK(coupling.column("weight_2")[probe] > coupling.column("weight_3")[probe]);

  const auto detuning =
      mismatch_scan(MismatchKind::detuning, linspace(0.0, 0.5, 13), g, 0.4);
  CHECK(column_max(detuning, "fidelity_abs_err") < 1e-7);
  CHECK(std::abs(detuning.column("fidelity_numeric")[0] - 1.0) < 1e-9);

  ScanOptions full;
  full.model = Model::full;
  CHECK_THROWS_AS(mismatch_scan(MismatchKind::coupling, {0.1}, g, 0.0, full),
                  std::invalid_argument);
}

TEST_CASE("the time-resolved trace keeps the conditional content constant") {
  const auto table = time_resolved_trace(81);
  const double constant = analytic::pairwise_negativity_wn(3);
  const auto& t = table.parameter_values();
  const auto& p = table.column("p_numeric");
  const auto& conditional = table.column("electron_pair_negativity_conditional");
  const auto& yield_numeric = table.column("yield_numeric");

  // start: atomic resource fully entangled, electrons untouched, herald empty
  CHECK(std::abs(table.column("atomic_pair_negativity")[0] - constant) < 1e-9);
  CHECK(std::abs(table.column("electron_pair_negativity_unconditional")[0]) < 1e-12);
  CHECK(std::isnan(conditional[0]));
  CHECK(std::isnan(yield_numeric[0]));
  CHECK(p[0] < 1e-14);

  // end of the pi/2 pulse: every arm exchanges fully, so ground spectators absorb
  // from their electrons and the branches end in orthogonal register patterns --
  // both unconditional negativities collapse and nothing is left to herald
  const std::size_t last = t.size() - 1;
  CHECK(std::abs(table.column("electron_pair_negativity_unconditional")[last]) < 1e-9);
  CHECK(std::abs(table.column("atomic_pair_negativity")[last]) < 1e-9);
  CHECK(std::isnan(conditional[last]));

  for (std::size_t i = 0; i < t.size(); ++i) {
    // heralded entanglement content is time-independent wherever defined
    if (!std::isnan(conditional[i])) {
      CHECK(std::abs(conditional[i] - constant) < 1e-9);
      CHECK(std::abs(table.column("yield_abs_err")[i]) < 1e-9);
    }
    CHECK(table.column("conditional_constant")[i] == constant);
    // the traced electron target population equals the heralding probability
    CHECK(std::abs(table.column("fidelity_unconditional")[i] - p[i]) < 1e-9);
    // analytic yield curve
    const double a = (pi / 2) * t[i];
    CHECK(table.column("yield_analytic")[i] ==
          doctest::Approx(constant * std::pow(std::sin(a), 2) * std::pow(std::cos(a), 4))
              .epsilon(1e-12));
  }

  // the usable-yield peak comes earlier than the unconditional-negativity peak
  const auto yield_peak = argmax_finite(yield_numeric);
  const auto negativity_peak =
      argmax_finite(table.column("electron_pair_negativity_unconditional"));
  CHECK(yield_peak < negativity_peak);

  CHECK_THROWS_AS(time_resolved_trace(1), std::invalid_argument);
}

TEST_CASE("weighted resources transfer their entanglement pattern exactly") {
  const auto table =
      weighted_resource_scan(linspace(0.0, pi / 2, 3), linspace(0.0, pi / 2, 3));
  for (std::int64_t k = 0; k < table.rows(); ++k) {
    CHECK(std::abs(table.column("p_numeric")[k] - 4.0 / 27.0) < 1e-9);
    CHECK(std::abs(table.column("fidelity_conditional")[k] - 1.0) < 1e-9);
    CHECK(table.column("pair_negativity_max_err")[k] < 1e-8);
    CHECK(table.column("rest_entropy_max_err")[k] < 1e-8);
  }
  // theta = 0 row: a product resource carries no pair entanglement
  CHECK(std::abs(table.column("atomic_pair_negativity")[0]) < 1e-12);
  CHECK(std::abs(table.column("electron_pair_negativity")[0]) < 1e-10);

  // pointwise oracle: per-pair negativities against the weighted closed form
  const double theta = 0.7, phi = 0.3;
  const auto point = weighted_resource_scan({theta}, {phi});
  const double c1 = std::sin(theta) * std::cos(phi);
  const double c2 = std::sin(theta) * std::sin(phi);
  const double c3 = std::cos(theta);
  const double expected =
      (analytic::pair_negativity_weighted(c1, c2, c3 * c3) +
       analytic::pair_negativity_weighted(c1, c3, c2 * c2) +
       analytic::pair_negativity_weighted(c2, c3, c1 * c1)) /
      3.0;
  CHECK(point.column("atomic_pair_negativity")[0] ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK(point.column("electron_pair_negativity")[0] ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK(point.column("theta")[0] == theta);
  CHECK(point.column("phi")[0] == phi);

  CHECK_THROWS_AS(weighted_resource_scan({-0.1}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(weighted_resource_scan({0.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("the full model approaches the exchange-only limit quadratically") {
  const auto table = beyond_rwa_comparison(logspace(20.0, 60.0, 5));

  CHECK(column_max(table, "rwa_numeric_err") < 1e-6);
  // both residuals stay small and shrink along the grid
  CHECK(column_max(table, "delta_p_rwa") < 2e-5);
  CHECK(column_max(table, "delta_p_bs") < 2e-5);
  // long windows converge to the exchange-only value
  CHECK(std::abs(table.column("p_full")[4] - table.column("p_rwa_analytic")[4]) < 2e-3);
  // residuals fall roughly as the inverse square of the window; the counter-rotating
  // boundary terms beat against the window, so a five-point grid only brackets the
  // exponent loosely (a dense decade resolves both slopes to -2 +/- 0.3)
  const double slope_rwa = table.column("slope_rwa")[0];
  const double slope_bs = table.column("slope_bs")[0];
  CHECK(slope_rwa < -1.2);
  CHECK(slope_rwa > -3.5);
  CHECK(slope_bs < -1.2);
  CHECK(slope_bs > -3.5);
  CHECK(table.manifest.at("fit").at("points").get<int>() == 5);

  // a sub-cycle window spreads population to the sideband edge
  try {
    beyond_rwa_comparison({0.5});
    FAIL("expected the edge monitor to reject a sub-cycle window");
  } catch (const std::runtime_error& error) {
    CHECK(std::string(error.what()).find("omega_t = 0.5") != std::string::npos);
  }
}

TEST_CASE("gaussian envelopes converge to the square-pulse entanglement") {
  const auto tables =
      gaussian_width_scan(linspace(0.4, 2.0, 5), {-2.0, 0.0, 2.0});
  const auto& width = tables.width_table;
  const auto& detuning = tables.detuning_table;
  const double peak = analytic::g_optimal(3);

  // widening the envelope grows the delivered area toward the square limit,
  // and the transferred entanglement with it
  for (std::int64_t i = 0; i + 1 < width.rows(); ++i) {
    CHECK(width.column("electron_pair_negativity_unconditional")[i] <=
          width.column("electron_pair_negativity_unconditional")[i + 1] + 1e-9);
    CHECK(width.column("accumulated_area")[i] < width.column("accumulated_area")[i + 1]);
  }
  CHECK(width.column("accumulated_area")[4] > 0.95 * peak);
  CHECK(width.column("accumulated_area")[4] < peak);

  // independent quadrature of the envelope (composite Simpson)
  for (std::int64_t i = 0; i < width.rows(); ++i) {
    const auto envelope = gaussian_pulse(peak, 1.0, width.parameter_values()[i]);
    const int panels = 4000;
    double integral = envelope_value(envelope, 0.0) + envelope_value(envelope, 1.0);
    for (int k = 1; k < panels; ++k)
      integral += envelope_value(envelope, static_cast<double>(k) / panels) *
                  (k % 2 == 1 ? 4.0 : 2.0);
    integral /= 3.0 * panels;
    CHECK(std::abs(width.column("accumulated_area")[i] - integral) < 1e-10);
  }

  // detuning response: even in delta, and the softer envelope stays at or
  // below the square pulse of equal peak near resonance
  CHECK(std::abs(detuning.column("negativity_gaussian")[0] -
                 detuning.column("negativity_gaussian")[2]) < 1e-9);
  const double gap =
      detuning.column("negativity_square")[1] - detuning.column("negativity_gaussian")[1];
  CHECK(gap >= -1e-9);
  CHECK(gap < 0.05);

  CHECK(width.manifest.at("subcommand") == "gaussian");
  CHECK(detuning.manifest == width.manifest);
}

TEST_CASE("parallel and serial scans produce identical tables") {
  const double g = analytic::g_optimal(3);
  const auto grid = linspace(-2.0, 2.0, 9);
  std::string serial_csv, threaded_csv;
  {
    WorkerEnvGuard guard("1");
    serial_csv = to_csv(sweep_detuning(3, g, grid));
  }
  {
    WorkerEnvGuard guard("6");
    threaded_csv = to_csv(sweep_detuning(3, g, grid));
  }
  CHECK(serial_csv == threaded_csv);
  CHECK_FALSE(serial_csv.empty());
}
