#include "heraldsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <stdexcept>

#include "heraldsim/analytic.hpp"
#include "heraldsim/entanglement.hpp"
#include "heraldsim/evolve.hpp"
#include "heraldsim/hamiltonian.hpp"
#include "heraldsim/herald.hpp"
#include "heraldsim/scans.hpp"

namespace heraldsim {
namespace verify {
namespace {

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

CheckResult guarded(const std::string& name,
                    const std::function<CheckResult()>& body) {
  try {
    auto result = body();
    result.name = name;
    return result;
  } catch (const std::exception& error) {
    return {name, false, std::string("threw: ") + error.what()};
  }
}

double simpson(const std::function<double(double)>& f, double lo, double hi,
               int panels) {
  const double h = (hi - lo) / panels;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix ginibre(std::mt19937& rng, int rows, int cols) {
  std::normal_distribution<double> gauss;
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

DensityMatrix random_density(std::mt19937& rng, const std::vector<int>& dims) {
  int dim = 1;
  for (int d : dims) dim *= d;
  const Matrix g = ginibre(rng, dim, dim);
  Matrix rho = g * g.adjoint();
  rho = (rho + Matrix(rho.adjoint())) / 2.0;
  rho /= rho.trace().real();
  return DensityMatrix(dims, std::move(rho));
}

DensityMatrix random_pure_density(std::mt19937& rng, const std::vector<int>& dims) {
  int dim = 1;
  for (int d : dims) dim *= d;
  Vector psi = ginibre(rng, dim, 1);
  psi /= psi.norm();
  Matrix rho = psi * psi.adjoint();
  return DensityMatrix(dims, std::move(rho));
}

Matrix random_unitary(std::mt19937& rng, int dim) {
  const Eigen::HouseholderQR<Matrix> qr(ginibre(rng, dim, dim));
  return qr.householderQ();
}

// |a>_split (x) |b>_rest over three qubits, then the projector
Matrix biseparable_pure(std::mt19937& rng, int split) {
  Vector a = ginibre(rng, 2, 1);
  a /= a.norm();
  Vector b = ginibre(rng, 4, 1);
  b /= b.norm();
  Vector psi(8);
  for (int idx = 0; idx < 8; ++idx) {
    const int digits[3] = {(idx >> 2) & 1, (idx >> 1) & 1, idx & 1};
    int rest = 0;
    for (int q = 0; q < 3; ++q)
      if (q != split) rest = rest * 2 + digits[q];
    psi(idx) = a(digits[split]) * b(rest);
  }
  return psi * psi.adjoint();
}

// ---------------------------------------------------------------- checks ---

CheckResult check_optimum_closed_form() {
  double max_area_err = 0.0;
  double max_p_err = 0.0;
  for (int arms = 2; arms <= 8; ++arms) {
    const auto best = scans::optimize_pulse_area(arms);
    max_area_err =
        std::max(max_area_err, std::abs(best.area_optimal - analytic::g_optimal(arms)));
    max_p_err = std::max(max_p_err, std::abs(best.p_max - analytic::p_max(arms)));
  }
  const double scaled = analytic::p_max(1000) * 1000.0 * std::exp(1.0);
  const bool passed =
      max_area_err < 1e-4 && max_p_err < 1e-6 && std::abs(scaled - 1.0) < 0.01;
  return {"", passed,
          "N=2..8: max |area - closed form| = " + fmt(max_area_err) +
              " (tol 1e-4), max |P - closed form| = " + fmt(max_p_err) +
              " (tol 1e-6); N=1000: e*N*P_max = " + fmt(scaled) + " (tol 1%)"};
}

CheckResult check_tripartite_optimum() {
  const auto best = scans::optimize_pulse_area(3);
  const double p_err = std::abs(best.p_max - 4.0 / 27.0);
  const double area_err = std::abs(best.area_optimal - std::acos(std::sqrt(2.0 / 3.0)));
  return {"", p_err < 1e-6 && area_err < 1e-4,
          "|P_max - 4/27| = " + fmt(p_err) + " (tol 1e-6), |g_opt - acos sqrt(2/3)| = " +
              fmt(area_err) + " (tol 1e-4)"};
}

CheckResult check_detuned_oracle() {
  const auto table =
      scans::sweep_detuning(3, analytic::g_optimal(3), linspace(-5.0, 5.0, 41));
  double max_err = 0.0;
  for (double err : table.column("abs_err")) max_err = std::max(max_err, err);
  return {"", max_err < 1e-6,
          "41-point detuning grid: max |P_numeric - P_closed_form| = " + fmt(max_err) +
              " (tol 1e-6)"};
}

CheckResult check_conditional_structure() {
  const auto config = symmetric_rwa_config(3, pi / 2);
  const auto basis = basis_for(config);
  const auto psi0 = initial_state(config, basis);
  const auto sector = rwa_reachable_subspace(basis, psi0);
  const GeneratorTable generator(config, sector);
  const auto samples = time_series_vector(generator, sector.project(psi0.amplitudes()),
                                          linspace(0.0, 1.0, 201));

  const auto target = target_w_state(3, config.sideband_cut);
  const double constant = analytic::pairwise_negativity_wn(3);
  double max_fidelity_err = 0.0;
  double max_negativity_err = 0.0;
  double max_witness_err = 0.0;
  int conditioned = 0;
  for (const auto& amplitudes : samples) {
    const auto herald = project_all_ground(sector, amplitudes);
    if (herald.degenerate) continue;
    ++conditioned;
    max_fidelity_err = std::max(
        max_fidelity_err, std::abs(conditional_fidelity(herald, target) - 1.0));
    const auto& conditional = *herald.conditional_state;
    double negativity_sum = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        negativity_sum += negativity(reduced_state(conditional, {a, b}), 0);
    max_negativity_err =
        std::max(max_negativity_err, std::abs(negativity_sum / 3.0 - constant));
    const auto qubits = effective_qubit_state(conditional);
    max_witness_err = std::max(
        max_witness_err, std::abs(witness_expectation(qubits.state) - (-1.0 / 3.0)));
  }
  const bool passed = conditioned >= 150 && max_fidelity_err < 1e-9 &&
                      max_negativity_err < 1e-6 && max_witness_err < 1e-6;
  return {"", passed,
          std::to_string(conditioned) +
              "/201 samples heralded: max |F - 1| = " + fmt(max_fidelity_err) +
              " (tol 1e-9), max |avg pair negativity - (sqrt 5 - 1)/6| = " +
              fmt(max_negativity_err) + " (tol 1e-6), max |witness + 1/3| = " +
              fmt(max_witness_err) + " (tol 1e-6)"};
}

CheckResult check_traced_register_identity() {
  const auto config = symmetric_rwa_config(3, pi / 2);
  const auto basis = basis_for(config);
  const auto series =
      time_series(initial_state(config, basis), config, linspace(0.0, 1.0, 201));
  const auto target = target_w_state(3, config.sideband_cut);
  double max_fidelity_gap = 0.0;
  double max_branch_gap = 0.0;
  for (const auto& state : series) {
    const double probability = project_all_ground(state).probability;
    max_fidelity_gap = std::max(
        max_fidelity_gap, std::abs(unconditional_fidelity(state, target) - probability));
    double total = 0.0;
    for (double branch : branch_probabilities(state)) total += branch;
    max_branch_gap = std::max(max_branch_gap, std::abs(total - 1.0));
  }
  return {"", max_fidelity_gap < 1e-9 && max_branch_gap < 1e-10,
          "201 samples: max |traced-target fidelity - P| = " + fmt(max_fidelity_gap) +
              " (tol 1e-9), max |sum of branch probabilities - 1| = " +
              fmt(max_branch_gap) + " (tol 1e-10)"};
}

CheckResult check_weighted_transfer() {
  const auto table =
      scans::weighted_resource_scan(linspace(0.0, pi / 2, 11), linspace(0.0, pi / 2, 11));
  double max_pair_err = 0.0;
  double max_entropy_err = 0.0;
  double max_p_err = 0.0;
  double max_fidelity_err = 0.0;
  for (std::int64_t k = 0; k < table.rows(); ++k) {
    max_pair_err = std::max(max_pair_err, table.column("pair_negativity_max_err")[k]);
    max_entropy_err = std::max(max_entropy_err, table.column("rest_entropy_max_err")[k]);
    max_p_err = std::max(max_p_err, std::abs(table.column("p_numeric")[k] - 4.0 / 27.0));
    max_fidelity_err = std::max(
        max_fidelity_err, std::abs(table.column("fidelity_conditional")[k] - 1.0));
  }
  const bool passed = max_pair_err < 1e-8 && max_entropy_err < 1e-8 &&
                      max_p_err < 1e-6 && max_fidelity_err < 1e-8;
  return {"", passed,
          "11x11 grid: max pair-negativity transfer gap = " + fmt(max_pair_err) +
              ", max rest-entropy transfer gap = " + fmt(max_entropy_err) +
              " (tol 1e-8); max |P - 4/27| = " + fmt(max_p_err) +
              " (tol 1e-6), max |F - 1| = " + fmt(max_fidelity_err) + " (tol 1e-8)"};
}

CheckResult check_mismatch_law() {
  const double g = analytic::g_optimal(3);
  double max_fidelity_err = 0.0;
  for (const auto& table :
       {scans::mismatch_scan(scans::MismatchKind::coupling, linspace(0.0, 0.3, 7), g),
        scans::mismatch_scan(scans::MismatchKind::detuning, linspace(0.0, 0.5, 7), g)})
    for (double err : table.column("fidelity_abs_err"))
      max_fidelity_err = std::max(max_fidelity_err, err);

  // second-order law: 1 - F == mean |eps_j - mean eps|^2 to 1% relative for
  // pathway weights alpha_j = (1 + eps_j) alpha_bar with |eps| <= 1e-3
  std::mt19937 rng(907);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  double max_relative_gap = 0.0;
  int draws = 0;
  const auto check_alpha = [&](const std::vector<Complex>& alpha) {
    const auto arms = static_cast<double>(alpha.size());
    Complex mean_alpha{0.0};
    for (const auto& a : alpha) mean_alpha += a;
    mean_alpha /= arms;
    std::vector<Complex> eps(alpha.size());
    Complex mean_eps{0.0};
    double max_eps = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      eps[j] = alpha[j] / mean_alpha - 1.0;
      mean_eps += eps[j];
      max_eps = std::max(max_eps, std::abs(eps[j]));
    }
    mean_eps /= arms;
    double law = 0.0;
    for (const auto& e : eps) law += std::norm(e - mean_eps);
    law /= arms;
    if (max_eps > 1e-3 || law < 1e-9) return; // outside the law's stated regime
    ++draws;
    const double gap = std::abs((1.0 - analytic::fidelity_perturbed(alpha)) - law);
    max_relative_gap = std::max(max_relative_gap, gap / law);
  };
  for (int arms : {3, 5}) {
    for (int draw = 0; draw < 400; ++draw) { // perturbed weights directly
      std::vector<Complex> alpha(arms);
      for (auto& a : alpha)
        a = 1.0 + 7e-4 * Complex(uniform(rng), uniform(rng));
      check_alpha(alpha);
    }
  }
  for (int draw = 0; draw < 200; ++draw) { // weights from perturbed arm parameters
    std::vector<double> areas(3), deltas(3);
    for (int j = 0; j < 3; ++j) {
      areas[j] = g * (1.0 + 2e-4 * uniform(rng));
      deltas[j] = 2e-4 * uniform(rng);
    }
    check_alpha(analytic::alpha_weights(areas, deltas, {0.0, 0.0, 0.0}));
  }
  const bool passed = max_fidelity_err < 1e-7 && max_relative_gap < 0.01 && draws >= 900;
  return {"", passed,
          "mismatch grids: max |F_numeric - F_closed_form| = " + fmt(max_fidelity_err) +
              " (tol 1e-7); variance law over " + std::to_string(draws) +
              " draws: max relative gap = " + fmt(max_relative_gap) + " (tol 1%)"};
}

CheckResult check_counter_rotating_scaling() {
  const auto table = scans::beyond_rwa_comparison(logspace(20.0, 200.0, 33));
  const double slope_rwa = table.column("slope_rwa")[0];
  const double slope_bs = table.column("slope_bs")[0];
  double max_rwa_err = 0.0;
  for (double err : table.column("rwa_numeric_err"))
    max_rwa_err = std::max(max_rwa_err, err);
  const auto in_band = [](double slope) { return slope > -2.3 && slope < -1.7; };
  return {"", in_band(slope_rwa) && in_band(slope_bs) && max_rwa_err < 1e-6,
          "33-point window grid: residual slope = " + fmt(slope_rwa) +
              ", shifted-closed-form slope = " + fmt(slope_bs) +
              " (band -2 +/- 0.3); max |P_rwa_numeric - P_rwa_analytic| = " +
              fmt(max_rwa_err) + " (tol 1e-6)"};
}

CheckResult check_gaussian_envelope() {
  const auto tables =
      scans::gaussian_width_scan(linspace(0.2, 2.0, 10), linspace(-5.0, 5.0, 21));
  const auto& width = tables.width_table;
  double worst_decrease = 0.0;
  for (std::int64_t i = 0; i + 1 < width.rows(); ++i)
    worst_decrease = std::max(
        worst_decrease,
        width.column("electron_pair_negativity_unconditional")[i] -
            width.column("electron_pair_negativity_unconditional")[i + 1]);

  const double peak = analytic::g_optimal(3);
  double max_area_err = 0.0;
  for (std::int64_t i = 0; i < width.rows(); ++i) {
    const auto envelope = gaussian_pulse(peak, 1.0, width.parameter_values()[i]);
    const double quadrature =
        simpson([&](double t) { return envelope_value(envelope, t); }, 0.0, 1.0, 4000);
    max_area_err = std::max(
        max_area_err, std::abs(width.column("accumulated_area")[i] - quadrature));
  }

  const auto& detuning = tables.detuning_table;
  double center_gap = 0.0; // gaussian minus square at zero detuning
  for (std::int64_t i = 0; i < detuning.rows(); ++i)
    if (detuning.parameter_values()[i] == 0.0)
      center_gap = detuning.column("negativity_gaussian")[i] -
                   detuning.column("negativity_square")[i];
  const bool passed =
      worst_decrease < 1e-9 && max_area_err < 1e-10 && center_gap < 1e-9;
  return {"", passed,
          "width grid: worst negativity decrease = " + fmt(worst_decrease) +
              " (tol 1e-9), max |area column - quadrature| = " + fmt(max_area_err) +
              " (tol 1e-10); resonant gaussian-minus-square gap = " + fmt(center_gap) +
              " (tol 1e-9)"};
}

CheckResult check_randomized_invariants() {
  // trajectory invariants on a symmetric and an asymmetric exchange-only run
  double max_norm_drift = 0.0;
  double max_charge_drift = 0.0;
  int trajectory_samples = 0;
  auto asymmetric = symmetric_rwa_config(3, 0.9);
  asymmetric.arms[0].envelope = square_pulse(1.2);
  asymmetric.arms[1].detuning = 1.4;
  asymmetric.arms[2].detuning = -0.6;
  asymmetric.excitation_amplitudes = {Complex(0.8), Complex(0.0, 0.36), Complex(0.48)};
  asymmetric.validate();
  for (const auto& config : {symmetric_rwa_config(3, pi / 2), asymmetric}) {
    const auto basis = basis_for(config);
    std::vector<RealVector> charges;
    for (int arm = 0; arm < config.arm_count(); ++arm)
      charges.push_back(conserved_charge_diagonal(basis, arm));
    const auto series =
        time_series(initial_state(config, basis), config, linspace(0.0, 1.0, 500));
    std::vector<double> initial_charges;
    for (const auto& diagonal : charges)
      initial_charges.push_back(
          diagonal.dot(series.front().amplitudes().cwiseAbs2()));
    for (const auto& state : series) {
      ++trajectory_samples;
      max_norm_drift = std::max(max_norm_drift, std::abs(state.norm() - 1.0));
      for (std::size_t arm = 0; arm < charges.size(); ++arm)
        max_charge_drift = std::max(
            max_charge_drift,
            std::abs(charges[arm].dot(state.amplitudes().cwiseAbs2()) -
                     initial_charges[arm]));
    }
  }

  std::mt19937 rng(4111);
  const std::vector<std::vector<int>> dim_choices = {{2, 2}, {2, 3}, {3, 2}, {2, 4}};
  double max_involution_gap = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const auto& dims = dim_choices[draw % dim_choices.size()];
    const auto rho = random_density(rng, dims);
    const std::vector<int> axes = draw % 3 == 2 ? std::vector<int>{0, 1}
                                                : std::vector<int>{draw % 2};
    const auto twice = partial_transpose(partial_transpose(rho, axes), axes);
    max_involution_gap =
        std::max(max_involution_gap,
                 (twice.matrix() - rho.matrix()).cwiseAbs().maxCoeff());
  }

  double max_unitary_gap = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const auto& dims = dim_choices[draw % 2 == 0 ? 0 : 1];
    const auto rho =
        draw % 3 == 0 ? random_pure_density(rng, dims) : random_density(rng, dims);
    const Matrix rotation =
        kron(random_unitary(rng, dims[0]), random_unitary(rng, dims[1]));
    const DensityMatrix rotated(dims, rotation * rho.matrix() * rotation.adjoint());
    max_unitary_gap = std::max(
        max_unitary_gap, std::abs(negativity(rotated, 0) - negativity(rho, 0)));
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double min_witness = 1.0;
  for (int draw = 0; draw < 1000; ++draw) {
    Matrix rho = Matrix::Zero(8, 8);
    const int parts = 1 + draw % 3; // mixtures across splits stay biseparable
    double total = 0.0;
    std::vector<double> weights(parts);
    for (auto& w : weights) total += (w = 0.1 + unit(rng));
    for (int part = 0; part < parts; ++part)
      rho += (weights[part] / total) *
             biseparable_pure(rng, static_cast<int>(rng() % 3));
    min_witness = std::min(
        min_witness, witness_expectation(DensityMatrix({2, 2, 2}, std::move(rho))));
  }

  const bool passed = max_norm_drift < 1e-10 && max_charge_drift < 1e-8 &&
                      max_involution_gap < 1e-15 && max_unitary_gap < 1e-10 &&
                      min_witness > -1e-10;
  return {"", passed,
          std::to_string(trajectory_samples) +
              " trajectory samples: max |norm - 1| = " + fmt(max_norm_drift) +
              " (tol 1e-10), max per-arm charge drift = " + fmt(max_charge_drift) +
              " (tol 1e-8); 1000 draws each: double partial transpose gap = " +
              fmt(max_involution_gap) + ", local-unitary negativity gap = " +
              fmt(max_unitary_gap) + " (tol 1e-10), min biseparable witness = " +
              fmt(min_witness) + " (floor -1e-10)"};
}

} // namespace

std::vector<CheckResult> run_all_checks() {
  return {
      guarded("optimum-matches-closed-form", check_optimum_closed_form),
      guarded("tripartite-optimum", check_tripartite_optimum),
      guarded("detuned-probability-closed-form", check_detuned_oracle),
      guarded("heralded-content-constant", check_conditional_structure),
      guarded("traced-register-identity", check_traced_register_identity),
      guarded("weighted-transfer-identities", check_weighted_transfer),
      guarded("mismatch-fidelity-law", check_mismatch_law),
      guarded("counter-rotating-scaling", check_counter_rotating_scaling),
      guarded("gaussian-envelope-limits", check_gaussian_envelope),
      guarded("randomized-invariants", check_randomized_invariants),
  };
}

int report(const std::vector<CheckResult>& results, std::ostream& out) {
  int failures = 0;
  for (const auto& result : results) {
    out << (result.passed ? "PASS " : "FAIL ") << result.name << " - " << result.detail
        << '\n';
    if (!result.passed) ++failures;
  }
  if (failures == 0)
    out << "all " << results.size() << " checks passed\n";
  else
    out << failures << " of " << results.size() << " checks failed\n";
  return failures;
}

} // namespace verify
} // namespace heraldsim
