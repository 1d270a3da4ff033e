#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "heraldsim/analytic.hpp"
#include "heraldsim/evolve.hpp"
#include "heraldsim/herald.hpp"

using namespace heraldsim;

namespace {

HeraldResult evolve_and_herald(const SystemConfig& cfg) {
  const auto basis = basis_for(cfg);
  return project_all_ground(propagate(initial_state(cfg, basis), cfg, 0.0, 1.0));
}

} // namespace

TEST_CASE("optimal symmetric pulse heralds at the closed-form maximum") {
  const auto cfg = symmetric_rwa_config(3, analytic::g_optimal(3));
  const auto result = evolve_and_herald(cfg);

  CHECK(result.probability == doctest::Approx(4.0 / 27.0).epsilon(1e-9));
  CHECK(result.probability == doctest::Approx(analytic::p_max(3)).epsilon(1e-12));
  CHECK_FALSE(result.degenerate);

  // every pathway carries -i sin(g) cos^2(g) / sqrt(3)
  const double g = analytic::g_optimal(3);
  const Complex expected(0.0, -std::sin(g) * std::cos(g) * std::cos(g) / std::sqrt(3.0));
  REQUIRE(result.branch_amplitudes.size() == 3);
  for (const Complex& b : result.branch_amplitudes) CHECK(std::abs(b - expected) < 1e-9);
  CHECK(std::abs(result.passive_amplitude) < 1e-12);

  const auto target = target_w_state(3, cfg.sideband_cut);
  CHECK(conditional_fidelity(result, target) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("detuned heralding matches the closed-form probability") {
  for (double delta : {0.0, 0.7, -1.4}) {
    const auto cfg = symmetric_rwa_config(2, 0.9, delta);
    const auto result = evolve_and_herald(cfg);
    CHECK(result.probability ==
          doctest::Approx(analytic::p_heralding(2, 0.9, delta)).epsilon(1e-9));
    // symmetric arms keep the target fidelity at one even off resonance
    const auto target = target_w_state(2, cfg.sideband_cut);
    CHECK(conditional_fidelity(result, target) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("mismatched arms reproduce the pathway-weight fidelity") {
  const std::vector<double> areas{0.9, 1.2, 0.75};
  const std::vector<double> deltas{0.4, -0.8, 1.1}; // Delta*T/2 over a unit window
  const std::vector<double> phases{0.3, -0.9, 1.7};

  SystemConfig cfg;
  for (int j = 0; j < 3; ++j)
    cfg.arms.push_back(ArmParams{square_pulse(areas[j]), 2.0 * deltas[j], phases[j]});
  const auto result = evolve_and_herald(cfg);

  const auto alpha = analytic::alpha_weights(areas, deltas, phases);
  double p = 0.0;
  for (const Complex& a : alpha) p += std::norm(a) / 3.0;
  CHECK(result.probability == doctest::Approx(p).epsilon(1e-9));

  // pathway weights seen by the register match |alpha_j|^2 up to the herald
  const auto weights = analytic::normalized_pathway_weights(alpha);
  for (int j = 0; j < 3; ++j)
    CHECK(std::norm(result.branch_amplitudes[j]) / result.probability ==
          doctest::Approx(weights[j]).epsilon(1e-8));

  const auto plain_target = target_w_state(3, cfg.sideband_cut);
  CHECK(conditional_fidelity(result, plain_target) ==
        doctest::Approx(analytic::fidelity_perturbed(alpha)).epsilon(1e-8));

  // collecting with the emission phases cancels them out of the overlap
  const auto matched_target = target_w_state(3, cfg.sideband_cut, phases);
  CHECK(conditional_fidelity(result, matched_target) ==
        doctest::Approx(analytic::fidelity_perturbed(alpha, phases)).epsilon(1e-8));
}

TEST_CASE("partially excited registers keep the passive pathway") {
  SystemConfig cfg = symmetric_rwa_config(2, 0.8, 0.5);
  cfg.excitation_amplitudes = {0.6, 0.6};
  cfg.ground_amplitude = std::sqrt(1.0 - 0.72);
  const auto result = evolve_and_herald(cfg);

  const auto amp = analytic::local_amplitudes(0.8, 0.5);
  const Complex spectator = std::exp(imag_unit * 0.5) * amp.c_minus;
  const Complex expected_passive = cfg.ground_amplitude * spectator * spectator;
  CHECK(std::abs(result.passive_amplitude - expected_passive) < 1e-9);

  const Complex kick = std::exp(imag_unit * 0.5) * Complex(0.0, -amp.s);
  double p = std::norm(expected_passive);
  for (int j = 0; j < 2; ++j) p += std::norm(Complex(0.6) * kick * spectator);
  CHECK(result.probability == doctest::Approx(p).epsilon(1e-9));
}

TEST_CASE("TLS readout patterns form the closed-form distribution") {
  const double g = 1.1;
  const auto cfg = symmetric_rwa_config(2, g);
  const auto basis = basis_for(cfg);
  const auto probs = branch_probabilities(propagate(initial_state(cfg, basis), cfg, 0.0, 1.0));

  const double c = std::cos(g), s = std::sin(g);
  REQUIRE(probs.size() == 4);
  CHECK(probs[0] == doctest::Approx(s * s * c * c).epsilon(1e-9));       // g, g
  CHECK(probs[1] == doctest::Approx(0.5 * (c * c * c * c + s * s * s * s)).epsilon(1e-9));
  CHECK(probs[2] == doctest::Approx(0.5 * (c * c * c * c + s * s * s * s)).epsilon(1e-9));
  CHECK(probs[3] == doctest::Approx(s * s * c * c).epsilon(1e-9));       // e, e
  CHECK(probs[0] + probs[1] + probs[2] + probs[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unconditional electron state mixes the kicked and unkicked lines") {
  const double g = 0.7;
  const auto cfg = symmetric_rwa_config(1, g);
  const auto basis = basis_for(cfg);
  const auto rho = unconditional_electron_state(propagate(initial_state(cfg, basis), cfg, 0.0, 1.0));

  const auto eb = electron_basis(1, cfg.sideband_cut);
  const auto at = [&](int m) { return eb.index_of({eb.digit_of_offset(m)}); };
  CHECK(rho.matrix()(at(0), at(0)).real() == doctest::Approx(std::cos(g) * std::cos(g)).epsilon(1e-9));
  CHECK(rho.matrix()(at(1), at(1)).real() == doctest::Approx(std::sin(g) * std::sin(g)).epsilon(1e-9));
  // the two lines sit in orthogonal TLS branches: no coherence survives
  CHECK(std::abs(rho.matrix()(at(1), at(0))) < 1e-12);
  const double purity = rho.matrix().squaredNorm();
  CHECK(purity == doctest::Approx(std::pow(std::cos(g), 4) + std::pow(std::sin(g), 4)).epsilon(1e-9));
}

TEST_CASE("a never-excited register heralds degenerately") {
  const auto basis = build_basis(2, 2);
  // both TLS excited with certainty and no pulse: no all-ground component
  SystemConfig cfg = symmetric_rwa_config(2, 0.0);
  const auto result = project_all_ground(initial_state(cfg, basis));
  CHECK(result.probability == doctest::Approx(0.0));
  CHECK(result.degenerate);
  CHECK_FALSE(result.conditional_state.has_value());
  CHECK_THROWS_AS(conditional_fidelity(result, target_w_state(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("restricted-sector heralding agrees with the full register") {
  SystemConfig cfg;
  cfg.arms.push_back(ArmParams{square_pulse(0.8), 0.9, 0.2});
  cfg.arms.push_back(ArmParams{square_pulse(1.1), -0.3, -0.6});
  cfg.arms.push_back(ArmParams{square_pulse(0.5), 1.6, 1.0});
  const auto basis = basis_for(cfg);
  const auto psi0 = initial_state(cfg, basis);

  const auto full = project_all_ground(propagate(psi0, cfg, 0.0, 1.0));

  const auto sector = rwa_reachable_subspace(basis, psi0);
  const GeneratorTable table(cfg, sector);
  const auto restricted = project_all_ground(
      sector, propagate_vector(table, sector.project(psi0.amplitudes()), 0.0, 1.0));

  CHECK(restricted.probability == doctest::Approx(full.probability).epsilon(1e-12));
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(restricted.branch_amplitudes[j] - full.branch_amplitudes[j]) < 1e-12);
  REQUIRE(restricted.conditional_state.has_value());
  CHECK((restricted.conditional_state->amplitudes() -
         full.conditional_state->amplitudes())
            .lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("six-arm sector run lands on the closed-form optimum") {
  const double g = analytic::g_optimal(6);
  SystemConfig cfg = symmetric_rwa_config(6, g, 0.0, 1);
  const auto basis = basis_for(cfg);
  const auto psi0 = initial_state(cfg, basis);
  const auto sector = rwa_reachable_subspace(basis, psi0);
  CHECK(sector.dim() == 6 * 64);

  const GeneratorTable table(cfg, sector);
  const auto result = project_all_ground(
      sector, propagate_vector(table, sector.project(psi0.amplitudes()), 0.0, 1.0));
  CHECK(result.probability == doctest::Approx(analytic::p_max(6)).epsilon(1e-8));
  CHECK(conditional_fidelity(result, target_w_state(6, 1)) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("equal-weight targets are well-formed") {
  const auto w = target_w_state(4, 2);
  CHECK(std::abs(w.norm() - 1.0) < 1e-12);
  const auto eb = electron_basis(4, 2);
  std::vector<int> digits(4, eb.digit_of_offset(0));
  digits[2] = eb.digit_of_offset(1);
  CHECK(std::abs(w.amplitudes()(eb.index_of(digits)) - Complex(0.5)) < 1e-12);

  const auto phased = target_w_state(2, 1, {0.0, pi});
  const auto eb2 = electron_basis(2, 1);
  const auto kick2 = eb2.index_of({eb2.digit_of_offset(0), eb2.digit_of_offset(1)});
  CHECK(std::abs(phased.amplitudes()(kick2) + Complex(1.0 / std::sqrt(2.0))) < 1e-12);

  CHECK_THROWS_AS(target_w_state(2, 1, {0.1}), std::invalid_argument);
  // electron-only registers cannot be heralded
  const auto eonly = PureState(eb2, Vector::Unit(9, 0));
  CHECK_THROWS_AS(project_all_ground(eonly), std::invalid_argument);
}

TEST_CASE("traced-register fidelity agrees with the dense electron state") {
  // mid-pulse symmetric run: the target overlap of the traced electron state
  // must equal both the dense quadratic form and the heralding probability
  const auto cfg = symmetric_rwa_config(3, 0.8, 0.35);
  const auto basis = basis_for(cfg);
  const auto state = propagate(initial_state(cfg, basis), cfg, 0.0, 1.0);
  const auto target = target_w_state(3, cfg.sideband_cut);

  const double traced = unconditional_fidelity(state, target);
  const auto rho = unconditional_electron_state(state);
  const Complex dense = target.amplitudes().dot(rho.matrix() * target.amplitudes());
  CHECK(traced == doctest::Approx(dense.real()).epsilon(1e-12));
  // symmetric arms: the conditional state is the target, so the overlap
  // collapses onto the post-selection probability
  CHECK(traced == doctest::Approx(project_all_ground(state).probability).epsilon(1e-10));

  const auto wrong_register = target_w_state(3, cfg.sideband_cut + 1);
  CHECK_THROWS_AS(unconditional_fidelity(state, wrong_register), std::invalid_argument);
}

TEST_CASE("weighted targets normalise and reduce to the equal-weight case") {
  const Complex wa(0.3, 0.4), wb(-0.5, 0.0), wc(0.0, 1.2);
  const auto t = target_weighted_state(3, 2, {wa, wb, wc});
  CHECK(std::abs(t.norm() - 1.0) < 1e-12);
  const auto eb = electron_basis(3, 2);
  const double scale = std::sqrt(std::norm(wa) + std::norm(wb) + std::norm(wc));
  std::vector<int> digits(3, eb.digit_of_offset(0));
  digits[1] = eb.digit_of_offset(1);
  CHECK(std::abs(t.amplitudes()(eb.index_of(digits)) - wb / scale) < 1e-12);

  const auto equal = target_weighted_state(3, 2, {Complex(1), Complex(1), Complex(1)});
  CHECK((equal.amplitudes() - target_w_state(3, 2).amplitudes()).norm() < 1e-12);

  CHECK_THROWS_AS(target_weighted_state(3, 2, {wa, wb}), std::invalid_argument);
  CHECK_THROWS_AS(target_weighted_state(2, 1, {Complex(0), Complex(0)}),
                  std::invalid_argument);
}
