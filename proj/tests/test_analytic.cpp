#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "heraldsim/analytic.hpp"

using namespace heraldsim;
using namespace heraldsim::analytic;

TEST_CASE("local amplitudes at anchor points") {
  // resonant: plain rotation
  const auto res = local_amplitudes(0.7, 0.0);
  CHECK(std::abs(res.c_minus - Complex(std::cos(0.7))) < 1e-15);
  CHECK(res.s == doctest::Approx(std::sin(0.7)).epsilon(1e-15));

  // pure detuning: phase evolution only
  const auto det = local_amplitudes(0.0, 1.0);
  CHECK(std::abs(det.c_minus - std::exp(Complex(0.0, -1.0))) < 1e-15);
  CHECK(det.s == 0.0);

  // g = delta = 1: gt = sqrt 2
  const auto both = local_amplitudes(1.0, 1.0);
  CHECK(both.s == doctest::Approx(0.6984559986366083).epsilon(1e-14));
  CHECK(std::abs(both.c_minus -
                 Complex(std::cos(std::sqrt(2.0)),
                         -std::sin(std::sqrt(2.0)) / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(both.c_plus - std::conj(both.c_minus)) == 0.0);
}

TEST_CASE("local amplitudes: unitarity and small-argument series") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const auto amp = local_amplitudes(u(rng), u(rng));
    CHECK(std::abs(std::norm(amp.c_minus) + amp.s * amp.s - 1.0) < 1e-12);
  }
  // series branch agrees with the direct formula near the switch point
  for (const double scale : {2e-6, 1e-6, 8e-7, 1e-9}) {
    const auto amp = local_amplitudes(scale * 0.6, scale * 0.8);
    CHECK(std::abs(amp.s - 0.6 * scale) < 1e-18);
    CHECK(std::abs(amp.c_minus - Complex(1.0 - scale * scale / 2, -0.8 * scale)) <
          1e-16);
  }
  CHECK(local_amplitudes(0.0, 0.0).s == 0.0);
  CHECK(std::abs(local_amplitudes(0.0, 0.0).c_minus - Complex(1.0)) == 0.0);
}

TEST_CASE("heralding probability closed form") {
  // N = 2 resonant at g = pi/4: sin^2 cos^2 = 1/4
  CHECK(p_heralding(2, pi / 4) == doctest::Approx(0.25).epsilon(1e-14));
  // three-arm optimum
  CHECK(p_heralding(3, 0.6154797086703874) ==
        doctest::Approx(4.0 / 27.0).epsilon(1e-12));

  // matches the explicit detuned expression on a grid
  for (const double g : {0.3, 0.61548, 1.1}) {
    for (const double d : {-2.0, -0.4, 0.0, 0.7, 3.0}) {
      const double gt = std::sqrt(g * g + d * d);
      const double s2 = (g * g / (gt * gt)) * std::sin(gt) * std::sin(gt);
      const double c2 = std::cos(gt) * std::cos(gt) +
                        (d * d / (gt * gt)) * std::sin(gt) * std::sin(gt);
      for (const int n : {1, 2, 3, 5}) {
        CHECK(p_heralding(n, g, d) ==
              doctest::Approx(s2 * std::pow(c2, n - 1)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("optimal area and maximal probability") {
  CHECK(g_optimal(1) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(g_optimal(2) == doctest::Approx(0.7853981633974483).epsilon(1e-15));
  CHECK(g_optimal(3) == doctest::Approx(0.6154797086703874).epsilon(1e-15));
  CHECK(g_optimal(4) == doctest::Approx(pi / 6).epsilon(1e-14));
  CHECK(g_optimal(8) == doctest::Approx(0.36136712390670783).epsilon(1e-15));

  CHECK(p_max(1) == 1.0);
  CHECK(p_max(2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p_max(3) == doctest::Approx(0.14814814814814814).epsilon(1e-15));
  CHECK(p_max(4) == doctest::Approx(0.10546875).epsilon(1e-15));
  CHECK(p_max(8) == doctest::Approx(0.04908698797225952).epsilon(1e-15));

  // p_max sits at g_optimal: nearby areas do worse
  for (const int n : {2, 3, 5, 8}) {
    CHECK(p_max(n) == doctest::Approx(p_heralding(n, g_optimal(n))).epsilon(1e-14));
    CHECK(p_heralding(n, g_optimal(n) + 1e-3) < p_max(n));
    CHECK(p_heralding(n, g_optimal(n) - 1e-3) < p_max(n));
  }

  // 1/(eN) asymptote approached from above, within 1% by N = 100
  const double r100 = p_max(100) / p_max_asymptotic(100);
  CHECK(r100 > 1.0);
  CHECK(r100 < 1.01);
  CHECK(p_max(1000) * 1000 * std::exp(1.0) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("pairwise negativity of the heralded state") {
  CHECK(pairwise_negativity_wn(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pairwise_negativity_wn(3) ==
        doctest::Approx(0.2060113295832983).epsilon(1e-15));
  CHECK(pairwise_negativity_wn(3) ==
        doctest::Approx((std::sqrt(5.0) - 1.0) / 6.0).epsilon(1e-15));

  // spectrum: ascending, sums to one, lowest eigenvalue is minus the negativity
  for (const int n : {2, 3, 4, 7, 20}) {
    const auto ev = pairwise_pt_eigenvalues(n);
    CHECK(ev[0] <= ev[1]);
    CHECK(ev[1] <= ev[3]);
    CHECK(ev[0] + ev[1] + ev[2] + ev[3] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(-ev[0] == doctest::Approx(pairwise_negativity_wn(n)).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(1.0 / n).epsilon(1e-14));
  }
  CHECK(pairwise_pt_eigenvalues(3)[3] ==
        doctest::Approx((1.0 + std::sqrt(5.0)) / 6.0).epsilon(1e-14));

  // 1/N^2 tail: N^2 * negativity -> 1 within 1% at N = 1000
  CHECK(1000.0 * 1000.0 * pairwise_negativity_wn(1000) ==
        doctest::Approx(1.0).epsilon(0.01));

  // consistency with the weighted-pair form at equal weights
  for (const int n : {2, 3, 4, 6}) {
    const double c = 1.0 / std::sqrt(static_cast<double>(n));
    CHECK(pair_negativity_weighted(c, c, (n - 2.0) / n) ==
          doctest::Approx(pairwise_negativity_wn(n)).epsilon(1e-14));
  }
  // frozen brute-force value at (theta, phi) = (pi/3, pi/5)
  const double a = std::cos(pi / 3), b = std::sin(pi / 3) * std::cos(pi / 5),
               c = std::sin(pi / 3) * std::sin(pi / 5);
  CHECK(pair_negativity_weighted(a, b, c * c) ==
        doctest::Approx(0.24394565154137168).epsilon(1e-14));
}

TEST_CASE("pathway weights and perturbed fidelity") {
  // symmetric arms: equal weights, unit fidelity
  const std::vector<double> g3(3, 0.61548), d3(3, 0.0), p3(3, 0.0);
  const auto alpha = alpha_weights(g3, d3, p3);
  REQUIRE(alpha.size() == 3);
  CHECK(std::abs(alpha[0] - alpha[1]) < 1e-15);
  CHECK(std::abs(alpha[0] - Complex(std::sin(0.61548) * std::cos(0.61548) *
                                    std::cos(0.61548))) < 1e-15);
  const auto w = normalized_pathway_weights(alpha);
  CHECK(w[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(fidelity_perturbed(alpha) == doctest::Approx(1.0).epsilon(1e-14));

  // target phases rotate pathways back into alignment
  const std::vector<double> phases = {0.3, -1.1, 2.0};
  const auto alpha_ph = alpha_weights(g3, d3, phases);
  CHECK(fidelity_perturbed(alpha_ph, phases) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity_perturbed(alpha_ph) < 1.0);

  // coupling mismatch g(1+eta), g, g(1-eta): weights strictly ordered
  const double g = 0.6154797086703874, eta = 0.08;
  const auto am = alpha_weights({g * (1 + eta), g, g * (1 - eta)}, d3, p3);
  const auto wm = normalized_pathway_weights(am);
  CHECK(wm[0] > wm[1]);
  CHECK(wm[1] > wm[2]);
  CHECK(wm[0] + wm[1] + wm[2] == doctest::Approx(1.0).epsilon(1e-14));

  // second-order variance law: 1 - F = (1/N) sum |eps_j - mean|^2 + O(eps^3)
  std::mt19937 rng(314159);
  std::uniform_real_distribution<double> u(-1e-3, 1e-3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Complex> a4;
    Complex mean = 0.0;
    std::vector<Complex> eps;
    for (int j = 0; j < 4; ++j) {
      eps.push_back(Complex(u(rng), u(rng)));
      a4.push_back(1.0 + eps.back());
      mean += eps.back() / 4.0;
    }
    double law = 0.0;
    for (const auto& e : eps) law += std::norm(e - mean) / 4.0;
    if (law < 1e-10) continue; // degenerate draw, relative comparison unstable
    const double lhs = 1.0 - fidelity_perturbed(a4);
    CHECK(std::abs(lhs - law) < 0.01 * law);
  }
}

TEST_CASE("counter-rotating detuning shift") {
  CHECK(bloch_siegert_delta_eff(0.6, 0.0, 10.0, 2.0, 6.0) ==
        doctest::Approx(0.108).epsilon(1e-14));
  // default kappa is 6
  CHECK(bloch_siegert_delta_eff(0.6, 0.0, 10.0, 2.0) ==
        doctest::Approx(0.108).epsilon(1e-14));
  // detuning contributes Delta*T/2
  CHECK(bloch_siegert_delta_eff(0.6, 0.2, 10.0, 2.0, 6.0) ==
        doctest::Approx(1.0 + 0.108).epsilon(1e-12));
  // shift falls off as 1/(omega_plus T)
  CHECK(bloch_siegert_delta_eff(0.6, 0.0, 100.0, 2.0, 6.0) ==
        doctest::Approx(0.0108).epsilon(1e-12));
}
