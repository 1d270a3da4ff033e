#include "heraldsim/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace heraldsim {
namespace analytic {

namespace {

void check_arms(int arms) {
  if (arms < 1) throw std::invalid_argument("analytic: arm count must be >= 1");
}

// sin(x)/x, series below the switch point to avoid 0/0
double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-6) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

} // namespace

LocalAmplitudes local_amplitudes(double area, double delta) {
  const double gt = std::hypot(area, delta);
  const double sc = sinc(gt);
  const Complex c_minus(std::cos(gt), -delta * sc);
  return LocalAmplitudes{c_minus, std::conj(c_minus), area * sc};
}

double p_heralding(int arms, double area, double delta) {
  check_arms(arms);
  const auto amp = local_amplitudes(area, delta);
  return amp.s * amp.s * std::pow(std::norm(amp.c_minus), arms - 1);
}

double g_optimal(int arms) {
  check_arms(arms);
  return std::acos(std::sqrt((arms - 1.0) / arms));
}

double p_max(int arms) {
  check_arms(arms);
  if (arms == 1) return 1.0;
  return (1.0 / arms) * std::pow((arms - 1.0) / arms, arms - 1);
}

double p_max_asymptotic(int arms) {
  check_arms(arms);
  return std::exp(-1.0) / arms;
}

double pairwise_negativity_wn(int arms) {
  if (arms < 2) throw std::invalid_argument("analytic: pair measures need >= 2 arms");
  const double m = arms - 2.0;
  return (std::sqrt(m * m + 4.0) - m) / (2.0 * arms);
}

std::array<double, 4> pairwise_pt_eigenvalues(int arms) {
  if (arms < 2) throw std::invalid_argument("analytic: pair measures need >= 2 arms");
  const double m = arms - 2.0;
  const double root = std::sqrt(m * m + 4.0);
  return {(m - root) / (2.0 * arms), 1.0 / arms, 1.0 / arms, (m + root) / (2.0 * arms)};
}

std::vector<Complex> alpha_weights(const std::vector<double>& areas,
                                   const std::vector<double>& deltas,
                                   const std::vector<double>& phases) {
  const size_t n = areas.size();
  if (deltas.size() != n || phases.size() != n)
    throw std::invalid_argument("analytic: per-arm parameter lists differ in size");
  if (n == 0) throw std::invalid_argument("analytic: no arms given");

  std::vector<LocalAmplitudes> amps;
  amps.reserve(n);
  for (size_t j = 0; j < n; ++j) amps.push_back(local_amplitudes(areas[j], deltas[j]));

  std::vector<Complex> alpha(n);
  for (size_t j = 0; j < n; ++j) {
    Complex prod = amps[j].s * std::exp(imag_unit * phases[j]);
    for (size_t k = 0; k < n; ++k)
      if (k != j) prod *= amps[k].c_minus;
    alpha[j] = prod;
  }
  return alpha;
}

std::vector<double> normalized_pathway_weights(const std::vector<Complex>& alpha) {
  double total = 0.0;
  for (const Complex& a : alpha) total += std::norm(a);
  if (total <= 0.0)
    throw std::invalid_argument("analytic: pathway weights vanish identically");
  std::vector<double> w(alpha.size());
  for (size_t j = 0; j < alpha.size(); ++j) w[j] = std::norm(alpha[j]) / total;
  return w;
}

double fidelity_perturbed(const std::vector<Complex>& alpha,
                          const std::vector<double>& target_phases) {
  if (alpha.empty()) throw std::invalid_argument("analytic: no pathway weights given");
  if (!target_phases.empty() && target_phases.size() != alpha.size())
    throw std::invalid_argument("analytic: target phase list mismatched");
  Complex overlap = 0.0;
  double total = 0.0;
  for (size_t j = 0; j < alpha.size(); ++j) {
    const Complex rot =
        target_phases.empty() ? Complex(1.0) : std::exp(-imag_unit * target_phases[j]);
    overlap += alpha[j] * rot;
    total += std::norm(alpha[j]);
  }
  if (total <= 0.0)
    throw std::invalid_argument("analytic: pathway weights vanish identically");
  return std::norm(overlap) / (static_cast<double>(alpha.size()) * total);
}

double bloch_siegert_delta_eff(double area, double detuning, double window,
                               double omega_plus, double kappa) {
  if (window <= 0.0) throw std::invalid_argument("analytic: window must be > 0");
  if (omega_plus <= 0.0)
    throw std::invalid_argument("analytic: omega_plus must be > 0");
  return detuning * window / 2.0 + kappa * area * area / (omega_plus * window);
}

double pair_negativity_weighted(Complex c_a, Complex c_b, double rest_weight) {
  if (rest_weight < -1e-12)
    throw std::invalid_argument("analytic: rest weight must be >= 0");
  const double half = std::max(rest_weight, 0.0) / 2.0;
  return std::sqrt(half * half + std::norm(c_a) * std::norm(c_b)) - half;
}

} // namespace analytic
} // namespace heraldsim
