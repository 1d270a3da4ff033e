#pragma once

#include <array>
#include <vector>

#include "heraldsim/types.hpp"

namespace heraldsim {
namespace analytic {

// Closed-form single-arm amplitudes after accumulated area g at normalized
// detuning delta = Delta*t/2, with gt = sqrt(g^2 + delta^2):
//   ground-manifold survival  c_minus = cos gt - i (delta/gt) sin gt
//   excited-manifold survival c_plus  = conj(c_minus)
//   transfer                  s       = (g/gt) sin gt
// The arm maps (in the symmetric rotating frame)
//   |n0, g> -> c_minus |n0, g> - i s |n0 - 1, e>
//   |n0, e> -> c_plus  |n0, e> - i s |n0 + 1, g>
struct LocalAmplitudes {
  Complex c_minus;
  Complex c_plus;
  double s;
};

// series-stable at small gt (sinc expansion below 1e-6)
LocalAmplitudes local_amplitudes(double area, double delta);

// probability of finding every TLS in the ground state after the pulse,
// s^2 |c_minus|^(2(N-1))
double p_heralding(int arms, double area, double delta = 0.0);

// resonant optimum: cos^2 g_opt = (N-1)/N
double g_optimal(int arms);
double p_max(int arms);
double p_max_asymptotic(int arms); // e^{-1}/N

// two-electron reduced state of the N-partite heralded state:
// negativity (sqrt((N-2)^2 + 4) - (N-2)) / (2N) ...
double pairwise_negativity_wn(int arms);
// ... and the full partial-transpose spectrum, ascending
std::array<double, 4> pairwise_pt_eigenvalues(int arms);

// heralded pathway weights for per-arm (area, delta, phase):
//   alpha_j = e^{i phase_j} s_j prod_{k != j} c_minus_k
std::vector<Complex> alpha_weights(const std::vector<double>& areas,
                                   const std::vector<double>& deltas,
                                   const std::vector<double>& phases);
std::vector<double> normalized_pathway_weights(const std::vector<Complex>& alpha);

// overlap of the normalized heralded state with the equal-weight target of
// phases phi: F = |sum_j alpha_j e^{-i phi_j}|^2 / (N sum_j |alpha_j|^2)
double fidelity_perturbed(const std::vector<Complex>& alpha,
                          const std::vector<double>& target_phases = {});

// effective detuning capturing the counter-rotating (Bloch-Siegert) shift of
// a resonant square pulse: delta_eff = Delta*T/2 + kappa g^2 / (omega_plus T)
double bloch_siegert_delta_eff(double area, double detuning, double window,
                               double omega_plus, double kappa = 6.0);

// pair negativity of c_a |+0> + c_b |0+> mixed with weight `rest` of |00>
double pair_negativity_weighted(Complex c_a, Complex c_b, double rest_weight);

} // namespace analytic
} // namespace heraldsim
