#pragma once

#include <optional>
#include <vector>

#include "heraldsim/basis.hpp"

namespace heraldsim {

// below this post-selection probability the conditional state is not formed
inline constexpr double herald_floor = 1e-14;

// Outcome of post-selecting every TLS onto its ground state.  The electron
// register keeps the single-kick pathway amplitudes
//   branch_amplitudes[j] = < +1 on arm j, 0 elsewhere; all ground | psi >
// plus the never-excited pathway
//   passive_amplitude    = < all offsets 0; all ground | psi >.
struct HeraldResult {
  double probability = 0.0;
  bool degenerate = false; // probability below herald_floor
  std::vector<Complex> branch_amplitudes;
  Complex passive_amplitude{0.0};
  std::optional<PureState> conditional_state; // electron sector; absent if degenerate
};

// errors: std::invalid_argument on an electron-only register
HeraldResult project_all_ground(const PureState& state);
// restricted-sector form; `amplitudes` indexes the sector rows
HeraldResult project_all_ground(const Subspace& sector, const Vector& amplitudes);

// equal-weight single-kick target (1/sqrt(N)) sum_j e^{i phases[j]} |0..+1_j..0>
// over the electron register; empty phases mean all zero
PureState target_w_state(int arms, int sideband_cut,
                         const std::vector<double>& phases = {});

// general single-kick target sum_j w_j |0..+1_j..0>, normalised internally;
// errors: std::invalid_argument on a weight-count mismatch or all-zero weights
PureState target_weighted_state(int arms, int sideband_cut,
                                const std::vector<Complex>& weights);

// <target|rho_cond|target>; errors: std::invalid_argument on a degenerate
// result or a target over a different register
double conditional_fidelity(const HeraldResult& result, const PureState& target);

// electron reduced state with the TLS register traced out (no post-selection);
// errors: std::invalid_argument when the electron dimension exceeds 2048
DensityMatrix unconditional_electron_state(const PureState& state);

// <target| Tr_TLS |psi><psi| |target> evaluated without densifying; errors:
// std::invalid_argument on an electron-only register or mismatched target
double unconditional_fidelity(const PureState& state, const PureState& electron_target);

// probability of each TLS readout pattern, indexed by the register's TLS
// block (arm 1 most significant, bit value 1 = excited)
std::vector<double> branch_probabilities(const PureState& state);

} // namespace heraldsim
