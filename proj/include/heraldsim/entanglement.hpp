#pragma once

#include <map>
#include <utility>
#include <vector>

#include "heraldsim/basis.hpp"

namespace heraldsim {

// (trace norm of the partial transpose - 1)/2, from a Hermitian eigensolve;
// errors: std::invalid_argument unless rho has exactly two subsystems
double negativity(const DensityMatrix& rho, int transpose_on);

struct PairNegativityReport {
  std::map<std::pair<int, int>, double> pair_values; // unordered pairs (a < b)
  double average = 0.0;
  double leakage = 0.0; // weight outside the {0, +1} manifold (encoding on)
};

// one negativity per unordered pair after tracing out the other subsystems;
// with the effective encoding each odd ladder is first compressed to its
// {offset 0, offset +1} levels.  errors: std::invalid_argument on fewer than
// two subsystems, or leakage > 1e-6 with the encoding enabled
PairNegativityReport pairwise_negativity_report(const DensityMatrix& rho_multi,
                                                bool effective_qubit_encoding);

// -sum lambda log2 lambda, eigenvalues below 1e-12 dropped
double von_neumann_entropy(const DensityMatrix& rho);

// ((N-1)/N) - <W(phases)|rho|W(phases)> over an all-qubit register; a
// negative value certifies genuine multipartite entanglement.
// errors: std::invalid_argument on non-qubit subsystems or mis-sized phases
double witness_expectation(const DensityMatrix& rho,
                           const std::vector<double>& phases = {});

// probability times conditional average pairwise negativity
double success_weighted_yield(double probability,
                              double conditional_average_negativity);

// reduced state of the kept subsystems of a pure register state, accumulated
// from amplitude groups without materializing the full density matrix;
// errors: std::invalid_argument on an invalid keep list or a kept block
// larger than 4096
DensityMatrix reduced_state(const PureState& state, const std::vector<int>& keep);

// compression of every ladder onto its {offset 0, offset +1} levels, with
// the discarded weight reported; qubit subsystems pass through
struct QubitEncoding {
  DensityMatrix state;
  double leakage = 0.0;
};
QubitEncoding effective_qubit_state(const DensityMatrix& rho);
QubitEncoding effective_qubit_state(const PureState& state);

} // namespace heraldsim
