#include "heraldsim/herald.hpp"

#include <cmath>
#include <stdexcept>

namespace heraldsim {

namespace {

void require_tls(const BasisDescriptor& basis) {
  if (!basis.has_tls)
    throw std::invalid_argument("herald: requires the electron+TLS register");
}

// electron-block index of the all-zero-offset configuration
std::int64_t passive_index(const BasisDescriptor& electron) {
  std::int64_t idx = 0;
  for (int j = 0; j < electron.arms; ++j)
    idx = idx * electron.ladder_dim() + electron.digit_of_offset(0);
  return idx;
}

// electron-block index with arm j kicked to +1, the rest at 0
std::int64_t kick_index(const BasisDescriptor& electron, int arm) {
  std::int64_t idx = 0;
  for (int j = 0; j < electron.arms; ++j)
    idx = idx * electron.ladder_dim() + electron.digit_of_offset(j == arm ? 1 : 0);
  return idx;
}

HeraldResult finish(const BasisDescriptor& electron, Vector ground_block) {
  HeraldResult result;
  result.probability = ground_block.squaredNorm();
  result.passive_amplitude = ground_block(passive_index(electron));
  result.branch_amplitudes.resize(electron.arms);
  for (int j = 0; j < electron.arms; ++j)
    result.branch_amplitudes[j] = ground_block(kick_index(electron, j));
  result.degenerate = result.probability < herald_floor;
  if (!result.degenerate)
    result.conditional_state.emplace(
        electron, Vector(ground_block / std::sqrt(result.probability)));
  return result;
}

} // namespace

HeraldResult project_all_ground(const PureState& state) {
  require_tls(state.basis());
  const auto electron = electron_basis(state.basis().arms, state.basis().sideband_cut);
  const std::int64_t tls_block = std::int64_t{1} << state.basis().arms;
  Vector ground(electron.total_dim());
  for (std::int64_t e = 0; e < ground.size(); ++e)
    ground(e) = state.amplitudes()(e * tls_block);
  return finish(electron, std::move(ground));
}

HeraldResult project_all_ground(const Subspace& sector, const Vector& amplitudes) {
  require_tls(sector.basis);
  if (amplitudes.size() != sector.dim())
    throw std::invalid_argument("herald: vector does not match sector dimension");
  const auto electron = electron_basis(sector.basis.arms, sector.basis.sideband_cut);
  const std::int64_t tls_block = std::int64_t{1} << sector.basis.arms;
  Vector ground = Vector::Zero(electron.total_dim());
  for (std::int64_t row = 0; row < sector.dim(); ++row) {
    const std::int64_t full = sector.states[row];
    if (full % tls_block == 0) ground(full / tls_block) = amplitudes(row);
  }
  return finish(electron, std::move(ground));
}

PureState target_w_state(int arms, int sideband_cut, const std::vector<double>& phases) {
  if (!phases.empty() && static_cast<int>(phases.size()) != arms)
    throw std::invalid_argument("herald: phase list does not match the arm count");
  const auto electron = electron_basis(arms, sideband_cut);
  Vector amp = Vector::Zero(electron.total_dim());
  const double weight = 1.0 / std::sqrt(static_cast<double>(arms));
  for (int j = 0; j < arms; ++j) {
    const double phi = phases.empty() ? 0.0 : phases[j];
    amp(kick_index(electron, j)) = weight * std::exp(imag_unit * phi);
  }
  return PureState(electron, std::move(amp));
}

PureState target_weighted_state(int arms, int sideband_cut,
                                const std::vector<Complex>& weights) {
  if (static_cast<int>(weights.size()) != arms)
    throw std::invalid_argument("herald: weight list does not match the arm count");
  const auto electron = electron_basis(arms, sideband_cut);
  Vector amp = Vector::Zero(electron.total_dim());
  for (int j = 0; j < arms; ++j) amp(kick_index(electron, j)) = weights[j];
  const double norm = amp.norm();
  if (norm <= 0.0)
    throw std::invalid_argument("herald: target weights are all zero");
  amp /= norm;
  return PureState(electron, std::move(amp));
}

double conditional_fidelity(const HeraldResult& result, const PureState& target) {
  if (!result.conditional_state.has_value())
    throw std::invalid_argument("herald: degenerate result has no conditional state");
  const PureState& cond = *result.conditional_state;
  if (!(target.basis() == cond.basis()))
    throw std::invalid_argument("herald: target register does not match");
  return std::norm(target.amplitudes().dot(cond.amplitudes()));
}

DensityMatrix unconditional_electron_state(const PureState& state) {
  require_tls(state.basis());
  const auto electron = electron_basis(state.basis().arms, state.basis().sideband_cut);
  const std::int64_t dim = electron.total_dim();
  if (dim > 2048)
    throw std::invalid_argument("herald: electron register too large to densify");
  const std::int64_t tls_block = std::int64_t{1} << state.basis().arms;
  Matrix rho = Matrix::Zero(dim, dim);
  Vector column(dim);
  for (std::int64_t t = 0; t < tls_block; ++t) {
    for (std::int64_t e = 0; e < dim; ++e) column(e) = state.amplitudes()(e * tls_block + t);
    rho.noalias() += column * column.adjoint();
  }
  return DensityMatrix(electron.dims(), std::move(rho));
}

double unconditional_fidelity(const PureState& state, const PureState& electron_target) {
  require_tls(state.basis());
  const auto electron = electron_basis(state.basis().arms, state.basis().sideband_cut);
  if (!(electron_target.basis() == electron))
    throw std::invalid_argument("herald: target register does not match");
  const std::int64_t tls_block = std::int64_t{1} << state.basis().arms;
  const auto& target = electron_target.amplitudes();
  double fidelity = 0.0;
  for (std::int64_t t = 0; t < tls_block; ++t) {
    Complex overlap = 0.0;
    for (std::int64_t e = 0; e < target.size(); ++e)
      overlap += std::conj(target(e)) * state.amplitudes()(e * tls_block + t);
    fidelity += std::norm(overlap);
  }
  return fidelity;
}

std::vector<double> branch_probabilities(const PureState& state) {
  require_tls(state.basis());
  const std::int64_t tls_block = std::int64_t{1} << state.basis().arms;
  const std::int64_t electron_dim = state.basis().total_dim() / tls_block;
  std::vector<double> probs(tls_block, 0.0);
  for (std::int64_t e = 0; e < electron_dim; ++e)
    for (std::int64_t t = 0; t < tls_block; ++t)
      probs[t] += std::norm(state.amplitudes()(e * tls_block + t));
  return probs;
}

} // namespace heraldsim
