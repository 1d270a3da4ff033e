#include "heraldsim/hamiltonian.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace heraldsim {

namespace {

std::vector<std::int64_t> register_strides(const BasisDescriptor& basis) {
  const auto dims = basis.dims();
  std::vector<std::int64_t> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
    s[k] = s[k + 1] * dims[k + 1];
  return s;
}

void require_full_register(const BasisDescriptor& basis) {
  if (!basis.has_tls)
    throw std::invalid_argument("generator: requires the electron+TLS register");
}

} // namespace

GeneratorTable::GeneratorTable(const SystemConfig& config, const BasisDescriptor& basis) {
  build(config, basis, nullptr);
}

GeneratorTable::GeneratorTable(const SystemConfig& config, const Subspace& subspace) {
  if (config.model == Model::full)
    throw std::invalid_argument(
        "generator: restricted tables support the rwa model only");
  build(config, subspace.basis, &subspace);
}

void GeneratorTable::build(const SystemConfig& config, const BasisDescriptor& basis,
                           const Subspace* subspace) {
  config.validate();
  require_full_register(basis);
  if (basis.arms != config.arm_count() || basis.sideband_cut != config.sideband_cut)
    throw std::invalid_argument("generator: basis does not match configuration");

  model_ = config.model;
  omega_plus_ = config.omega_plus();
  dim_ = subspace ? subspace->dim() : basis.total_dim();

  const int n = basis.arms;
  const auto dims = basis.dims();
  const auto stride = register_strides(basis);
  arms_.clear();
  arms_.reserve(n);
  for (int j = 0; j < n; ++j)
    arms_.push_back(ArmGenerator{config.arms[j].envelope, config.arms[j].detuning});

  // enumerate downward-shift hops; a hop enters only if both of its endpoint
  // states exist in the index set (full register or subspace rows)
  const std::int64_t count = subspace ? subspace->dim() : basis.total_dim();
  for (std::int64_t row = 0; row < count; ++row) {
    const std::int64_t i = subspace ? subspace->states[row] : row;
    for (int j = 0; j < n; ++j) {
      const int m_digit = static_cast<int>((i / stride[j]) % dims[j]);
      const int tls = static_cast<int>((i / stride[n + j]) % 2);
      if (m_digit == 0) continue; // shifted amplitude leaves the ladder: dropped
      if (tls == 0) {
        // (m, g) -> (m-1, e)
        const std::int64_t d = i - stride[j] + stride[n + j];
        const std::int64_t drow =
            subspace ? (subspace->position(d) ? *subspace->position(d) : -1) : d;
        if (drow >= 0) arms_[j].exchange.add(row, drow);
      } else if (model_ == Model::full) {
        // (m, e) -> (m-1, g)
        const std::int64_t d = i - stride[j] - stride[n + j];
        const std::int64_t drow =
            subspace ? (subspace->position(d) ? *subspace->position(d) : -1) : d;
        if (drow >= 0) arms_[j].counter.add(row, drow);
      }
    }
  }
}

void GeneratorTable::apply(double t, const Vector& in, Vector& out) const {
  if (in.size() != dim_)
    throw std::invalid_argument("generator: vector does not match table dimension");
  out.setZero(dim_);
  for (const auto& arm : arms_) {
    const double g = envelope_value(arm.envelope, t);
    if (g == 0.0) continue;
    const Complex z = g * std::exp(-imag_unit * (arm.detuning * t));
    const Complex zc = std::conj(z);
    for (size_t h = 0; h < arm.exchange.size(); ++h) {
      const auto s = arm.exchange.src[h], d = arm.exchange.dst[h];
      out(d) += z * in(s);
      out(s) += zc * in(d);
    }
    if (!arm.counter.src.empty()) {
      const Complex w = g * std::exp(-imag_unit * (omega_plus_ * t));
      const Complex wc = std::conj(w);
      for (size_t h = 0; h < arm.counter.size(); ++h) {
        const auto s = arm.counter.src[h], d = arm.counter.dst[h];
        out(d) += w * in(s);
        out(s) += wc * in(d);
      }
    }
  }
}

namespace {

Matrix materialize(const SystemConfig& config, const BasisDescriptor& basis, double t,
                   Model model) {
  SystemConfig local = config;
  local.model = model;
  const GeneratorTable table(local, basis);
  const std::int64_t dim = basis.total_dim();
  Matrix h = Matrix::Zero(dim, dim);
  Vector unit = Vector::Zero(dim), column;
  for (std::int64_t c = 0; c < dim; ++c) {
    unit(c) = 1.0;
    table.apply(t, unit, column);
    h.col(c) = column;
    unit(c) = 0.0;
  }
  return h;
}

} // namespace

Matrix build_rwa_generator(const SystemConfig& config, const BasisDescriptor& basis,
                           double t) {
  return materialize(config, basis, t, Model::rwa);
}

Matrix build_full_generator(const SystemConfig& config, const BasisDescriptor& basis,
                            double t) {
  if (config.omega <= 0.0 || config.omega0 <= 0.0)
    throw std::invalid_argument("generator: full model requires positive carriers");
  return materialize(config, basis, t, Model::full);
}

RealVector conserved_charge_diagonal(const BasisDescriptor& basis, int arm) {
  require_full_register(basis);
  if (arm < 0 || arm >= basis.arms)
    throw std::invalid_argument("generator: arm index out of range");
  const auto dims = basis.dims();
  const auto stride = register_strides(basis);
  RealVector c(basis.total_dim());
  for (std::int64_t i = 0; i < c.size(); ++i) {
    const int m_digit = static_cast<int>((i / stride[arm]) % dims[arm]);
    const int tls = static_cast<int>((i / stride[basis.arms + arm]) % 2);
    c(i) = basis.offset_of_digit(m_digit) + tls;
  }
  return c;
}

Subspace rwa_reachable_subspace(const BasisDescriptor& basis,
                                const std::vector<std::int64_t>& support) {
  require_full_register(basis);
  if (support.empty())
    throw std::invalid_argument("subspace: empty support");
  const int n = basis.arms;
  const auto dims = basis.dims();
  const auto stride = register_strides(basis);

  std::unordered_set<std::int64_t> seen;
  std::deque<std::int64_t> frontier;
  for (std::int64_t s : support) {
    if (s < 0 || s >= basis.total_dim())
      throw std::invalid_argument("subspace: support index out of range");
    if (seen.insert(s).second) frontier.push_back(s);
  }
  while (!frontier.empty()) {
    const std::int64_t i = frontier.front();
    frontier.pop_front();
    for (int j = 0; j < n; ++j) {
      const int m_digit = static_cast<int>((i / stride[j]) % dims[j]);
      const int tls = static_cast<int>((i / stride[n + j]) % 2);
      std::int64_t neighbor = -1;
      if (tls == 0 && m_digit >= 1)
        neighbor = i - stride[j] + stride[n + j]; // (m, g) -> (m-1, e)
      else if (tls == 1 && m_digit + 1 < dims[j])
        neighbor = i + stride[j] - stride[n + j]; // (m, e) -> (m+1, g)
      if (neighbor >= 0 && seen.insert(neighbor).second) frontier.push_back(neighbor);
    }
  }
  return make_subspace(basis, std::vector<std::int64_t>(seen.begin(), seen.end()));
}

Subspace rwa_reachable_subspace(const BasisDescriptor& basis, const PureState& state) {
  std::vector<std::int64_t> support;
  const Vector& v = state.amplitudes();
  for (std::int64_t i = 0; i < v.size(); ++i)
    if (v(i) != Complex(0.0)) support.push_back(i);
  return rwa_reachable_subspace(basis, support);
}

} // namespace heraldsim
