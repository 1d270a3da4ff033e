#include "heraldsim/entanglement.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace heraldsim {

namespace {

// composite indices whose every digit lies in the {offset 0, offset +1}
// submanifold, paired with the qubit index they map to
std::vector<std::int64_t> manifold_indices(const std::vector<int>& dims) {
  std::vector<std::int64_t> indices{0};
  for (int dim : dims) {
    int zero_digit, plus_digit;
    if (dim == 2) {
      zero_digit = 0, plus_digit = 1;
    } else if (dim >= 3 && dim % 2 == 1) {
      zero_digit = (dim - 1) / 2, plus_digit = (dim + 1) / 2;
    } else {
      throw std::invalid_argument(
          "entanglement: subsystems must be qubits or odd ladders");
    }
    std::vector<std::int64_t> next;
    next.reserve(indices.size() * 2);
    for (std::int64_t base : indices) {
      next.push_back(base * dim + zero_digit);
      next.push_back(base * dim + plus_digit);
    }
    indices.swap(next);
  }
  return indices;
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

} // namespace

double negativity(const DensityMatrix& rho, int transpose_on) {
  if (rho.dims().size() != 2)
    throw std::invalid_argument("entanglement: negativity expects two subsystems");
  if (transpose_on < 0 || transpose_on > 1)
    throw std::invalid_argument("entanglement: transpose side out of range");
  const auto pt = partial_transpose(rho, {transpose_on});
  const RealVector eig = hermitian_eigenvalues(pt.matrix());
  double total = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i)
    if (eig(i) < 0.0) total -= eig(i);
  return total;
}

PairNegativityReport pairwise_negativity_report(const DensityMatrix& rho_multi,
                                                bool effective_qubit_encoding) {
  const int n = static_cast<int>(rho_multi.dims().size());
  if (n < 2)
    throw std::invalid_argument("entanglement: report needs at least two subsystems");

  PairNegativityReport report;
  const DensityMatrix* work = &rho_multi;
  std::optional<QubitEncoding> encoded;
  if (effective_qubit_encoding) {
    encoded = effective_qubit_state(rho_multi);
    report.leakage = encoded->leakage;
    if (report.leakage > 1e-6)
      throw std::invalid_argument(
          "entanglement: weight outside the {0, +1} manifold exceeds 1e-6; "
          "disable the effective encoding");
    work = &encoded->state;
  }

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const auto pair = partial_trace(*work, {a, b});
      const double value = negativity(pair, 1);
      report.pair_values.emplace(std::make_pair(a, b), value);
      report.average += value;
    }
  report.average /= static_cast<double>(report.pair_values.size());
  return report;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector eig = hermitian_eigenvalues(rho.matrix());
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i)
    if (eig(i) >= 1e-12) entropy -= eig(i) * std::log2(eig(i));
  return entropy;
}

double witness_expectation(const DensityMatrix& rho, const std::vector<double>& phases) {
  const int n = static_cast<int>(rho.dims().size());
  for (int dim : rho.dims())
    if (dim != 2)
      throw std::invalid_argument("entanglement: witness expects a qubit register");
  if (!phases.empty() && static_cast<int>(phases.size()) != n)
    throw std::invalid_argument("entanglement: phase list does not match register");

  Vector w = Vector::Zero(std::int64_t{1} << n);
  const double weight = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    const double phi = phases.empty() ? 0.0 : phases[j];
    w(std::int64_t{1} << (n - 1 - j)) = weight * std::exp(imag_unit * phi);
  }
  const double overlap = (w.adjoint() * rho.matrix() * w)(0).real();
  return (n - 1.0) / n - overlap;
}

double success_weighted_yield(double probability, double conditional_average_negativity) {
  if (probability < -1e-12 || probability > 1.0 + 1e-9 ||
      conditional_average_negativity < -1e-10)
    throw std::invalid_argument("entanglement: yield arguments out of range");
  return probability * conditional_average_negativity;
}

DensityMatrix reduced_state(const PureState& state, const std::vector<int>& keep) {
  const auto dims = state.basis().dims();
  const int count = static_cast<int>(dims.size());
  for (size_t t = 0; t < keep.size(); ++t)
    if (keep[t] < 0 || keep[t] >= count || (t > 0 && keep[t] <= keep[t - 1]))
      throw std::invalid_argument("entanglement: keep list must be strictly "
                                  "increasing subsystem indices");
  if (keep.empty())
    throw std::invalid_argument("entanglement: keep list must not be empty");

  std::vector<bool> kept(count, false);
  for (int k : keep) kept[k] = true;
  std::int64_t kept_dim = 1;
  for (int k : keep) kept_dim *= dims[k];
  if (kept_dim > 4096)
    throw std::invalid_argument("entanglement: kept block too large to densify");

  // group amplitudes by the traced-out digits; each group contributes an
  // outer product over the kept digits
  std::unordered_map<std::int64_t, std::vector<std::pair<std::int64_t, Complex>>> groups;
  const Vector& amp = state.amplitudes();
  for (std::int64_t i = 0; i < amp.size(); ++i) {
    if (amp(i) == Complex(0.0)) continue;
    std::int64_t rest = i, kept_index = 0, rest_index = 0;
    std::int64_t place = 1, rplace = 1;
    for (int k = count - 1; k >= 0; --k) {
      const std::int64_t digit = rest % dims[k];
      rest /= dims[k];
      if (kept[k]) {
        kept_index += digit * place;
        place *= dims[k];
      } else {
        rest_index += digit * rplace;
        rplace *= dims[k];
      }
    }
    groups[rest_index].emplace_back(kept_index, amp(i));
  }

  Matrix rho = Matrix::Zero(kept_dim, kept_dim);
  for (const auto& [rest, members] : groups)
    for (const auto& [ra, va] : members)
      for (const auto& [rb, vb] : members) rho(ra, rb) += va * std::conj(vb);

  std::vector<int> out_dims;
  for (int k : keep) out_dims.push_back(dims[k]);
  return DensityMatrix(std::move(out_dims), std::move(rho));
}

QubitEncoding effective_qubit_state(const DensityMatrix& rho) {
  const auto indices = manifold_indices(rho.dims());
  const std::int64_t dim = static_cast<std::int64_t>(indices.size());
  Matrix block(dim, dim);
  for (std::int64_t a = 0; a < dim; ++a)
    for (std::int64_t b = 0; b < dim; ++b) block(a, b) = rho.matrix()(indices[a], indices[b]);
  const double weight = block.trace().real();
  if (weight < 1e-14)
    throw std::invalid_argument("entanglement: no weight inside the {0, +1} manifold");
  QubitEncoding out{DensityMatrix(std::vector<int>(rho.dims().size(), 2), block / weight),
                    1.0 - weight};
  return out;
}

QubitEncoding effective_qubit_state(const PureState& state) {
  const auto indices = manifold_indices(state.basis().dims());
  Vector block(static_cast<std::int64_t>(indices.size()));
  for (std::int64_t a = 0; a < block.size(); ++a)
    block(a) = state.amplitudes()(indices[a]);
  const double weight = block.squaredNorm();
  if (weight < 1e-14)
    throw std::invalid_argument("entanglement: no weight inside the {0, +1} manifold");
  block /= std::sqrt(weight);
  const int n = static_cast<int>(state.basis().dims().size());
  return QubitEncoding{DensityMatrix(std::vector<int>(n, 2), block * block.adjoint()),
                       1.0 - weight};
}

} // namespace heraldsim
