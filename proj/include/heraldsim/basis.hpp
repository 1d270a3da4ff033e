#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "heraldsim/types.hpp"

namespace heraldsim {

// Tensor-product register for N electron-TLS arms.  Each electron carries a
// sideband ladder of offsets m in [-M, +M] relative to its incoming energy
// (digit = m + M), each TLS the levels {0 = ground, 1 = excited}.  Subsystems
// are ordered electron 1..N then TLS 1..N; composite indices are mixed-radix
// with the first subsystem most significant, matching kron(A_1, ..., A_2N).
struct BasisDescriptor {
  int arms = 0;         // N >= 1
  int sideband_cut = 0; // M >= 1
  bool has_tls = true;  // false: electron-sector basis (conditional states)

  int ladder_dim() const { return 2 * sideband_cut + 1; }
  int subsystem_count() const { return has_tls ? 2 * arms : arms; }
  std::vector<int> dims() const;
  std::int64_t total_dim() const;

  // digit <-> label helpers for single subsystems
  int digit_of_offset(int offset) const; // m -> m + M, throws out_of_range
  int offset_of_digit(int digit) const;  // m + M -> m

  // mixed-radix index maps over all subsystems
  std::int64_t index_of(const std::vector<int>& digits) const;
  std::vector<int> digits_of(std::int64_t index) const;

  bool operator==(const BasisDescriptor&) const = default;
};

// errors: std::invalid_argument on arms < 1, sideband_cut < 1, or a register
// exceeding the addressable size
BasisDescriptor build_basis(int arms, int sideband_cut);
BasisDescriptor electron_basis(int arms, int sideband_cut);

// ----------------------------------------------------------------- states ---

// Normalized pure state over a BasisDescriptor register.
class PureState {
public:
  // errors: std::invalid_argument on dimension mismatch or |norm - 1| > 1e-10
  PureState(BasisDescriptor basis, Vector amplitudes);

  const BasisDescriptor& basis() const { return basis_; }
  const Vector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

private:
  BasisDescriptor basis_;
  Vector amplitudes_;
};

// Hermitian, unit-trace operator over an explicit subsystem-dimension list.
// Positivity is enforced for physical states; partial_transpose() constructs
// its (generally indefinite) output with the positivity check waived.
class DensityMatrix {
public:
  // errors: std::invalid_argument on non-square/mismatched dims, Hermiticity
  // violation > 1e-12, |trace - 1| > 1e-10, or (when enforced) an eigenvalue
  // below -1e-10
  DensityMatrix(std::vector<int> dims, Matrix rho, bool enforce_positivity = true);

  const std::vector<int>& dims() const { return dims_; }
  const Matrix& matrix() const { return rho_; }
  std::int64_t dim() const { return rho_.rows(); }

private:
  std::vector<int> dims_;
  Matrix rho_;
};

DensityMatrix density_from_pure(const PureState& state);

// Electron offsets fixed per arm, TLS register prepared as
//   sum_j excitation_amplitudes[j] e^{i phases[j]} |g..e_j..g>
//   + ground_amplitude |g..g>.
// errors: std::invalid_argument on size mismatch, out-of-range offsets, or
// amplitudes whose squared magnitudes do not sum to 1 within 1e-10
PureState product_state(const BasisDescriptor& basis,
                        const std::vector<int>& electron_offsets,
                        const std::vector<Complex>& excitation_amplitudes,
                        Complex ground_amplitude = 0.0,
                        const std::vector<double>& phases = {});

// Trace out all subsystems not in `keep` (order-preserving index list into
// rho.dims()).  errors: std::invalid_argument on empty/duplicate/out-of-range
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Transpose the listed subsystems; involution, trace- and Hermiticity-
// preserving, generally indefinite.
DensityMatrix partial_transpose(const DensityMatrix& rho, const std::vector<int>& subsystems);

// Total population sitting on any electron's extreme ladder rows |m| = M;
// the truncation-edge monitor for propagated states.
double edge_population(const PureState& state);

// --------------------------------------------------------------- subspace ---

// A sorted selection of register basis states, with gather/scatter maps.
// Used to integrate dynamics restricted to an invariant sector.
struct Subspace {
  BasisDescriptor basis;
  std::vector<std::int64_t> states;                     // sorted full indices
  std::unordered_map<std::int64_t, std::int32_t> index; // full index -> row

  std::int64_t dim() const { return static_cast<std::int64_t>(states.size()); }
  std::optional<std::int32_t> position(std::int64_t full_index) const;
  Vector project(const Vector& full) const; // gather rows
  Vector embed(const Vector& sub) const;    // scatter into zeros
};

Subspace make_subspace(const BasisDescriptor& basis, std::vector<std::int64_t> states);

} // namespace heraldsim
