#pragma once

#include <cstdint>
#include <vector>

#include "heraldsim/basis.hpp"
#include "heraldsim/config.hpp"

namespace heraldsim {

// Interaction-picture generator (hbar = 1).  Each arm couples its electron
// ladder shift b_j (unit-amplitude translation, truncated absorbingly at
// |m| = M) to its TLS ladder operators:
//   rwa:   G_j(t) [ b_j sigma_j^+ e^{-i Delta_j t} + h.c. ]
//   full:  adds   G_j(t) [ b_j sigma_j^- e^{-i omega_plus t} + h.c. ]
// Hop lists store the downward-shift transitions; the Hermitian partner is
// applied with the conjugate coefficient, so dropped edge hops drop in pairs.
struct HopList {
  std::vector<std::int32_t> src;
  std::vector<std::int32_t> dst;
  void add(std::int64_t s, std::int64_t d) {
    src.push_back(static_cast<std::int32_t>(s));
    dst.push_back(static_cast<std::int32_t>(d));
  }
  size_t size() const { return src.size(); }
};

struct ArmGenerator {
  PulseEnvelope envelope;
  double detuning = 0.0;
  HopList exchange; // (m, g) -> (m-1, e), coefficient G_j(t) e^{-i Delta_j t}
  HopList counter;  // (m, e) -> (m-1, g), coefficient G_j(t) e^{-i omega_plus t}
};

// Sparse-application form of the generator over the full register or a
// restricted subspace.  Restricted tables are RWA-only: counter-rotating
// terms leave any exchange-closed sector.
class GeneratorTable {
public:
  GeneratorTable(const SystemConfig& config, const BasisDescriptor& basis);
  GeneratorTable(const SystemConfig& config, const Subspace& subspace);

  std::int64_t dim() const { return dim_; }
  Model model() const { return model_; }
  double omega_plus() const { return omega_plus_; }

  // out = H(t) in;  out is resized and overwritten
  void apply(double t, const Vector& in, Vector& out) const;

private:
  void build(const SystemConfig& config, const BasisDescriptor& basis,
             const Subspace* subspace);

  std::int64_t dim_ = 0;
  Model model_ = Model::rwa;
  double omega_plus_ = 0.0;
  std::vector<ArmGenerator> arms_;
};

// Dense Hermitian matrices at a fixed time, for inspection and small systems.
// build_full_generator errors on unset carriers (omega, omega0 <= 0).
Matrix build_rwa_generator(const SystemConfig& config, const BasisDescriptor& basis,
                           double t);
Matrix build_full_generator(const SystemConfig& config, const BasisDescriptor& basis,
                            double t);

// Per-arm conserved charge of the RWA dynamics, as a basis diagonal:
// C_j = (ladder offset of electron j) + (excitation of TLS j)
RealVector conserved_charge_diagonal(const BasisDescriptor& basis, int arm);

// BFS closure of the given support under exchange hops: the smallest
// RWA-invariant subspace containing it
Subspace rwa_reachable_subspace(const BasisDescriptor& basis,
                                const std::vector<std::int64_t>& support);
Subspace rwa_reachable_subspace(const BasisDescriptor& basis, const PureState& state);

} // namespace heraldsim
