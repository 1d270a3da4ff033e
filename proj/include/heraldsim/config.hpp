#pragma once

#include <vector>

#include "heraldsim/basis.hpp"
#include "heraldsim/pulse.hpp"

namespace heraldsim {

// rwa: keep only the energy-conserving exchange terms
// full: include the counter-rotating terms oscillating at omega + omega0
enum class Model { rwa, full };

struct ArmParams {
  PulseEnvelope envelope;
  double detuning = 0.0; // Delta_j = omega - omega0_j, units 1/time
  double phase = 0.0;    // emission/collection phase of the arm's excitation
};

// One electron-TLS arm per entry.  The initial register is
//   |0...0>_electrons (x) [ sum_j c_j e^{i phi_j} |g..e_j..g> + c_g |g..g> ]
// with c_j = excitation_amplitudes (default 1/sqrt(N)) and c_g the optional
// all-ground weight.
struct SystemConfig {
  std::vector<ArmParams> arms;
  int sideband_cut = 2;
  Model model = Model::rwa;
  double omega = 0.0;  // optical carrier, full model only
  double omega0 = 0.0; // TLS splitting, full model only
  std::vector<Complex> excitation_amplitudes; // empty -> symmetric 1/sqrt(N)
  Complex ground_amplitude = 0.0;

  int arm_count() const { return static_cast<int>(arms.size()); }
  double omega_plus() const { return omega + omega0; }

  // errors: std::invalid_argument on empty arms, invalid envelopes,
  // mis-sized amplitude vectors, non-normalized initial weights, or a full
  // model whose carriers are unset / inconsistent with the arm detunings
  void validate() const;

  std::vector<Complex> effective_excitation_amplitudes() const;
};

BasisDescriptor basis_for(const SystemConfig& config);
PureState initial_state(const SystemConfig& config, const BasisDescriptor& basis);

// Symmetric RWA setup over a unit window: every arm a square pulse of the
// given area, common detuning expressed as delta = Delta*T/2.
SystemConfig symmetric_rwa_config(int arms, double area, double delta = 0.0,
                                  int sideband_cut = 2);

// Resonant full-model setup: omega = omega0 (so Delta = 0), square pulses of
// the given area over window T expressed in units of 1/omega.
SystemConfig resonant_full_config(int arms, double area, double omega, double window,
                                  int sideband_cut = 3);

} // namespace heraldsim
