#include "heraldsim/config.hpp"

#include <cmath>
#include <stdexcept>

namespace heraldsim {

void SystemConfig::validate() const {
  if (arms.empty()) throw std::invalid_argument("config: no arms defined");
  if (sideband_cut < 1) throw std::invalid_argument("config: sideband cut must be >= 1");
  for (const auto& arm : arms) heraldsim::validate(arm.envelope);

  if (!excitation_amplitudes.empty() &&
      excitation_amplitudes.size() != arms.size())
    throw std::invalid_argument("config: need one excitation amplitude per arm");
  double norm2 = std::norm(ground_amplitude);
  for (const Complex& c : effective_excitation_amplitudes()) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > 1e-10)
    throw std::invalid_argument("config: initial weights are not normalized");

  if (model == Model::full) {
    if (omega <= 0.0 || omega0 <= 0.0)
      throw std::invalid_argument("config: full model requires positive carriers");
    const double delta = omega - omega0;
    for (const auto& arm : arms)
      if (std::abs(arm.detuning - delta) > 1e-9)
        throw std::invalid_argument(
            "config: full model needs arm detunings equal to omega - omega0");
  }
}

std::vector<Complex> SystemConfig::effective_excitation_amplitudes() const {
  if (!excitation_amplitudes.empty()) return excitation_amplitudes;
  const double r = 1.0 / std::sqrt(static_cast<double>(arms.size()));
  return std::vector<Complex>(arms.size(), Complex(r));
}

BasisDescriptor basis_for(const SystemConfig& config) {
  return build_basis(config.arm_count(), config.sideband_cut);
}

PureState initial_state(const SystemConfig& config, const BasisDescriptor& basis) {
  config.validate();
  if (basis.arms != config.arm_count() || basis.sideband_cut != config.sideband_cut)
    throw std::invalid_argument("config: basis does not match configuration");
  std::vector<double> phases;
  phases.reserve(config.arms.size());
  for (const auto& arm : config.arms) phases.push_back(arm.phase);
  return product_state(basis, std::vector<int>(config.arm_count(), 0),
                       config.effective_excitation_amplitudes(),
                       config.ground_amplitude, phases);
}

SystemConfig symmetric_rwa_config(int arms, double area, double delta, int sideband_cut) {
  if (arms < 1) throw std::invalid_argument("config: arm count must be >= 1");
  SystemConfig cfg;
  cfg.model = Model::rwa;
  cfg.sideband_cut = sideband_cut;
  // unit window: the analytic detuning parameter delta = Delta*T/2 -> Delta = 2 delta
  cfg.arms.assign(arms, ArmParams{square_pulse(area, 1.0), 2.0 * delta, 0.0});
  cfg.validate();
  return cfg;
}

SystemConfig resonant_full_config(int arms, double area, double omega, double window,
                                  int sideband_cut) {
  if (arms < 1) throw std::invalid_argument("config: arm count must be >= 1");
  SystemConfig cfg;
  cfg.model = Model::full;
  cfg.sideband_cut = sideband_cut;
  cfg.omega = omega;
  cfg.omega0 = omega;
  cfg.arms.assign(arms, ArmParams{square_pulse(area, window), 0.0, 0.0});
  cfg.validate();
  return cfg;
}

} // namespace heraldsim
