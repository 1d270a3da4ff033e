#pragma once

#include <vector>

#include "heraldsim/hamiltonian.hpp"

namespace heraldsim {

// Deterministic classic fourth-order Runge-Kutta on d psi/dt = -i H(t) psi.
// fixed_step: step count from the plan below.  adaptive: repeatedly halves
// the step until one halving moves no amplitude by more than `tolerance`
// (steps only ever tighten).  No renormalization is ever applied: norm drift
// is the error monitor, and a drift beyond 10x tolerance is an error.
enum class StepMethod { fixed_step, adaptive };

struct IntegratorSpec {
  StepMethod method = StepMethod::fixed_step;
  double tolerance = 1e-8; // target amplitude accuracy
  double max_step = 0.0;   // optional cap on the step size (0 = none)
  int min_steps = 512;     // baseline resolution of the span
  int steps_per_fast_period = 20; // full model: resolve 2 pi / omega_plus
};

// fixed-step count for [t0, t1]: max of min_steps, the max_step cap, and for
// the full model the counter-rotating sampling bound
int planned_step_count(const GeneratorTable& table, double t0, double t1,
                       const IntegratorSpec& spec);

// errors: std::invalid_argument on t1 < t0 or dimension mismatch;
// std::runtime_error on norm drift > 10x tolerance or a non-converging
// adaptive refinement
Vector propagate_vector(const GeneratorTable& table, Vector psi, double t0, double t1,
                        const IntegratorSpec& spec = {});

// incremental sampling: each leg continues from the previous sample at the
// global step density (no re-integration from the start)
std::vector<Vector> time_series_vector(const GeneratorTable& table, Vector psi,
                                       const std::vector<double>& times,
                                       const IntegratorSpec& spec = {});

PureState propagate(const PureState& state, const SystemConfig& config, double t0,
                    double t1, const IntegratorSpec& spec = {});

std::vector<PureState> time_series(const PureState& state, const SystemConfig& config,
                                   const std::vector<double>& times,
                                   const IntegratorSpec& spec = {});

} // namespace heraldsim
