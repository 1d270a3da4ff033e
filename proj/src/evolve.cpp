#include "heraldsim/evolve.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace heraldsim {

namespace {

// classic RK4 with preallocated stage storage; d psi/dt = -i H(t) psi
class Rk4Workspace {
public:
  explicit Rk4Workspace(std::int64_t dim)
      : k1_(dim), k2_(dim), k3_(dim), k4_(dim), stage_(dim) {}

  void advance(const GeneratorTable& table, Vector& psi, double t0, double t1,
               std::int64_t steps) {
    const double dt = (t1 - t0) / static_cast<double>(steps);
    for (std::int64_t n = 0; n < steps; ++n) {
      const double t = t0 + dt * static_cast<double>(n);
      derivative(table, t, psi, k1_);
      stage_ = psi + (0.5 * dt) * k1_;
      derivative(table, t + 0.5 * dt, stage_, k2_);
      stage_ = psi + (0.5 * dt) * k2_;
      derivative(table, t + 0.5 * dt, stage_, k3_);
      stage_ = psi + dt * k3_;
      derivative(table, t + dt, stage_, k4_);
      psi += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }
  }

  // halve the step until one halving moves no amplitude by more than tol
  void advance_adaptive(const GeneratorTable& table, Vector& psi, double t0, double t1,
                        std::int64_t base_steps, double tol) {
    Vector current = psi;
    advance(table, current, t0, t1, base_steps);
    std::int64_t steps = base_steps;
    for (int round = 0;; ++round) {
      if (round > 16)
        throw std::runtime_error("integrator: adaptive refinement did not converge");
      steps *= 2;
      Vector refined = psi;
      advance(table, refined, t0, t1, steps);
      const double change = (refined - current).lpNorm<Eigen::Infinity>();
      current.swap(refined);
      if (change <= tol) break;
    }
    psi = std::move(current);
  }

private:
  void derivative(const GeneratorTable& table, double t, const Vector& in, Vector& out) {
    table.apply(t, in, out);
    out *= -imag_unit;
  }

  Vector k1_, k2_, k3_, k4_, stage_;
};

void check_spec(const IntegratorSpec& spec) {
  if (!(spec.tolerance > 0.0) || spec.min_steps < 1 || spec.max_step < 0.0 ||
      spec.steps_per_fast_period < 1)
    throw std::invalid_argument("integrator: invalid specification");
}

void check_drift(double norm_out, double norm_in, double tolerance) {
  if (std::abs(norm_out - norm_in) > 10.0 * tolerance)
    throw std::runtime_error(
        "integrator: norm drift exceeds ten times the tolerance; tighten the steps");
}

} // namespace

int planned_step_count(const GeneratorTable& table, double t0, double t1,
                       const IntegratorSpec& spec) {
  check_spec(spec);
  if (!(t1 >= t0)) throw std::invalid_argument("integrator: reversed time span");
  const double span = t1 - t0;
  if (span == 0.0) return 0;
  double steps = spec.min_steps;
  if (spec.max_step > 0.0) steps = std::max(steps, std::ceil(span / spec.max_step));
  if (table.model() == Model::full)
    steps = std::max(steps, std::ceil(span * table.omega_plus() *
                                      spec.steps_per_fast_period / (2.0 * pi)));
  if (steps > 5e7) throw std::invalid_argument("integrator: step plan too large");
  return static_cast<int>(steps);
}

Vector propagate_vector(const GeneratorTable& table, Vector psi, double t0, double t1,
                        const IntegratorSpec& spec) {
  if (psi.size() != table.dim())
    throw std::invalid_argument("integrator: vector does not match table dimension");
  const int steps = planned_step_count(table, t0, t1, spec);
  if (steps == 0) return psi;
  const double norm_in = psi.norm();
  Rk4Workspace work(psi.size());
  if (spec.method == StepMethod::fixed_step)
    work.advance(table, psi, t0, t1, steps);
  else
    work.advance_adaptive(table, psi, t0, t1, steps, spec.tolerance);
  check_drift(psi.norm(), norm_in, spec.tolerance);
  return psi;
}

std::vector<Vector> time_series_vector(const GeneratorTable& table, Vector psi,
                                       const std::vector<double>& times,
                                       const IntegratorSpec& spec) {
  check_spec(spec);
  if (psi.size() != table.dim())
    throw std::invalid_argument("integrator: vector does not match table dimension");
  for (size_t k = 0; k < times.size(); ++k)
    if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1]))
      throw std::invalid_argument(
          "integrator: sample times must be nonnegative and nondecreasing");

  std::vector<Vector> out;
  if (times.empty()) return out;
  out.reserve(times.size());

  const double norm_in = psi.norm();
  const double span = times.back();
  const int total = span > 0.0 ? planned_step_count(table, 0.0, span, spec) : 0;
  Rk4Workspace work(psi.size());
  double t = 0.0;
  for (double target : times) {
    if (target > t) {
      // each leg continues at the global step density
      const auto steps = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::ceil(total * (target - t) / span)));
      if (spec.method == StepMethod::fixed_step)
        work.advance(table, psi, t, target, steps);
      else
        work.advance_adaptive(table, psi, t, target, steps, spec.tolerance);
      t = target;
    }
    out.push_back(psi);
  }
  check_drift(psi.norm(), norm_in, spec.tolerance);
  return out;
}

PureState propagate(const PureState& state, const SystemConfig& config, double t0,
                    double t1, const IntegratorSpec& spec) {
  const GeneratorTable table(config, state.basis());
  return PureState(state.basis(),
                   propagate_vector(table, state.amplitudes(), t0, t1, spec));
}

std::vector<PureState> time_series(const PureState& state, const SystemConfig& config,
                                   const std::vector<double>& times,
                                   const IntegratorSpec& spec) {
  const GeneratorTable table(config, state.basis());
  std::vector<PureState> out;
  for (auto& sample : time_series_vector(table, state.amplitudes(), times, spec))
    out.emplace_back(state.basis(), std::move(sample));
  return out;
}

} // namespace heraldsim
