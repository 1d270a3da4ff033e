#include "heraldsim/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heraldsim {

void validate(const PulseEnvelope& envelope) {
  if (envelope.peak < 0.0)
    throw std::invalid_argument("pulse: peak coupling must be >= 0");
  if (envelope.window <= 0.0)
    throw std::invalid_argument("pulse: window duration must be > 0");
  if (envelope.kind == PulseEnvelope::Kind::gaussian && envelope.width <= 0.0)
    throw std::invalid_argument("pulse: gaussian width must be > 0");
}

double envelope_value(const PulseEnvelope& envelope, double t) {
  if (t < 0.0 || t > envelope.window) return 0.0;
  if (envelope.kind == PulseEnvelope::Kind::square) return envelope.peak;
  const double u = (t - envelope.window / 2) / envelope.width;
  return envelope.peak * std::exp(-u * u / 2);
}

double accumulated_area(const PulseEnvelope& envelope, double t) {
  const double tc = std::clamp(t, 0.0, envelope.window);
  if (envelope.kind == PulseEnvelope::Kind::square) return envelope.peak * tc;
  // integral of exp(-(s - T/2)^2 / (2 tau^2)) from 0 to t
  const double tau = envelope.width;
  const double scale = tau * std::sqrt(pi / 2);
  const double lo = -envelope.window / (2 * std::sqrt(2.0) * tau);
  const double hi = (tc - envelope.window / 2) / (std::sqrt(2.0) * tau);
  return envelope.peak * scale * (std::erf(hi) - std::erf(lo));
}

PulseEnvelope square_pulse(double area, double window) {
  if (window <= 0.0) throw std::invalid_argument("pulse: window duration must be > 0");
  PulseEnvelope p{PulseEnvelope::Kind::square, area / window, window, 0.0};
  validate(p);
  return p;
}

PulseEnvelope gaussian_pulse(double peak, double window, double width) {
  PulseEnvelope p{PulseEnvelope::Kind::gaussian, peak, window, width};
  validate(p);
  return p;
}

} // namespace heraldsim
