#pragma once

#include "heraldsim/types.hpp"

namespace heraldsim {

// Coupling envelope G(t), hard-windowed to [0, window] and zero outside.
//   square:   G(t) = peak
//   gaussian: G(t) = peak * exp(-(t - window/2)^2 / (2 width^2))
struct PulseEnvelope {
  enum class Kind { square, gaussian };
  Kind kind = Kind::square;
  double peak = 0.0;   // G0 (square) or Gmax (gaussian), units 1/time
  double window = 1.0; // T > 0
  double width = 0.0;  // tau > 0, gaussian only
};

// errors: std::invalid_argument on negative peak, nonpositive window, or a
// gaussian with nonpositive width
void validate(const PulseEnvelope& envelope);

double envelope_value(const PulseEnvelope& envelope, double t);

// g(t) = integral of G from 0 to t, clamped to the window; closed forms
// (the gaussian integral via erf, exact to floating precision)
double accumulated_area(const PulseEnvelope& envelope, double t);

// square envelope whose full-window area is `area`
PulseEnvelope square_pulse(double area, double window = 1.0);
PulseEnvelope gaussian_pulse(double peak, double window, double width);

} // namespace heraldsim
