#pragma once

#include "detcount/arith.hpp"

namespace detcount {

// Smooth cutoff for the box [1, X]:
//   w(x) = 0 outside (1-H, X+H),  w(x) = 1 on [1, X],
// and on each ramp of width H the C^infinity smoothstep
//   psi(t) = f(t) / (f(t) + f(1-t)),  f(t) = exp(-1/t),
// rescaled to the ramp.  psi is symmetric, so w = 1/2 at both ramp midpoints,
// and every derivative vanishes at the ramp ends, so w is globally smooth.
// The j-th derivative scales like H^-j with j-dependent constants that do not
// depend on (X, H); see kRampDerivativeBound below.

enum class RampShape {
    ExpSmoothstep,
};

struct WeightProfile {
    double X = 0.0;
    double H = 0.0;
    RampShape ramp = RampShape::ExpSmoothstep;
};

// Requires sqrt(X) <= H <= X; anything else raises Error(errc::bad_h_range).
WeightProfile make_weight(double X, double H);

// w(x); exact 0 / 1 off the ramps (no exp calls on the plateau).
double weight_value(const WeightProfile& profile, double x);

// d^j/dx^j w(x) for 0 <= j <= 4; j = 0 returns the value.
double weight_derivative(const WeightProfile& profile, double x, int order);

// Smoothstep psi and its derivatives on the unit ramp, exposed for audits:
// psi(t) for t <= 0 is 0, for t >= 1 is 1.
double ramp_value(double t);
double ramp_derivative(double t, int order);

// Measured maxima of |psi^(j)| on [0,1] (1, 2, 9.85, 110.6, 2280.4), frozen
// after the first sampling run with modest headroom;
// |w^(j)(x)| <= kRampDerivativeBound[j] * H^-j everywhere.
inline constexpr double kRampDerivativeBound[5] = {1.0, 2.0, 10.5, 120.0, 2400.0};

} // namespace detcount
