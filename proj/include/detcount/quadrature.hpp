#pragma once

#include <complex>
#include <functional>
#include <span>

namespace detcount {

// Adaptive Gauss-Legendre integration for piecewise-smooth, possibly
// oscillatory complex integrands.  Panels start at the supplied breakpoints
// (cutoff corners, oscillation chunks) and are bisected until the two-half
// refinement agrees with the parent panel within the allocated tolerance.

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    // Upper bound on processed panels; crossing it raises
    // Error(errc::quadrature_not_converged).
    long max_panels = 400000;
    int max_depth = 40;
    // If nonzero, every breakpoint interval is pre-split into chunks of at
    // most this width before refinement starts (used to keep oscillatory
    // panels under a couple of wavelengths so agreement cannot alias).
    double max_initial_width = 0.0;
};

struct QuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    long panels = 0;
};

QuadratureResult integrate(const std::function<std::complex<double>(double)>& f, double a,
                           double b, std::span<const double> breakpoints,
                           const QuadratureOptions& opt = {});

// Single fixed 15-point rule on [a, b], no refinement; building block for
// callers that manage their own panels.
std::complex<double> gauss15(const std::function<std::complex<double>(double)>& f, double a,
                             double b);

} // namespace detcount
