#include "detcount/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "detcount/quadrature.hpp"

// Phases of the form h(x) = -n*x/a1 - c0/x with c0 = m*X (scaled family) or
// c0 = m (unit family).  Derivatives:
//
//     h'(x)    = -n/a1 + c0/x^2
//     h''(x)   = -2*c0/x^3
//     h'''(x)  = 6*c0/x^4
//     h''''(x) = -24*c0/x^5
//
// so h'' keeps one sign, h' is monotone, and |h'| has at most one interior
// zero (the stationary point x0 with x0^2 = c0*a1/n, present when m and n
// share a sign).  Quadrature panels are laid out by walking from the
// high-|h'| end of each monotone piece with step 1/(4*|h'|): because |h'|
// only shrinks ahead of the walk, every panel is at most a quarter of the
// local wavelength everywhere inside itself, and it accrues at most 1/4 cycle
// of phase, which keeps the 15-point rule far inside its accuracy range and
// makes the two-half certification in integrate() meaningful rather than
// aliased.

namespace detcount {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
// Total phase variation budget, in cycles, for one quadrature call.
constexpr double kMaxPhaseCycles = 1e8;
// Memory guard on the panel-edge list; the cycle budget already implies a
// bound of the same order, this keeps the edge vector small before the cycle
// count is even computable for adversarial windows.
constexpr std::size_t kMaxPanelEdges = 4u << 20;

std::complex<double> e_of(double t) { return std::polar(1.0, kTwoPi * t); }

double coeff_c0(const PhaseIntegralSpec& spec) {
    double xs = spec.kind == PhaseKind::Scaled ? spec.X : 1.0;
    return static_cast<double>(spec.m) * xs;
}

void validate_window(const PhaseIntegralSpec& spec) {
    if (spec.a1 < 1 || spec.l < 1)
        throw Error(errc::bad_config, "phase spec needs a1 >= 1 and l >= 1");
    if (!(spec.X > 0.0))
        throw Error(errc::bad_config, "phase spec needs X > 0");
    if (!(spec.lo < spec.hi))
        throw Error(errc::bad_config, "phase spec needs lo < hi");
    // The 1/x term forbids windows that touch the origin; the purely linear
    // phase (m = 0) is the one degenerate family allowed down to lo = 0.
    if (spec.m != 0 && !(spec.lo >= 1.0))
        throw Error(errc::bad_config, "phase spec with m != 0 needs lo >= 1");
    if (spec.m == 0 && !(spec.lo >= 0.0))
        throw Error(errc::bad_config, "phase spec needs lo >= 0");
}

double dphase(const PhaseIntegralSpec& spec, double x) {
    double c0 = coeff_c0(spec);
    // m = 0 windows may legitimately touch x = 0; avoid the 0/0 there.
    double curv = c0 == 0.0 ? 0.0 : c0 / (x * x);
    return -static_cast<double>(spec.n) / static_cast<double>(spec.a1) + curv;
}

// Stationary point if it lies strictly inside (lo, hi), otherwise 0.
double interior_stationary_point(const PhaseIntegralSpec& spec) {
    if (spec.m == 0 || spec.n == 0)
        return 0.0;
    double ratio = coeff_c0(spec) * static_cast<double>(spec.a1) / static_cast<double>(spec.n);
    if (!(ratio > 0.0))
        return 0.0;
    double x0 = std::sqrt(ratio);
    return (x0 > spec.lo && x0 < spec.hi) ? x0 : 0.0;
}

// Panel edges covering one monotone-|h'| piece [a, b].  from_left means the
// large-|h'| end is a (the walk direction of shrinking |h'|).
void walk_piece(const PhaseIntegralSpec& spec, double a, double b, bool from_left,
                std::vector<double>& edges) {
    double len = b - a;
    if (!(len > 0.0))
        return;
    double cur = from_left ? a : b;
    while (true) {
        double remaining = from_left ? b - cur : cur - a;
        if (!(remaining > 0.0))
            break;
        double slope = std::fabs(dphase(spec, cur));
        double step = slope > 0.0 ? 0.25 / slope : remaining;
        step = std::min(step, remaining);
        step = std::max(step, len * 1e-9);
        if (step >= remaining * (1.0 - 1e-12))
            break;
        cur = from_left ? cur + step : cur - step;
        edges.push_back(cur);
        if (edges.size() > kMaxPanelEdges)
            throw Error(errc::budget_exceeded, "oscillatory panel budget exceeded");
    }
}

std::complex<double> quad_with_amplitude(const PhaseIntegralSpec& spec,
                                         const std::function<double(double)>* g, double tol) {
    validate_window(spec);
    if (!(tol > 0.0))
        throw Error(errc::bad_config, "quadrature tolerance must be positive");

    double x0 = interior_stationary_point(spec);
    auto hval = [&](double x) { return phase_value(spec, x); };
    double cycles = x0 > 0.0 ? std::fabs(hval(x0) - hval(spec.lo)) +
                                   std::fabs(hval(spec.hi) - hval(x0))
                             : std::fabs(hval(spec.hi) - hval(spec.lo));
    if (!(cycles <= kMaxPhaseCycles))
        throw Error(errc::budget_exceeded, "phase variation exceeds the cycle budget");

    std::vector<double> edges;
    if (x0 > 0.0) {
        walk_piece(spec, spec.lo, x0, true, edges);
        edges.push_back(x0);
        walk_piece(spec, x0, spec.hi, false, edges);
    } else {
        bool from_left = std::fabs(dphase(spec, spec.lo)) >= std::fabs(dphase(spec, spec.hi));
        walk_piece(spec, spec.lo, spec.hi, from_left, edges);
    }

    auto f = [&](double x) -> std::complex<double> {
        std::complex<double> v = e_of(hval(x));
        return g ? (*g)(x)*v : v;
    };
    QuadratureOptions opt;
    opt.abs_tol = 0.5 * tol;
    opt.rel_tol = 0.0;
    opt.max_panels = std::max<long>(400000, 8 * static_cast<long>(edges.size()) + 1000);
    return integrate(f, spec.lo, spec.hi, edges, opt).value;
}

// Shared validation and geometry for both stationary evaluators.
struct StationaryFrame {
    double x0;
    double amp;   // 1/sqrt(|h''(x0)|)
    double hx0;   // phase at the stationary point
    double lambda2, lambda3, lambda4;
};

StationaryFrame stationary_frame(const PhaseIntegralSpec& spec) {
    validate_window(spec);
    if (spec.m <= 0 || spec.n <= 0)
        throw Error(errc::bad_config, "stationary evaluation needs m > 0 and n > 0");
    double c0 = coeff_c0(spec);
    double x0 = std::sqrt(c0 * static_cast<double>(spec.a1) / static_cast<double>(spec.n));
    double margin = 0.01 * (spec.hi - spec.lo);
    if (!(x0 > spec.lo + margin && x0 < spec.hi - margin))
        throw Error(errc::stationary_point_outside,
                    "stationary point outside the window interior");
    StationaryFrame fr;
    fr.x0 = x0;
    fr.amp = std::pow(c0, 0.25) * std::pow(static_cast<double>(spec.a1), 0.75) /
             (std::sqrt(2.0) * std::pow(static_cast<double>(spec.n), 0.75));
    fr.hx0 = -2.0 * std::sqrt(c0 * static_cast<double>(spec.n) / static_cast<double>(spec.a1));
    fr.lambda2 = 2.0 * c0 / (spec.hi * spec.hi * spec.hi);
    fr.lambda3 = 6.0 * c0 / std::pow(spec.lo, 4.0);
    fr.lambda4 = 24.0 * c0 / std::pow(spec.lo, 5.0);
    return fr;
}

} // namespace

PhaseIntegralSpec default_scaled_spec(std::int64_t m, std::int64_t n, std::int64_t a1,
                                      std::int64_t l, double X) {
    PhaseIntegralSpec spec;
    spec.m = m;
    spec.n = n;
    spec.a1 = a1;
    spec.l = l;
    spec.X = X;
    spec.lo = static_cast<double>(l) * static_cast<double>(a1);
    spec.hi = X;
    spec.kind = PhaseKind::Scaled;
    return spec;
}

double phase_value(const PhaseIntegralSpec& spec, double x) {
    double c0 = coeff_c0(spec);
    double recip = c0 == 0.0 ? 0.0 : c0 / x;
    return -static_cast<double>(spec.n) * x / static_cast<double>(spec.a1) - recip;
}

double phase_derivative(const PhaseIntegralSpec& spec, double x, int order) {
    double c0 = coeff_c0(spec);
    switch (order) {
        case 0: return phase_value(spec, x);
        case 1: return dphase(spec, x);
        case 2: return -2.0 * c0 / (x * x * x);
        case 3: return 6.0 * c0 / (x * x * x * x);
        case 4: return -24.0 * c0 / (x * x * x * x * x);
        default: throw Error(errc::bad_config, "phase derivative order must be 0..4");
    }
}

std::complex<double> integral_quadrature(const PhaseIntegralSpec& spec, double tol) {
    return quad_with_amplitude(spec, nullptr, tol);
}

StationaryReport stationary_phase_main(const PhaseIntegralSpec& spec, double tol) {
    StationaryFrame fr = stationary_frame(spec);
    StationaryReport rep;
    rep.x0 = fr.x0;
    rep.lambda2 = fr.lambda2;
    rep.lambda3 = fr.lambda3;
    rep.lambda4 = fr.lambda4;
    double s2 = 1.0 / std::sqrt(fr.lambda2);
    rep.R1 = std::min(1.0 / (fr.lambda2 * (fr.x0 - spec.lo)), s2) +
             std::min(1.0 / (fr.lambda2 * (spec.hi - fr.x0)), s2);
    rep.R2 = (spec.hi - spec.lo) *
             (fr.lambda4 / (fr.lambda2 * fr.lambda2) +
              fr.lambda3 * fr.lambda3 / (fr.lambda2 * fr.lambda2 * fr.lambda2));
    // Concave phase, so the quarter-turn goes the other way: e(h(x0) - 1/8).
    rep.main_term = fr.amp * e_of(fr.hx0 - 0.125);
    rep.quadrature_value = quad_with_amplitude(spec, nullptr, tol);
    return rep;
}

StationaryReport weighted_stationary_main(const PhaseIntegralSpec& spec,
                                          const AmplitudeWeight& weight, double tol) {
    if (!weight.g)
        throw Error(errc::bad_config, "weighted evaluation needs an amplitude function");
    if (!(weight.sup_bound > 0.0) || !(weight.decay_scale > 0.0))
        throw Error(errc::bad_config, "amplitude bounds must be positive");
    StationaryFrame fr = stationary_frame(spec);
    StationaryReport rep;
    rep.x0 = fr.x0;
    rep.lambda2 = fr.lambda2;
    rep.lambda3 = fr.lambda3;
    rep.lambda4 = fr.lambda4;
    rep.main_term = weight.g(fr.x0) * fr.amp * e_of(fr.hx0 - 0.125);

    // Endpoint terms of the weighted expansion, written for the original
    // concave phase (the convex-phase lemma applied to -h, conjugated back).
    auto endpoint = [&](double x) {
        return weight.g(x) * e_of(phase_value(spec, x)) /
               std::complex<double>(0.0, kTwoPi * dphase(spec, x));
    };
    rep.boundary_term = endpoint(spec.hi) - endpoint(spec.lo);

    // Budget in the (P, Q, T, V) parameterization: Q is the window length and
    // P = lambda2*Q^2, so that |h''| >= P/Q^2 holds on the whole window; the
    // amplitude scales T and V come from the caller.
    double Q = spec.hi - spec.lo;
    double P = fr.lambda2 * Q * Q;
    double T = weight.sup_bound;
    double V = weight.decay_scale;
    double shape = (1.0 + Q / V) * (1.0 + Q / V);
    double dl = fr.x0 - spec.lo;
    double dr = spec.hi - fr.x0;
    rep.R1 = std::pow(Q, 4.0) * T / (P * P) * shape * (1.0 / (dl * dl * dl) + 1.0 / (dr * dr * dr));
    rep.R2 = Q * T / std::pow(P, 1.5) * shape;
    rep.quadrature_value = quad_with_amplitude(spec, &weight.g, tol);
    return rep;
}

DerivativeBoundReport derivative_bound_audit(const PhaseIntegralSpec& spec, int k, double tol) {
    if (k != 1 && k != 2)
        throw Error(errc::bad_config, "derivative bound audit supports k = 1 or 2");
    validate_window(spec);
    DerivativeBoundReport rep;
    rep.order = k;
    if (k == 1) {
        double dlo = dphase(spec, spec.lo);
        double dhi = dphase(spec, spec.hi);
        if (dlo * dhi <= 0.0)
            throw Error(errc::bad_config,
                        "first-derivative audit needs |h'| bounded away from zero");
        rep.lambda = std::min(std::fabs(dlo), std::fabs(dhi));
        rep.bound = kDerivativeBoundConstant / rep.lambda;
    } else {
        if (spec.m == 0)
            throw Error(errc::bad_config, "second-derivative audit needs m != 0");
        rep.lambda = 2.0 * std::fabs(coeff_c0(spec)) / (spec.hi * spec.hi * spec.hi);
        rep.bound = kDerivativeBoundConstant / std::sqrt(rep.lambda);
    }
    rep.value = quad_with_amplitude(spec, nullptr, tol);
    rep.ratio = std::abs(rep.value) / rep.bound;
    if (rep.ratio > 1.0)
        throw Error(errc::audit_failure, "oscillatory integral exceeds its derivative bound");
    return rep;
}

PerronResult perron_indicator(double x, double c, double T) {
    if (!(x > 0.0) || !(c > 0.0) || !(T > 0.0))
        throw Error(errc::bad_config, "indicator integral needs x, c, T > 0");
    double lx = std::log(x);
    double xc = std::pow(x, c);
    auto f = [&](double t) -> std::complex<double> {
        return xc * std::polar(1.0, t * lx) / std::complex<double>(c, t);
    };
    QuadratureOptions opt;
    opt.abs_tol = 1e-9;
    opt.rel_tol = 0.0;
    opt.max_panels = 2000000;
    if (lx != 0.0) {
        // Keep initial panels to a quarter period of e^(i*t*log x).
        opt.max_initial_width = 0.5 * 3.14159265358979323846 / std::fabs(lx);
    }
    QuadratureResult qr = integrate(f, -T, T, {}, opt);
    PerronResult out;
    out.approx = qr.value.real() / kTwoPi;
    out.bound = x == 1.0 ? c / T : xc * std::min(1.0, 1.0 / (T * std::fabs(lx)));
    return out;
}

} // namespace detcount
