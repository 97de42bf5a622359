// Smooth cutoff with derivatives through order 4.
//
// psi(t) = f(t)/(f(t)+f(1-t)) with f(t) = exp(-1/t) needs derivatives of a
// quotient of exponentials of reciprocals; rather than hand-expanding the
// chain rule four deep, everything is computed in degree-4 truncated Taylor
// jets (value plus four derivatives), which keeps each formula one line and
// makes the order parameter uniform.

#include "detcount/weight.hpp"

#include <array>
#include <cmath>

#include "detcount/errors.hpp"

namespace detcount {
namespace {

// Degree-4 jet: coefficients are derivatives (not divided by factorials),
// j.d[k] = d^k/dt^k at the expansion point.
struct Jet {
    std::array<double, 5> d{};
};

Jet jet_const(double v) {
    Jet j;
    j.d[0] = v;
    return j;
}

Jet jet_var(double v) {
    Jet j;
    j.d[0] = v;
    j.d[1] = 1.0;
    return j;
}

Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < 5; ++k) r.d[k] = a.d[k] + b.d[k];
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    // Leibniz with binomial weights since coefficients are raw derivatives.
    static constexpr double binom[5][5] = {{1, 0, 0, 0, 0},
                                           {1, 1, 0, 0, 0},
                                           {1, 2, 1, 0, 0},
                                           {1, 3, 3, 1, 0},
                                           {1, 4, 6, 4, 1}};
    Jet r;
    for (int k = 0; k < 5; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i) acc += binom[k][i] * a.d[i] * b.d[k - i];
        r.d[k] = acc;
    }
    return r;
}

Jet jet_recip(const Jet& a) {
    // r = 1/a via r0 = 1/a0 and (a*r)' = 0 recurrences.
    static constexpr double binom[5][5] = {{1, 0, 0, 0, 0},
                                           {1, 1, 0, 0, 0},
                                           {1, 2, 1, 0, 0},
                                           {1, 3, 3, 1, 0},
                                           {1, 4, 6, 4, 1}};
    Jet r;
    r.d[0] = 1.0 / a.d[0];
    for (int k = 1; k < 5; ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) acc += binom[k][i] * a.d[i] * r.d[k - i];
        r.d[k] = -acc / a.d[0];
    }
    return r;
}

Jet jet_exp(const Jet& a) {
    // e = exp(a): e' = a' e gives e^{(k)} = sum binom(k-1,i) a^{(i+1)} e^{(k-1-i)}.
    static constexpr double binom[4][4] = {
        {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    Jet r;
    r.d[0] = std::exp(a.d[0]);
    for (int k = 1; k < 5; ++k) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += binom[k - 1][i] * a.d[i + 1] * r.d[k - 1 - i];
        r.d[k] = acc;
    }
    return r;
}

// f(t) = exp(-1/t) as a jet in t.
Jet jet_f(const Jet& t) {
    return jet_exp(jet_const(-1.0) * jet_recip(t));
}

// psi on the open unit interval.  Outside [1/708, 1 - 1/708] the subdominant
// exponential underflows double precision together with all four derivative
// combinations, so the jet collapses to the exact constant 0 or 1.
Jet psi_jet(double t) {
    constexpr double kFlat = 1.0 / 708.0;
    if (t <= kFlat) return jet_const(0.0);
    if (t >= 1.0 - kFlat) return jet_const(1.0);
    Jet tv = jet_var(t);
    Jet ft = jet_f(tv);
    Jet fu = jet_f(jet_const(1.0) + jet_const(-1.0) * tv);
    return ft * jet_recip(ft + fu);
}

} // namespace

double ramp_value(double t) {
    // Scalar fast path: f(t)/(f(t)+f(1-t)) = 1/(1 + exp(1/t - 1/(1-t))).
    // The jet machinery is only needed for derivatives.
    constexpr double kFlat = 1.0 / 708.0;
    if (t <= kFlat) return 0.0;
    if (t >= 1.0 - kFlat) return 1.0;
    double d = 1.0 / t - 1.0 / (1.0 - t);
    if (d > 700.0) return 0.0;
    if (d < -700.0) return 1.0;
    return 1.0 / (1.0 + std::exp(d));
}

double ramp_derivative(double t, int order) {
    if (order < 0 || order > 4) throw Error(errc::bad_config, "ramp derivative order must be in [0,4]");
    return psi_jet(t).d[static_cast<size_t>(order)];
}

WeightProfile make_weight(double X, double H) {
    if (!(X > 0.0) || !std::isfinite(X) || !std::isfinite(H))
        throw Error(errc::bad_h_range, "weight requires finite X > 0");
    if (!(H >= std::sqrt(X)) || !(H <= X))
        throw Error(errc::bad_h_range, "weight requires sqrt(X) <= H <= X");
    return WeightProfile{X, H, RampShape::ExpSmoothstep};
}

double weight_value(const WeightProfile& p, double x) {
    if (x <= 1.0 - p.H || x >= p.X + p.H) return 0.0;
    if (x >= 1.0 && x <= p.X) return 1.0;
    if (x < 1.0) return ramp_value((x - (1.0 - p.H)) / p.H);
    return ramp_value(((p.X + p.H) - x) / p.H);
}

double weight_derivative(const WeightProfile& p, double x, int order) {
    if (order < 0 || order > 4) throw Error(errc::bad_config, "weight derivative order must be in [0,4]");
    if (order == 0) return weight_value(p, x);
    if (x <= 1.0 - p.H || x >= p.X + p.H) return 0.0;
    if (x >= 1.0 && x <= p.X) return 0.0;
    double scale = 1.0;
    for (int k = 0; k < order; ++k) scale /= p.H;
    if (x < 1.0) return ramp_derivative((x - (1.0 - p.H)) / p.H, order) * scale;
    // Falling ramp: inner derivative is -1/H per order.
    if (order % 2 == 1) scale = -scale;
    return ramp_derivative(((p.X + p.H) - x) / p.H, order) * scale;
}

} // namespace detcount
