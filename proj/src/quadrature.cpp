// Adaptive Gauss-Legendre panels.
//
// The 15-point nodes and weights are generated once by Newton iteration on
// P_15 instead of being transcribed from tables; the recurrence is exact in
// the leading digits and removes a class of copy errors.

#include "detcount/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "detcount/errors.hpp"

namespace detcount {
namespace {

constexpr int kOrder = 15;

struct Rule {
    std::array<double, kOrder> node;   // on [-1, 1]
    std::array<double, kOrder> weight;
};

Rule build_rule() {
    Rule r;
    const int n = kOrder;
    for (int i = 1; i <= n; ++i) {
        double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_n(x) and P_{n-1}(x).
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double deriv = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / deriv;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double deriv = n * (x * p1 - p0) / (x * x - 1.0);
        r.node[static_cast<size_t>(i - 1)] = x;
        r.weight[static_cast<size_t>(i - 1)] = 2.0 / ((1.0 - x * x) * deriv * deriv);
    }
    return r;
}

const Rule& rule() {
    static const Rule r = build_rule();
    return r;
}

std::complex<double> panel_value(const std::function<std::complex<double>(double)>& f, double a,
                                 double b) {
    const Rule& r = rule();
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    std::complex<double> acc = 0.0;
    for (int i = 0; i < kOrder; ++i)
        acc += r.weight[static_cast<size_t>(i)] * f(mid + half * r.node[static_cast<size_t>(i)]);
    return acc * half;
}

struct Panel {
    double a;
    double b;
    std::complex<double> coarse;
    int depth;
};

} // namespace

std::complex<double> gauss15(const std::function<std::complex<double>(double)>& f, double a,
                             double b) {
    return panel_value(f, a, b);
}

QuadratureResult integrate(const std::function<std::complex<double>(double)>& f, double a,
                           double b, std::span<const double> breakpoints,
                           const QuadratureOptions& opt) {
    QuadratureResult out;
    if (!(b > a)) return out;

    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Panel> stack;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        long chunks = 1;
        if (opt.max_initial_width > 0.0) {
            chunks = static_cast<long>(std::ceil((hi - lo) / opt.max_initial_width));
            chunks = std::max(chunks, 1l);
            if (chunks > opt.max_panels)
                throw Error(errc::quadrature_not_converged,
                            "initial oscillation chunking exceeds the panel budget");
        }
        for (long k = 0; k < chunks; ++k) {
            double u = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(chunks);
            double v = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(chunks);
            stack.push_back({u, v, panel_value(f, u, v), 0});
            ++out.panels;
        }
    }

    const double total_len = b - a;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        if (out.panels > opt.max_panels)
            throw Error(errc::quadrature_not_converged, "quadrature panel budget exhausted");
        double mid = 0.5 * (p.a + p.b);
        std::complex<double> left = panel_value(f, p.a, mid);
        std::complex<double> right = panel_value(f, mid, p.b);
        out.panels += 2;
        double delta = std::abs(left + right - p.coarse);
        double local_tol = std::max(opt.abs_tol * (p.b - p.a) / total_len,
                                    opt.rel_tol * std::abs(left + right));
        // Roundoff floor: delta and the absolute share both scale linearly
        // with the panel width once the rule is exact, so without this floor
        // a large-amplitude integrand stalls at a constant delta/tol ratio
        // and the bisection degenerates into a full-depth tree.
        double noise = 32.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(left) + std::abs(right) + std::abs(p.coarse));
        local_tol = std::max(local_tol, noise);
        if (delta <= local_tol || p.depth >= opt.max_depth) {
            if (p.depth >= opt.max_depth && delta > 64.0 * local_tol)
                throw Error(errc::quadrature_not_converged,
                            "panel refinement hit depth limit away from tolerance");
            out.value += left + right;
            out.error_estimate += delta;
        } else {
            stack.push_back({p.a, mid, left, p.depth + 1});
            stack.push_back({mid, p.b, right, p.depth + 1});
        }
    }
    return out;
}

} // namespace detcount
