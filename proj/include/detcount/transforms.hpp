#pragma once

#include <complex>
#include <vector>

#include "detcount/arith.hpp"
#include "detcount/weight.hpp"

namespace detcount {

// Fourier transforms of the product cutoff
//   F_{a,c}(x) = w(x) * w(c x / a),
// the two-variable analogue G, and the Poisson-summation identities built
// from them.  Conventions: e(t) = exp(2 pi i t) and
//   Fhat(y) = integral F(x) e(-x y) dx.

struct TransformQuery {
    i64 a = 1; // >= 1
    i64 c = 1; // any sign; c = 0 degenerates to the constant w(0) factor
    WeightProfile profile;
    double y = 0.0;                      // |y| <= 1e6
    double quadrature_tolerance = 1e-9;  // in (0, 1e-4]
};

// w(x) * w(c x / a).
double cutoff_product(const TransformQuery& q, double x);

// Support interval [lo, hi] of x -> F_{a,c}(x); empty reported as lo >= hi.
std::pair<double, double> cutoff_support(const TransformQuery& q);

// Direct adaptive quadrature of Fhat(y).  Oracle-grade: cost grows linearly
// with |y| times the support length, so keep |y| moderate.
std::complex<double> fhat(const TransformQuery& q);

// Fhat at every rational frequency n / freq_denom for |n| <= n_max, via one
// uniformly sampled radix-2 FFT.  The sampling window is padded to an exact
// multiple of freq_denom so that frequency n / freq_denom falls on DFT bin
// n * P; oversampling keeps the aliased images outside the cutoff bandwidth,
// where the ramp smoothness makes them negligible.
struct FhatBatch {
    i64 n_max = 0;
    std::vector<std::complex<double>> value; // index n + n_max
    std::complex<double> at(i64 n) const { return value[static_cast<size_t>(n + n_max)]; }
};
FhatBatch fhat_batch(const TransformQuery& q, i64 freq_denom, i64 n_max,
                     double oversample = 1.5);

// Ghat(u, v) = double integral of w(x) w(l y) w(x y / a1) e(-u x - v y),
// outer-y adaptive panels over an inner-x adaptive transform.
std::complex<double> ghat(i64 a1, i64 l, const WeightProfile& profile, double u, double v,
                          double tol = 1e-8);

// Truncated Poisson summation along the progression b = alpha (mod q):
//   lhs = sum of F_{a,c}(b) over the progression (finite support, exact),
//   rhs = (1/q) sum_{|n| <= n_max} e(alpha n / q) Fhat(n / q).
struct PoissonCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double defect = 0.0;
    i64 n_max = 0;
    i64 lhs_terms = 0;
};
PoissonCheck poisson_progression_check(i64 alpha, i64 q, const TransformQuery& query,
                                       i64 n_max);

// Default truncation: 40 * max(1, q X / H) frequencies, far past the cutoff
// bandwidth q / H, so the omitted tail sits below the quadrature floor.
i64 default_poisson_n_max(i64 q, const WeightProfile& profile);

// Smoothed determinant count and its Poisson split.  With w = make_weight(X,H),
//   S_w = sum over a >= 1 and all integers b, c with b c = -r (mod a) of
//         w(a) w(b) w(c) w(b c / a),
// decomposed through l = gcd(a, c) (only l | r contributes), a = l a1,
// c = l c1 with gcd(a1, c1) = 1:
//   A_w = sum w(l a1) w(l c1) Fhat_{a1,c1}(0) / a1            (zero frequency)
//   B_w = sum w(l a1) w(l c1) (1/a1) sum_{0 < |n| <= N}
//         e(-n r1 cbar1 / a1) Fhat_{a1,c1}(n / a1),  r1 = r / l.
// S_w is evaluated by the direct triple sum; A_w and the truncated B_w come
// from the frequency side with N = ceil(40 X / H) per modulus, and
// B_w_direct = S_w - A_w is reported next to B_w_fourier.
struct SwDecomposition {
    double S_w = 0.0;
    double A_w = 0.0;
    double B_w_direct = 0.0;
    double B_w_fourier = 0.0;
    i64 n_cutoff = 0;
};

inline constexpr i64 kSwDirectLimit = 500;

SwDecomposition sw_decompose(i64 r, i64 X, double H);

} // namespace detcount
