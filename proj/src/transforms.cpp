// Fourier side of the smoothed counting problem.
//
// Everything here reduces to transforms of F_{a,c}(x) = w(x) w(c x / a):
// adaptive quadrature when a handful of frequencies is needed, and a
// uniformly sampled FFT when a whole arithmetic progression of frequencies
// n / D is needed at once.  The FFT window is padded to an exact multiple of
// D so the wanted frequencies land on bins; the oversampling factor keeps
// aliased images beyond the cutoff bandwidth, where the exp(-1/t) ramp makes
// the transform decay faster than any power.

#include "detcount/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "detcount/errors.hpp"
#include "detcount/quadrature.hpp"

namespace detcount {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_query(const TransformQuery& q) {
    if (q.a < 1) throw Error(errc::bad_config, "transform modulus a must be >= 1");
    if (!(q.quadrature_tolerance > 0.0) || q.quadrature_tolerance > 1e-4)
        throw Error(errc::bad_config, "quadrature tolerance must lie in (0, 1e-4]");
    if (std::abs(q.y) > 1e6) throw Error(errc::bad_config, "frequency |y| must be <= 1e6");
}

// Support of x -> w(x) w(rho x) for a real ratio rho.
std::pair<double, double> ratio_support(const WeightProfile& p, double rho) {
    double lo = 1.0 - p.H, hi = p.X + p.H;
    if (rho > 0.0) {
        lo = std::max(lo, (1.0 - p.H) / rho);
        hi = std::min(hi, (p.X + p.H) / rho);
    } else if (rho < 0.0) {
        lo = std::max(lo, (p.X + p.H) / rho);
        hi = std::min(hi, (1.0 - p.H) / rho);
    } else if (weight_value(p, 0.0) == 0.0) {
        return {0.0, 0.0};
    }
    return {lo, hi};
}

double ratio_product(const WeightProfile& p, double rho, double x) {
    return weight_value(p, x) * weight_value(p, rho * x);
}

// Ramp corners of both factors, for use as quadrature breakpoints.
std::vector<double> ratio_breakpoints(const WeightProfile& p, double rho) {
    std::vector<double> cuts{1.0 - p.H, 1.0, p.X, p.X + p.H};
    if (rho != 0.0)
        for (double t : {1.0 - p.H, 1.0, p.X, p.X + p.H}) cuts.push_back(t / rho);
    return cuts;
}

std::complex<double> fhat_ratio(const WeightProfile& p, double rho, double y, double tol) {
    auto [lo, hi] = ratio_support(p, rho);
    if (!(hi > lo)) return 0.0;
    QuadratureOptions opt;
    opt.abs_tol = tol;
    opt.rel_tol = tol;
    if (std::abs(y) * (hi - lo) > 2.0) opt.max_initial_width = 0.5 / std::abs(y);
    auto cuts = ratio_breakpoints(p, rho);
    auto f = [&](double x) -> std::complex<double> {
        double v = ratio_product(p, rho, x);
        if (v == 0.0) return 0.0;
        double ang = -kTwoPi * x * y;
        return std::complex<double>(v * std::cos(ang), v * std::sin(ang));
    };
    return integrate(f, lo, hi, cuts, opt).value;
}

size_t next_pow2(double need) {
    size_t k = 16;
    while (static_cast<double>(k) < need) k <<= 1;
    return k;
}

// In-place forward FFT, e^(-2 pi i j k / K); the running twiddle is resynced
// from polar form every 256 steps to keep its drift near machine epsilon.
void fft_inplace(std::vector<std::complex<double>>& a) {
    size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = -kTwoPi / static_cast<double>(len);
        std::complex<double> wstep = std::polar(1.0, ang);
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w = 1.0;
            for (size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                if ((k & 255) == 255)
                    w = std::polar(1.0, ang * static_cast<double>(k + 1));
                else
                    w *= wstep;
            }
        }
    }
}

} // namespace

double cutoff_product(const TransformQuery& q, double x) {
    validate_query(q);
    return ratio_product(q.profile, static_cast<double>(q.c) / static_cast<double>(q.a), x);
}

std::pair<double, double> cutoff_support(const TransformQuery& q) {
    validate_query(q);
    return ratio_support(q.profile, static_cast<double>(q.c) / static_cast<double>(q.a));
}

std::complex<double> fhat(const TransformQuery& q) {
    validate_query(q);
    double rho = static_cast<double>(q.c) / static_cast<double>(q.a);
    return fhat_ratio(q.profile, rho, q.y, q.quadrature_tolerance);
}

FhatBatch fhat_batch(const TransformQuery& q, i64 freq_denom, i64 n_max, double oversample) {
    validate_query(q);
    if (freq_denom < 1) throw Error(errc::bad_config, "frequency denominator must be >= 1");
    if (n_max < 0) throw Error(errc::bad_config, "n_max must be >= 0");
    if (!(oversample >= 1.2)) throw Error(errc::bad_config, "oversample must be >= 1.2");

    FhatBatch out;
    out.n_max = n_max;
    out.value.assign(static_cast<size_t>(2 * n_max + 1), {0.0, 0.0});
    const WeightProfile& p = q.profile;
    double rho = static_cast<double>(q.c) / static_cast<double>(q.a);
    auto [lo, hi] = ratio_support(p, rho);
    if (!(hi > lo)) return out;

    double D = static_cast<double>(freq_denom);
    i64 P = static_cast<i64>(std::ceil((hi - lo) / D)) + 1;
    double L = static_cast<double>(P) * D;
    double x0 = lo - 0.5 * (L - (hi - lo));

    // Sharpest feature of F: the narrower of the two ramps.
    double ramp = p.H * std::min(1.0, 1.0 / std::max(1.0, std::abs(rho)));
    double need = std::max({2.0 * oversample * static_cast<double>(n_max * P),
                            oversample * 80.0 * L / ramp, 64.0});
    size_t K = next_pow2(need);
    if (K > (1u << 22))
        throw Error(errc::budget_exceeded, "batch transform sample count exceeds 2^22");

    double delta = L / static_cast<double>(K);
    std::vector<std::complex<double>> samples(K, {0.0, 0.0});
    for (size_t j = 0; j < K; ++j) {
        double x = x0 + delta * static_cast<double>(j);
        samples[j] = ratio_product(p, rho, x);
    }
    fft_inplace(samples);

    for (i64 n = -n_max; n <= n_max; ++n) {
        i64 k = ((n * P) % static_cast<i64>(K) + static_cast<i64>(K)) % static_cast<i64>(K);
        double ang = -kTwoPi * x0 * static_cast<double>(n) / D;
        std::complex<double> shift(std::cos(ang), std::sin(ang));
        out.value[static_cast<size_t>(n + n_max)] = delta * shift * samples[static_cast<size_t>(k)];
    }
    return out;
}

std::complex<double> ghat(i64 a1, i64 l, const WeightProfile& p, double u, double v,
                          double tol) {
    if (a1 < 1 || l < 1) throw Error(errc::bad_config, "ghat requires a1, l >= 1");
    if (!(tol > 0.0) || tol > 1e-4)
        throw Error(errc::bad_config, "ghat tolerance must lie in (0, 1e-4]");
    double ld = static_cast<double>(l);
    double ylo = (1.0 - p.H) / ld, yhi = (p.X + p.H) / ld;

    // Outer kinks: where the inner support endpoints cross the w(x) corners,
    // i.e. y = a1 * t / s for corner values t, s.
    std::vector<double> cuts{ylo, 1.0 / ld, p.X / ld, yhi};
    for (double t : {1.0 - p.H, 1.0, p.X, p.X + p.H})
        for (double s : {1.0 - p.H, 1.0, p.X, p.X + p.H})
            if (s != 0.0) cuts.push_back(static_cast<double>(a1) * t / s);

    double inner_tol = std::max(tol * 0.02 / std::max(1.0, yhi - ylo), 1e-13);
    auto outer = [&](double y) -> std::complex<double> {
        double wl = weight_value(p, ld * y);
        if (wl == 0.0) return 0.0;
        std::complex<double> inner = fhat_ratio(p, y / static_cast<double>(a1), u, inner_tol);
        double ang = -kTwoPi * v * y;
        return wl * inner * std::complex<double>(std::cos(ang), std::sin(ang));
    };
    QuadratureOptions opt;
    opt.abs_tol = tol;
    opt.rel_tol = tol;
    if (std::abs(v) * (yhi - ylo) > 2.0) opt.max_initial_width = 0.5 / std::abs(v);
    return integrate(outer, ylo, yhi, cuts, opt).value;
}

i64 default_poisson_n_max(i64 q, const WeightProfile& profile) {
    double band = static_cast<double>(q) * profile.X / profile.H;
    return 40 * std::max<i64>(1, static_cast<i64>(std::ceil(band)));
}

PoissonCheck poisson_progression_check(i64 alpha, i64 q, const TransformQuery& query,
                                       i64 n_max) {
    validate_query(query);
    if (q < 1) throw Error(errc::bad_config, "progression modulus must be >= 1");
    if (alpha < 0 || alpha >= q) throw Error(errc::bad_config, "residue must satisfy 0 <= alpha < q");
    if (n_max < 0) throw Error(errc::bad_config, "n_max must be >= 0");

    PoissonCheck out;
    out.n_max = n_max;
    auto [lo, hi] = cutoff_support(query);
    if (hi > lo) {
        i64 blo = static_cast<i64>(std::floor(lo)) + 1;
        i64 bhi = static_cast<i64>(std::ceil(hi)) - 1;
        i64 b = alpha + q * floor_div(blo - alpha + q - 1, q);
        for (; b <= bhi; b += q) {
            double term = cutoff_product(query, static_cast<double>(b));
            out.lhs += term;
            ++out.lhs_terms;
        }
    }

    auto batch = fhat_batch(query, q, n_max);
    std::complex<double> acc = batch.at(0);
    for (i64 n = 1; n <= n_max; ++n) {
        double ang = kTwoPi * static_cast<double>((alpha * n) % q) / static_cast<double>(q);
        std::complex<double> e(std::cos(ang), std::sin(ang));
        acc += e * batch.at(n) + std::conj(e) * batch.at(-n);
    }
    acc /= static_cast<double>(q);
    out.rhs = acc.real();
    out.defect = std::abs(std::complex<double>(out.lhs, 0.0) - acc);
    return out;
}

SwDecomposition sw_decompose(i64 r, i64 X, double H) {
    if (r == 0) throw Error(errc::bad_config, "sw_decompose requires r != 0");
    if (X < 1) throw Error(errc::bad_config, "sw_decompose requires X >= 1");
    if (X > kSwDirectLimit)
        throw Error(errc::limit_exceeded, "direct triple sum budget caps X at 500");
    WeightProfile p = make_weight(static_cast<double>(X), H);
    const double xlo = 1.0 - H, xhi = static_cast<double>(X) + H;

    SwDecomposition out;

    // Direct triple sum over (a, c, b): for each modulus a and column entry c,
    // b runs over one residue class mod a / gcd(a, c) inside the window where
    // all four weights can be nonzero.
    double sw = 0.0, sw_comp = 0.0; // Kahan
    auto add_sw = [&](double t) {
        double yk = t - sw_comp;
        double s = sw + yk;
        sw_comp = (s - sw) - yk;
        sw = s;
    };
    i64 a_hi = static_cast<i64>(std::ceil(xhi)) - 1;
    i64 c_lo = static_cast<i64>(std::floor(xlo)) + 1;
    i64 c_hi = static_cast<i64>(std::ceil(xhi)) - 1;
    for (i64 a = 1; a <= a_hi; ++a) {
        double wa = weight_value(p, static_cast<double>(a));
        if (wa == 0.0) continue;
        double ad = static_cast<double>(a);
        for (i64 c = c_lo; c <= c_hi; ++c) {
            double wc = weight_value(p, static_cast<double>(c));
            if (wc == 0.0) continue;
            u64 g = (c == 0) ? static_cast<u64>(a)
                             : std::gcd(static_cast<u64>(a), static_cast<u64>(std::abs(c)));
            if (r % static_cast<i64>(g) != 0) continue;
            i64 m = a / static_cast<i64>(g);
            i64 r1 = r / static_cast<i64>(g);
            i64 b0 = 0;
            if (m > 1) {
                i64 c1m = ((c / static_cast<i64>(g)) % m + m) % m;
                i64 inv = static_cast<i64>(mod_inverse(static_cast<u64>(c1m), static_cast<u64>(m)));
                b0 = (((-r1 % m + m) % m) * inv) % m;
            }
            double blo = xlo, bhi = xhi;
            if (c > 0) {
                blo = std::max(blo, ad * xlo / static_cast<double>(c));
                bhi = std::min(bhi, ad * xhi / static_cast<double>(c));
            } else if (c < 0) {
                blo = std::max(blo, ad * xhi / static_cast<double>(c));
                bhi = std::min(bhi, ad * xlo / static_cast<double>(c));
            }
            if (!(bhi > blo)) continue;
            i64 ib_lo = static_cast<i64>(std::floor(blo)) + 1;
            i64 ib_hi = static_cast<i64>(std::ceil(bhi)) - 1;
            i64 b = b0 + m * floor_div(ib_lo - b0 + m - 1, m);
            for (; b <= ib_hi; b += m) {
                double wb = weight_value(p, static_cast<double>(b));
                if (wb == 0.0) continue;
                double wd = weight_value(p, static_cast<double>(b) * static_cast<double>(c) / ad);
                if (wd == 0.0) continue;
                add_sw(wa * wc * wb * wd);
            }
        }
    }
    out.S_w = sw;

    // Frequency side: l = gcd(a, c) must divide r; a = l a1, c = l c1.
    i64 N = static_cast<i64>(std::ceil(40.0 * static_cast<double>(X) / H));
    out.n_cutoff = N;
    double aw = 0.0;
    double bw = 0.0, bw_comp = 0.0;
    auto add_bw = [&](double t) {
        double yk = t - bw_comp;
        double s = bw + yk;
        bw_comp = (s - bw) - yk;
        bw = s;
    };
    std::vector<double> cosv, sinv;
    for (u64 l : divisors_of(static_cast<u64>(std::abs(r)))) {
        i64 li = static_cast<i64>(l);
        if (static_cast<double>(li) >= xhi) continue;
        i64 r1 = r / li;
        i64 a1_hi = static_cast<i64>(std::ceil(xhi / static_cast<double>(li))) - 1;
        for (i64 a1 = 1; a1 <= a1_hi; ++a1) {
            double wla = weight_value(p, static_cast<double>(li * a1));
            if (wla == 0.0) continue;
            cosv.assign(static_cast<size_t>(a1), 0.0);
            sinv.assign(static_cast<size_t>(a1), 0.0);
            for (i64 k = 0; k < a1; ++k) {
                double ang = kTwoPi * static_cast<double>(k) / static_cast<double>(a1);
                cosv[static_cast<size_t>(k)] = std::cos(ang);
                sinv[static_cast<size_t>(k)] = std::sin(ang);
            }
            i64 c1_lo = static_cast<i64>(std::floor(xlo / static_cast<double>(li))) + 1;
            i64 c1_hi = static_cast<i64>(std::ceil(xhi / static_cast<double>(li))) - 1;
            for (i64 c1 = c1_lo; c1 <= c1_hi; ++c1) {
                u64 gg = (c1 == 0) ? static_cast<u64>(a1)
                                   : std::gcd(static_cast<u64>(a1),
                                              static_cast<u64>(std::abs(c1)));
                if (gg != 1) continue;
                double wlc = weight_value(p, static_cast<double>(li * c1));
                if (wlc == 0.0) continue;
                // Frequencies past n ~ 40 max(a1,|c1|) / H sit where the ramp
                // smoothness has pushed |Fhat| below 1e-14; requesting them
                // would only inflate the FFT length, so the batch is trimmed
                // to the certified-negligible floor (with margin) per pair.
                double band = 44.0 * static_cast<double>(std::max(a1, std::abs(c1))) / H;
                i64 n_eff = std::min<i64>(N, static_cast<i64>(std::ceil(band)) + 32);
                TransformQuery tq;
                tq.a = a1;
                tq.c = c1;
                tq.profile = p;
                auto batch = fhat_batch(tq, a1, n_eff);
                double coeff = wla * wlc / static_cast<double>(a1);
                aw += coeff * batch.at(0).real();

                i64 phs = 0;
                if (a1 > 1) {
                    i64 c1m = ((c1 % a1) + a1) % a1;
                    i64 cbar = static_cast<i64>(
                        mod_inverse(static_cast<u64>(c1m), static_cast<u64>(a1)));
                    phs = (((-r1 % a1 + a1) % a1) * (cbar % a1)) % a1;
                }
                double acc = 0.0;
                i64 idx = 0;
                for (i64 n = 1; n <= n_eff; ++n) {
                    idx += phs;
                    if (idx >= a1) idx -= a1;
                    const std::complex<double>& fv = batch.at(n);
                    acc += 2.0 * (cosv[static_cast<size_t>(idx)] * fv.real() -
                                  sinv[static_cast<size_t>(idx)] * fv.imag());
                }
                add_bw(coeff * acc);
            }
        }
    }
    out.A_w = aw;
    out.B_w_direct = out.S_w - out.A_w;
    out.B_w_fourier = bw;
    return out;
}

} // namespace detcount
