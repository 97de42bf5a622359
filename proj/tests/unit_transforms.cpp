// Fourier-transform checks.  The direct transform is compared against a
// plain Simpson oracle on a uniform grid; the FFT batch path is compared
// against the direct transform at matching rational frequencies; Poisson
// truncation defects are driven through doubling ladders; the weighted-count
// decomposition is cross-checked against a brute-force triple loop.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "detcount/arith.hpp"
#include "detcount/counting.hpp"
#include "detcount/errors.hpp"
#include "detcount/transforms.hpp"
#include "detcount/weight.hpp"

using namespace detcount;

namespace {

// Uniform Simpson integration of F_{a,c}(x) e(-x y); shares no code with the
// adaptive path.
std::complex<double> oracle_fhat(const TransformQuery& q, int grid = 200001) {
    auto [lo, hi] = cutoff_support(q);
    if (!(hi > lo)) return 0.0;
    double h = (hi - lo) / (grid - 1);
    std::complex<double> acc = 0.0;
    for (int i = 0; i < grid; ++i) {
        double x = lo + h * i;
        double w = (i == 0 || i == grid - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        double f = cutoff_product(q, x);
        double ang = -2.0 * std::numbers::pi * x * q.y;
        acc += w * f * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc * (h / 3.0);
}

TransformQuery make_query(i64 a, i64 c, double X, double H, double y = 0.0) {
    TransformQuery q;
    q.a = a;
    q.c = c;
    q.profile = make_weight(X, H);
    q.y = y;
    q.quadrature_tolerance = 1e-10;
    return q;
}

// Brute-force S_w: every modulus a and every (b, c) in the support window.
double oracle_sw(i64 r, i64 X, double H) {
    auto p = make_weight(static_cast<double>(X), H);
    double lo = 1.0 - H, hi = static_cast<double>(X) + H;
    i64 ilo = static_cast<i64>(std::floor(lo)) + 1;
    i64 ihi = static_cast<i64>(std::ceil(hi)) - 1;
    double acc = 0.0;
    for (i64 a = 1; a <= ihi; ++a) {
        double wa = weight_value(p, static_cast<double>(a));
        if (wa == 0.0) continue;
        for (i64 b = ilo; b <= ihi; ++b) {
            double wb = weight_value(p, static_cast<double>(b));
            if (wb == 0.0) continue;
            for (i64 c = ilo; c <= ihi; ++c) {
                if (((b * c + r) % a) != 0) continue;
                double wc = weight_value(p, static_cast<double>(c));
                if (wc == 0.0) continue;
                double wd = weight_value(p, static_cast<double>(b * c) / static_cast<double>(a));
                if (wd == 0.0) continue;
                acc += wa * wb * wc * wd;
            }
        }
    }
    return acc;
}

} // namespace

TEST_CASE("fhat at zero frequency is sandwiched by plateau and support lengths") {
    // Product plateau [2, 100] has length 98; support is (-9, 110).
    auto q = make_query(2, 1, 100.0, 10.0);
    double v = fhat(q).real();
    CHECK(fhat(q).imag() == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
    CHECK(v >= 98.0);
    CHECK(v <= 119.0);
    // Slowly varying second factor: support-length upper bound still holds.
    auto q2 = make_query(1200, 1, 100.0, 100.0);
    double v2 = fhat(q2).real();
    CHECK(v2 > 0.0);
    CHECK(v2 <= 100.0 - 1.0 + 2.0 * 100.0);
    // Empty overlap gives exactly zero.  With H > 1 both supports straddle 0,
    // so emptiness needs the H = 1 edge case and a negative ratio.
    auto q3 = make_query(1, -1, 1.0, 1.0);
    auto [lo3, hi3] = cutoff_support(q3);
    CHECK(!(hi3 > lo3));
    CHECK(std::abs(fhat(q3)) == 0.0);
}

TEST_CASE("fhat agrees with the Simpson oracle") {
    for (auto [a, c, y] : std::vector<std::tuple<i64, i64, double>>{
             {7, 3, 0.0}, {7, 3, 0.37}, {1, 1, 2.5}, {5, -2, 1.1}, {3, 0, 0.6}}) {
        auto q = make_query(a, c, 40.0, 7.0, y);
        auto got = fhat(q);
        auto want = oracle_fhat(q);
        CHECK(got.real() == doctest::Approx(want.real()).epsilon(1e-7).scale(1.0));
        CHECK(got.imag() == doctest::Approx(want.imag()).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("fhat conjugate symmetry in the frequency") {
    for (auto [a, c] : std::vector<std::pair<i64, i64>>{{7, 3}, {4, -1}, {9, 2}}) {
        for (double y : {0.21, 1.7, 6.3}) {
            auto plus = fhat(make_query(a, c, 40.0, 7.0, y));
            auto minus = fhat(make_query(a, c, 40.0, 7.0, -y));
            CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-9).scale(1.0));
            CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-9).scale(1.0));
        }
    }
}

// Frozen from the first measurement run: max over the sample grid of
// |Fhat(y)| * |y| was 0.290, and of |Fhat(y)| * y^2 * H / (1 + |c/a|) was
// 0.116.  Both shapes come from one resp. two integrations by parts.
constexpr double kFhatDecayK1 = 0.5;
constexpr double kFhatDecayK2 = 0.2;

TEST_CASE("fhat decay audit: one and two integrations by parts") {
    double max1 = 0.0, max2 = 0.0;
    for (auto [a, c] : std::vector<std::pair<i64, i64>>{{7, 3}, {1, 1}, {5, -2}, {2, 9}}) {
        auto profile_q = make_query(a, c, 40.0, 7.0);
        double ca = std::abs(static_cast<double>(c) / static_cast<double>(a));
        for (double y : {0.1, 0.25, 0.6, 1.3, 2.9, 7.7, 20.0}) {
            auto q = profile_q;
            q.y = y;
            double mag = std::abs(fhat(q));
            max1 = std::max(max1, mag * y);
            max2 = std::max(max2, mag * y * y * q.profile.H / (1.0 + ca));
            CHECK(mag * y <= kFhatDecayK1);
            CHECK(mag * y * y * q.profile.H / (1.0 + ca) <= kFhatDecayK2);
        }
    }
    MESSAGE("fhat decay: max |F|*y = " << max1 << ", max |F|*y^2*H/(1+|c/a|) = " << max2);
}

TEST_CASE("fft batch equals direct quadrature at rational frequencies") {
    for (auto [a, c] : std::vector<std::pair<i64, i64>>{{7, 3}, {1, 1}, {5, -2}, {3, 0}}) {
        for (i64 D : {static_cast<i64>(a), static_cast<i64>(5)}) {
            auto q = make_query(a, c, 40.0, 7.0);
            auto batch = fhat_batch(q, D, 64);
            for (i64 n : {0, 1, 2, 7, 19, 40, 64}) {
                auto via_fft = batch.at(n);
                auto qq = q;
                qq.y = static_cast<double>(n) / static_cast<double>(D);
                auto direct = fhat(qq);
                CHECK(via_fft.real() == doctest::Approx(direct.real()).epsilon(1e-8).scale(1.0));
                CHECK(via_fft.imag() == doctest::Approx(direct.imag()).epsilon(1e-8).scale(1.0));
                // Real input: Fhat(-y) = conj Fhat(y), bit-for-bit from the batch.
                CHECK(batch.at(-n).real() == doctest::Approx(via_fft.real()).epsilon(1e-12).scale(1.0));
                CHECK(batch.at(-n).imag() == doctest::Approx(-via_fft.imag()).epsilon(1e-12).scale(1.0));
            }
        }
    }
}

TEST_CASE("ghat: symmetry, positivity at the origin, and the plateau sandwich") {
    auto p = make_weight(30.0, 6.0);
    auto g00 = ghat(30, 1, p, 0.0, 0.0);
    CHECK(g00.imag() == doctest::Approx(0.0).epsilon(1e-7).scale(1.0));
    // Plateau area: x, y in [1, 30] with 30 <= x y <= 900, by Simpson in x.
    double area = 0.0;
    {
        int grid = 20001;
        double h = 29.0 / (grid - 1);
        for (int i = 0; i < grid; ++i) {
            double x = 1.0 + h * i;
            double w = (i == 0 || i == grid - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            double ylo = std::max(1.0, 30.0 / x);
            double yhi = std::min(30.0, 900.0 / x);
            area += w * std::max(0.0, yhi - ylo);
        }
        area *= h / 3.0;
    }
    CHECK(g00.real() >= area);
    CHECK(g00.real() <= (30.0 - 1.0 + 6.0) * (30.0 - 1.0 + 6.0));
    for (auto [u, v] : std::vector<std::pair<double, double>>{{0.3, 0.1}, {-0.7, 0.4}}) {
        auto plus = ghat(30, 2, p, u, v);
        auto minus = ghat(30, 2, p, -u, -v);
        CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-6).scale(1.0));
        CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-6).scale(1.0));
    }
}

// Frozen from the first measurement run over the 5x5 grid below: max of
// |Ghat(u,v)| / min(X/|v|, X/(l|u|)) was 0.0227.
constexpr double kGhatDecayK = 0.05;

TEST_CASE("ghat decay audit on a 5x5 frequency grid") {
    auto p = make_weight(30.0, 6.0);
    const i64 a1 = 40, l = 2;
    double maxr = 0.0;
    for (double u : {-1.5, -0.4, 0.1, 0.7, 2.5}) {
        for (double v : {-2.0, -0.6, 0.2, 0.9, 3.0}) {
            double cap = std::min(p.X / std::abs(v), p.X / (static_cast<double>(l) * std::abs(u)));
            double mag = std::abs(ghat(a1, l, p, u, v));
            maxr = std::max(maxr, mag / cap);
            CHECK(mag <= kGhatDecayK * cap);
        }
    }
    MESSAGE("ghat decay: max |G| / cap = " << maxr);
}

TEST_CASE("poisson check: full-sum case collapses to classical Poisson") {
    auto q = make_query(7, 3, 40.0, 7.0);
    auto res = poisson_progression_check(0, 1, q, default_poisson_n_max(1, q.profile));
    CHECK(res.lhs > 0.0);
    CHECK(res.lhs_terms > 0);
    CHECK(res.defect <= 1e-6 * res.lhs);
}

TEST_CASE("poisson defect halves when the truncation doubles, down to the floor") {
    auto q = make_query(7, 3, 40.0, 7.0);
    const i64 mod = 5;
    const i64 alpha = 3;
    double floor_level = 0.0;
    {
        auto ref = poisson_progression_check(alpha, mod, q, default_poisson_n_max(mod, q.profile));
        floor_level = std::max(1e-10 * (1.0 + std::abs(ref.lhs)), 4.0 * ref.defect);
    }
    double prev = -1.0;
    for (i64 n = 8; n <= 512; n *= 2) {
        double d = poisson_progression_check(alpha, mod, q, n).defect;
        if (prev >= 0.0 && prev > floor_level) CHECK(d <= 0.5 * prev);
        if (prev >= 0.0) CHECK(d <= prev * 1.0 + floor_level); // monotone up to floor
        prev = d;
    }
    CHECK(prev <= floor_level);
}

TEST_CASE("poisson residues partition the full sum, and defects meet the bound") {
    auto q = make_query(7, 3, 40.0, 7.0);
    for (i64 mod : {3, 7, 13}) {
        double total = 0.0;
        i64 n_max = default_poisson_n_max(mod, q.profile);
        for (i64 alpha = 0; alpha < mod; ++alpha) {
            auto res = poisson_progression_check(alpha, mod, q, n_max);
            CHECK(res.defect <= 1e-4 * (1.0 + res.lhs));
            total += res.lhs;
        }
        auto full = poisson_progression_check(0, 1, q, 8);
        CHECK(total == doctest::Approx(full.lhs).epsilon(1e-10));
    }
}

TEST_CASE("sw_decompose matches the brute-force triple loop") {
    for (i64 r : {1, 2, -3}) {
        auto got = sw_decompose(r, 30, 6.0);
        double want = oracle_sw(r, 30, 6.0);
        CHECK(got.S_w == doctest::Approx(want).epsilon(1e-10));
        CHECK(got.B_w_direct == doctest::Approx(got.S_w - got.A_w).epsilon(1e-12));
    }
}

TEST_CASE("zero and nonzero frequencies reassemble the weighted count") {
    for (auto [r, X, H] : std::vector<std::tuple<i64, i64, double>>{
             {1, 30, 6.0}, {2, 50, 8.0}, {-3, 30, 6.0}}) {
        auto d = sw_decompose(r, X, H);
        // The truncation tail sits far past the cutoff bandwidth, so the two
        // B_w paths should agree to quadrature accuracy at this scale.
        CHECK(d.B_w_fourier ==
              doctest::Approx(d.B_w_direct).epsilon(1e-6).scale(1.0 + std::abs(d.S_w)));
        CHECK(d.n_cutoff >= 40);
    }
}

// Frozen from the first measurement run: |S_w - S_r(X)| / (H X^1.01) peaked
// at 4.67 (growing like sigma(r)/r across the r values below), and
// |A_w - (12/pi^2)(sigma(r)/r) X^2| / ((sigma(r)/r) H X^1.01) at 2.15.
constexpr double kSwWindowK = 8.0;
constexpr double kAwMainK = 4.0;

TEST_CASE("smoothed count and zero frequency track the sharp count and main term") {
    for (auto [r, X, H] : std::vector<std::tuple<i64, i64, double>>{
             {1, 100, 10.0}, {2, 100, 12.0}, {6, 80, 9.0}}) {
        auto d = sw_decompose(r, X, H);
        u64 sharp = shifted_convolution(static_cast<u64>(X), r);
        double scale = H * std::pow(static_cast<double>(X), 1.01);
        double dev_s = std::abs(d.S_w - static_cast<double>(sharp));
        CHECK(dev_s <= kSwWindowK * scale);
        double sig = static_cast<double>(sigma_divisor_sum(static_cast<u64>(std::abs(r)))) /
                     static_cast<double>(std::abs(r));
        double main = (12.0 / (std::numbers::pi * std::numbers::pi)) * sig *
                      static_cast<double>(X) * static_cast<double>(X);
        double dev_a = std::abs(d.A_w - main);
        CHECK(dev_a <= kAwMainK * sig * scale);
        MESSAGE("r=" << r << " X=" << X << ": |S_w - S_r|/scale = " << dev_s / scale
                << ", |A_w - main|/(sig*scale) = " << dev_a / (sig * scale));
    }
}

TEST_CASE("transform preconditions raise typed errors") {
    auto p = make_weight(40.0, 7.0);
    TransformQuery q;
    q.a = 0;
    q.profile = p;
    CHECK_THROWS_AS(fhat(q), Error);
    q.a = 3;
    q.quadrature_tolerance = 1e-3;
    CHECK_THROWS_AS(fhat(q), Error);
    q.quadrature_tolerance = 1e-9;
    q.y = 2e6;
    CHECK_THROWS_AS(fhat(q), Error);
    q.y = 0.0;
    CHECK_THROWS_AS(poisson_progression_check(5, 3, q, 8), Error);
    CHECK_THROWS_AS(sw_decompose(0, 30, 6.0), Error);
    try {
        sw_decompose(1, kSwDirectLimit + 1, 23.0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::limit_exceeded);
    }
    try {
        sw_decompose(1, 100, 3.0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::bad_h_range);
    }
}
