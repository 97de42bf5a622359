#include "detcount/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace detcount {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

// tau*_X(n) by divisor enumeration, for isolated n (no table needed).
u64 tau_star_single(u64 n, u64 X) {
    if (n == 0 || n > X * X) return 0;
    u64 count = 0;
    for (u64 d : divisors_of(n)) {
        if (d <= X && n / d <= X) ++count;
    }
    return count;
}

// Autocorrelation sum_n tau[n] * tau[n + |r|] over a shared table.
u64 sieve_autocorrelation(const RestrictedDivisorTable& t, u64 shift) {
    u128 acc = 0;
    if (shift >= t.limit) return 0;
    for (u64 n = 1; n + shift <= t.limit; ++n) {
        acc += (u128)t.tau[n] * t.tau[n + shift];
    }
    if (acc > ~u64(0)) throw Error(errc::limit_exceeded, "autocorrelation overflow");
    return static_cast<u64>(acc);
}

u64 positive_count_sieve(i64 r, u64 X, u64 budget_bytes) {
    u64 R = static_cast<u64>(r < 0 ? -r : r);
    if (R >= X * X) return 0;
    auto table = restricted_divisor_sieve(X, X * X, budget_bytes);
    return sieve_autocorrelation(table, R);
}

u64 positive_count_congruence(i64 r, u64 X);

// phi(1..n) by a divisor-style sieve; used by the coprime-fractions count.
std::vector<u64> phi_table(u64 n) {
    std::vector<u64> phi(n + 1);
    for (u64 i = 0; i <= n; ++i) phi[i] = i;
    for (u64 p = 2; p <= n; ++p) {
        if (phi[p] == p) { // p prime
            for (u64 q = p; q <= n; q += p) phi[q] -= phi[q] / p;
        }
    }
    return phi;
}

void require_nonzero_r(i64 r) {
    if (r == 0) {
        throw Error(errc::bad_config, "r = 0 is handled by count_zero_det");
    }
}

} // namespace

RestrictedDivisorTable restricted_divisor_sieve(u64 M, u64 limit, u64 budget_bytes) {
    if (M == 0) throw Error(errc::bad_config, "restricted_divisor_sieve: M >= 1 required");
    if ((limit + 1) > budget_bytes / sizeof(std::uint32_t)) {
        throw Error(errc::memory_budget_exceeded, "restricted_divisor_sieve: table exceeds budget");
    }
    RestrictedDivisorTable t;
    t.M = M;
    t.limit = limit;
    t.tau.assign(limit + 1, 0);
    for (u64 a = 1; a <= M; ++a) {
        u64 top = std::min(M, limit / a);
        for (u64 b = 1; b <= top; ++b) ++t.tau[a * b];
    }
    return t;
}

BoxCount count_positive_brute(i64 r, u64 X, u64 brute_limit) {
    require_nonzero_r(r);
    if (X == 0) throw Error(errc::bad_config, "X >= 1 required");
    if (X > brute_limit) {
        throw Error(errc::limit_exceeded, "count_positive_brute: X above brute limit");
    }
    BoxCount out;
    out.r = r;
    out.X = X;
    out.orthant = Orthant::Positive;
    out.algorithm = CountAlgorithm::Brute;
    out.value = positive_count_sieve(r, X, kDefaultSieveBudgetBytes);
    return out;
}

namespace {

u64 positive_count_congruence(i64 r, u64 X) {
    // d = (bc + r)/a must land in [1, X]: a - r <= bc <= aX - r.  For fixed
    // (a, b) the congruence bc = -r (mod a) is solvable iff gcd(b,a) | r and
    // pins c to one progression mod a/gcd(b,a).
    u64 total = 0;
    for (u64 a = 1; a <= X; ++a) {
        i64 lo_bc = static_cast<i64>(a) - r;
        i64 hi_bc = static_cast<i64>(a) * static_cast<i64>(X) - r;
        for (u64 b = 1; b <= X; ++b) {
            u64 g = std::gcd(b, a);
            if (static_cast<u64>(std::abs(r)) % g != 0) continue;
            u64 a1 = a / g;
            i64 c_lo = floor_div(lo_bc - 1, static_cast<i64>(b)) + 1;
            i64 c_hi = floor_div(hi_bc, static_cast<i64>(b));
            c_lo = std::max<i64>(c_lo, 1);
            c_hi = std::min<i64>(c_hi, static_cast<i64>(X));
            if (c_hi < c_lo) continue;
            if (a1 == 1) {
                total += static_cast<u64>(c_hi - c_lo + 1);
                continue;
            }
            i64 rg = r / static_cast<i64>(g);
            u64 b1 = (b / g) % a1;
            u64 inv = mod_inverse(b1, a1);
            i64 neg_r = ((-rg) % static_cast<i64>(a1) + static_cast<i64>(a1)) % static_cast<i64>(a1);
            u64 c0 = mulmod(static_cast<u64>(neg_r), inv, a1);
            i64 n_hi = floor_div(c_hi - static_cast<i64>(c0), static_cast<i64>(a1));
            i64 n_lo = floor_div(c_lo - 1 - static_cast<i64>(c0), static_cast<i64>(a1));
            total += static_cast<u64>(n_hi - n_lo);
        }
    }
    return total;
}

} // namespace

BoxCount count_congruence(i64 r, u64 X, u64 limit) {
    require_nonzero_r(r);
    if (X == 0) throw Error(errc::bad_config, "X >= 1 required");
    if (X > limit) throw Error(errc::limit_exceeded, "count_congruence: X above limit");
    BoxCount out;
    out.r = r;
    out.X = X;
    out.orthant = Orthant::Positive;
    out.algorithm = CountAlgorithm::Congruence;
    out.value = positive_count_congruence(r, X);
    return out;
}

BoxCount count_allsigns(i64 r, u64 X, CountAlgorithm algorithm) {
    require_nonzero_r(r);
    if (X == 0) throw Error(errc::bad_config, "X >= 1 required");
    u64 R = static_cast<u64>(r < 0 ? -r : r);

    u64 s_r = 0;
    switch (algorithm) {
        case CountAlgorithm::DivisorSieve:
            s_r = positive_count_sieve(r, X, kDefaultSieveBudgetBytes);
            break;
        case CountAlgorithm::Congruence:
            s_r = positive_count_congruence(r, X);
            break;
        case CountAlgorithm::Brute:
            s_r = count_positive_brute(r, X).value;
            break;
        case CountAlgorithm::CoprimeFractions:
            throw Error(errc::bad_config, "CoprimeFractions applies only to r = 0");
    }

    // Opposite-sign classes solve ad + bc = |r| in positive integers.
    u128 c_r = 0;
    for (u64 m = 1; m < R; ++m) {
        u64 t1 = tau_star_single(m, X);
        if (t1 == 0) continue;
        c_r += (u128)t1 * tau_star_single(R - m, X);
    }

    u64 boundary = tau_star_single(R, X);
    u128 value = (u128)8 * s_r + 4 * c_r + (u128)4 * (4 * X + 1) * boundary;
    if (value > ~u64(0)) throw Error(errc::limit_exceeded, "count_allsigns overflow");

    BoxCount out;
    out.r = r;
    out.X = X;
    out.value = static_cast<u64>(value);
    out.orthant = Orthant::AllSigns;
    out.algorithm = algorithm;
    return out;
}

BoxCount count_zero_det(u64 X) {
    if (X == 0) throw Error(errc::bad_config, "X >= 1 required");
    // Pairs (a,b) coprime with max(a,b) = m number 2 phi(m) - [m = 1].
    auto phi = phi_table(X);
    u128 acc = 0;
    for (u64 m = 1; m <= X; ++m) {
        u64 q = X / m;
        u64 pairs = 2 * phi[m] - (m == 1 ? 1 : 0);
        acc += (u128)pairs * q * q;
    }
    if (acc > ~u64(0)) throw Error(errc::limit_exceeded, "count_zero_det overflow");
    BoxCount out;
    out.r = 0;
    out.X = X;
    out.value = static_cast<u64>(acc);
    out.orthant = Orthant::Positive;
    out.algorithm = CountAlgorithm::CoprimeFractions;
    return out;
}

u64 shifted_convolution(u64 M, i64 r, u64 budget_bytes) {
    require_nonzero_r(r);
    if (M == 0) throw Error(errc::bad_config, "M >= 1 required");
    u64 R = static_cast<u64>(r < 0 ? -r : r);
    if (R >= M * M) return 0;
    auto table = restricted_divisor_sieve(M, M * M, budget_bytes);
    return sieve_autocorrelation(table, R);
}

MainTermValue main_term(i64 r, u64 X, MainTermVariant variant) {
    MainTermValue out;
    out.r = r;
    out.X = X;
    out.variant = variant;
    double x2 = static_cast<double>(X) * static_cast<double>(X);
    switch (variant) {
        case MainTermVariant::AllSigns16: {
            if (r == 0) throw Error(errc::invalid_variant, "AllSigns16 requires r != 0");
            u64 R = static_cast<u64>(r < 0 ? -r : r);
            double ratio = static_cast<double>(sigma_divisor_sum(R)) / static_cast<double>(R);
            // 8 * the positive-orthant coefficient, and exactly 8 * Positive2
            // in floating point (scaling by 8 is exact).
            out.value = 8.0 * ((12.0 / (kPi * kPi)) * ratio * x2);
            break;
        }
        case MainTermVariant::Positive2: {
            if (r <= 0) throw Error(errc::invalid_variant, "Positive2 requires r > 0");
            double ratio =
                static_cast<double>(sigma_divisor_sum(static_cast<u64>(r))) / static_cast<double>(r);
            out.value = (12.0 / (kPi * kPi)) * ratio * x2;
            break;
        }
        case MainTermVariant::ZeroDet: {
            if (r != 0) throw Error(errc::invalid_variant, "ZeroDet requires r = 0");
            out.value = (12.0 / (kPi * kPi)) * x2 * std::log(static_cast<double>(X));
            break;
        }
    }
    return out;
}

std::complex<double> count_weighted(i64 r, u64 X, std::span<const std::complex<double>> alpha,
                                    u64 budget_bytes) {
    require_nonzero_r(r);
    if (X == 0) throw Error(errc::bad_config, "X >= 1 required");
    if (alpha.size() != X + 1) {
        throw Error(errc::bad_config, "count_weighted: alpha needs X+1 entries (index 0..X)");
    }
    u64 R = static_cast<u64>(r < 0 ? -r : r);
    u64 limit = X * X;
    u64 bytes_per_entry = sizeof(std::uint32_t) + sizeof(std::complex<double>);
    if ((limit + 1) > budget_bytes / bytes_per_entry) {
        throw Error(errc::memory_budget_exceeded, "count_weighted: tables exceed budget");
    }

    auto plain = restricted_divisor_sieve(X, limit, budget_bytes);
    // Weighted analogue: wtab[n] = sum over ab = n (a,b <= X) of alpha(a).
    std::vector<std::complex<double>> wtab(limit + 1, 0.0);
    for (u64 a = 1; a <= X; ++a) {
        std::complex<double> wa = alpha[a];
        if (wa == 0.0) continue;
        for (u64 b = 1; b <= X; ++b) wtab[a * b] += wa;
    }

    std::complex<double> same_sign = 0.0;
    if (R < limit) {
        for (u64 n = 1; n + R <= limit; ++n) {
            // (p, q) = (n + R, n) and the mirrored class (n, n + R).
            same_sign += wtab[n + R] * static_cast<double>(plain.tau[n]);
            same_sign += wtab[n] * static_cast<double>(plain.tau[n + R]);
        }
    }
    std::complex<double> opposite = 0.0;
    for (u64 m = 1; m < R && m <= limit; ++m) {
        if (R - m > limit) continue;
        opposite += wtab[m] * static_cast<double>(plain.tau[R - m]);
    }

    std::complex<double> alpha_sum = 0.0;
    for (u64 a = 1; a <= X; ++a) alpha_sum += alpha[a];
    double tau_r = static_cast<double>(tau_star_single(R, X));
    std::complex<double> wtau_r = (R <= limit && R >= 1) ? wtab[R] : 0.0;

    std::complex<double> value = 4.0 * (same_sign + opposite);
    value += alpha[0] * (2.0 * static_cast<double>(X) + 1.0) * 2.0 * tau_r;
    value += 4.0 * alpha_sum * tau_r;
    value += (4.0 * static_cast<double>(X) + 1.0) * 2.0 * wtau_r;
    return value;
}

u64 enumerate_allsigns(i64 r, u64 X, u64 limit) {
    std::vector<i64> rs{r};
    return enumerate_allsigns_multi(rs, X, limit)[0];
}

std::vector<u64> enumerate_allsigns_multi(std::span<const i64> rs, u64 X, u64 limit) {
    if (X > limit) throw Error(errc::limit_exceeded, "enumerate_allsigns: X above limit");
    i64 B = static_cast<i64>(X);
    i64 max_r = 0;
    for (i64 r : rs) max_r = std::max(max_r, std::abs(r));
    std::vector<u64> tally(static_cast<std::size_t>(2 * max_r + 1), 0);
    for (i64 a = -B; a <= B; ++a) {
        for (i64 d = -B; d <= B; ++d) {
            i64 ad = a * d;
            for (i64 b = -B; b <= B; ++b) {
                for (i64 c = -B; c <= B; ++c) {
                    i64 diff = ad - b * c;
                    if (diff >= -max_r && diff <= max_r) ++tally[static_cast<std::size_t>(diff + max_r)];
                }
            }
        }
    }
    std::vector<u64> out;
    out.reserve(rs.size());
    for (i64 r : rs) out.push_back(tally[static_cast<std::size_t>(r + max_r)]);
    return out;
}

u64 enumerate_boundary_and_mixed(i64 r, u64 X, u64 limit) {
    if (X > limit) throw Error(errc::limit_exceeded, "enumerate_boundary_and_mixed: X above limit");
    i64 B = static_cast<i64>(X);
    u64 count = 0;
    for (i64 a = -B; a <= B; ++a) {
        for (i64 d = -B; d <= B; ++d) {
            i64 ad = a * d;
            for (i64 b = -B; b <= B; ++b) {
                for (i64 c = -B; c <= B; ++c) {
                    if (ad - b * c != r) continue;
                    bool zero = (a == 0) || (b == 0) || (c == 0) || (d == 0);
                    bool mixed = !zero && ((ad > 0) != (b * c > 0));
                    if (zero || mixed) ++count;
                }
            }
        }
    }
    return count;
}

u64 enumerate_zero_det(u64 X, u64 limit) {
    if (X > limit) throw Error(errc::limit_exceeded, "enumerate_zero_det: X above limit");
    std::vector<u64> mult(X * X + 1, 0);
    for (u64 a = 1; a <= X; ++a) {
        for (u64 b = 1; b <= X; ++b) ++mult[a * b];
    }
    u128 acc = 0;
    for (u64 p = 1; p <= X * X; ++p) acc += (u128)mult[p] * mult[p];
    return static_cast<u64>(acc);
}

} // namespace detcount
