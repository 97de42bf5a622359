#include "detcount/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace detcount {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

u64 reduce_mod(i64 v, u64 c) {
    i64 m = v % static_cast<i64>(c);
    if (m < 0) m += static_cast<i64>(c);
    return static_cast<u64>(m);
}

double weil_cap_of(const ExpSumQuery& q) {
    // gcd(m, n, c) with the usual convention gcd(0, k) = k.
    u64 gm = q.m == 0 ? 0 : static_cast<u64>(std::abs(q.m));
    u64 gn = q.n == 0 ? 0 : static_cast<u64>(std::abs(q.n));
    u64 g = std::gcd(std::gcd(gm, gn), q.c);
    if (g == 0) g = q.c;
    return static_cast<double>(tau_divisor_count(q.c)) *
           std::sqrt(static_cast<double>(g)) * std::sqrt(static_cast<double>(q.c));
}

// Units mod c with their inverses, plus an e(k/c) table.  Shared by the
// direct evaluator and the aggregate audit.
struct UnitTables {
    std::vector<u64> unit, inv;
    std::vector<double> cosv, sinv;
};

UnitTables build_unit_tables(u64 c) {
    UnitTables t;
    t.cosv.resize(c);
    t.sinv.resize(c);
    for (u64 k = 0; k < c; ++k) {
        double phase = kTwoPi * static_cast<double>(k) / static_cast<double>(c);
        t.cosv[k] = std::cos(phase);
        t.sinv[k] = std::sin(phase);
    }
    t.unit.reserve(c / 2);
    t.inv.reserve(c / 2);
    for (u64 x = 0; x < c; ++x) {
        if (std::gcd(x == 0 ? c : x, c) == 1) {
            t.unit.push_back(x);
            t.inv.push_back(c == 1 ? 0 : mod_inverse(x, c));
        }
    }
    return t;
}

struct KahanAcc {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

ExpSumResult direct_eval(const ExpSumQuery& q) {
    ExpSumResult out;
    out.weil_cap = weil_cap_of(q);
    if (q.c == 1) {
        out.value = 1.0;
        return out;
    }
    u64 c = q.c;
    u64 mr = reduce_mod(q.m, c);
    u64 nr = reduce_mod(q.n, c);
    KahanAcc re, im;
    u64 phi = 0;
    // Phases are reduced to (m x + n xbar) mod c before touching doubles.
    for (u64 x = 1; x < c; ++x) {
        if (std::gcd(x, c) != 1) continue;
        ++phi;
        u64 xbar = mod_inverse(x, c);
        u64 k = (mulmod(mr, x, c) + mulmod(nr, xbar, c)) % c;
        double phase = kTwoPi * static_cast<double>(k) / static_cast<double>(c);
        re.add(std::cos(phase));
        im.add(std::sin(phase));
    }
    if (std::abs(im.sum) > 1e-9 * static_cast<double>(phi)) {
        throw Error(errc::audit_failure, "kloosterman_direct: imaginary part above tolerance");
    }
    out.value = re.sum;
    return out;
}

} // namespace

ExpSumResult kloosterman_direct(const ExpSumQuery& q, u64 budget) {
    if (q.c == 0) throw Error(errc::bad_config, "c >= 1 required");
    if (q.c > budget) throw Error(errc::budget_exceeded, "kloosterman_direct: c above budget");
    return direct_eval(q);
}

ExpSumResult kloosterman_crt(const ExpSumQuery& q) {
    if (q.c == 0) throw Error(errc::bad_config, "c >= 1 required");
    ExpSumResult out;
    out.weil_cap = weil_cap_of(q);
    auto factors = factorize(q.c).factors;
    double value = 1.0;
    for (auto [p, e] : factors) {
        u64 u = 1;
        for (int i = 0; i < e; ++i) u *= p;
        u64 v = q.c / u;
        // Twist both arguments by the inverse of the complementary modulus.
        // v is coprime to u = p^e, so the inverse always exists.
        u64 vbar = mod_inverse(v % u, u);
        u64 mu = mulmod(reduce_mod(q.m, u), vbar, u);
        u64 nu = mulmod(reduce_mod(q.n, u), vbar, u);
        ExpSumQuery leaf{static_cast<i64>(mu), static_cast<i64>(nu), u};
        value *= direct_eval(leaf).value;
    }
    out.value = value;
    return out;
}

i64 ramanujan_sum(u64 q, i64 n) {
    if (q == 0) throw Error(errc::bad_config, "q >= 1 required");
    u64 g = (n == 0) ? q : std::gcd(q, static_cast<u64>(std::abs(n)));
    i64 total = 0;
    for (u64 d : divisors_of(g)) {
        total += static_cast<i64>(d) * mobius(q / d);
    }
    return total;
}

WeilAuditReport weil_audit(std::span<const ExpSumQuery> queries, u64 budget) {
    WeilAuditReport report;
    for (const auto& q : queries) {
        ExpSumResult r = kloosterman_direct(q, budget);
        double mag = std::abs(r.value);
        if (r.weil_cap > 0) {
            report.max_ratio = std::max(report.max_ratio, mag / r.weil_cap);
        }
        if (mag > r.weil_cap + 1e-6) report.violations.push_back(q);
    }
    return report;
}

AggregateDeltaReport kloosterman_aggregate(const AggregateDeltaQuery& q,
                                           const std::function<double(double)>& w) {
    if (q.l == 0 || q.r == 0 || q.r % static_cast<i64>(q.l) != 0) {
        throw Error(errc::bad_config, "kloosterman_aggregate: l must divide r");
    }
    if (!(q.U > 0) || !(q.U <= q.X) || !(q.H > 0)) {
        throw Error(errc::bad_config, "kloosterman_aggregate: need 0 < U <= X and H > 0");
    }
    i64 r1 = q.r / static_cast<i64>(q.l);
    u64 n_max = static_cast<u64>(std::ceil(q.X / (static_cast<double>(q.l) * q.H)));
    u64 m_max = static_cast<u64>(std::ceil(q.X / q.H));
    u64 a1_max = static_cast<u64>(q.U / static_cast<double>(q.l));

    double total = 0.0;
    for (u64 a1 = 1; a1 <= a1_max; ++a1) {
        double weight = w(static_cast<double>(q.l * a1));
        if (weight == 0.0) continue;
        UnitTables t = build_unit_tables(a1);
        double a_pow = std::pow(static_cast<double>(a1), q.alpha);
        double block = 0.0;
        for (u64 n = 1; n <= n_max; ++n) {
            u64 u_idx = reduce_mod(static_cast<i64>(n) * r1, a1);
            double n_pow = std::pow(static_cast<double>(n), -q.gamma);
            for (i64 m = -static_cast<i64>(m_max); m <= static_cast<i64>(m_max); ++m) {
                if (m == 0) continue;
                u64 v_idx = reduce_mod(-m, a1);
                double re = 0.0, im = 0.0;
                for (std::size_t i = 0; i < t.unit.size(); ++i) {
                    u64 k = (u_idx * t.unit[i] + v_idx * t.inv[i]) % a1;
                    re += t.cosv[k];
                    im += t.sinv[k];
                }
                double mag = std::hypot(re, im);
                double m_pow = std::pow(static_cast<double>(m < 0 ? -m : m), -q.beta);
                block += n_pow * m_pow * mag;
            }
        }
        // (n,m) -> (-n,-m) leaves |S| unchanged, so the half-range doubles.
        total += 2.0 * weight * block / a_pow;
    }

    AggregateDeltaReport report;
    report.value = total;
    report.cap_shape = std::pow(q.U, 1.5 - q.alpha) * std::pow(q.X / q.H, 2.0 - q.beta - q.gamma);
    return report;
}

} // namespace detcount
