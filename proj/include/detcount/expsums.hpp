#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "detcount/arith.hpp"

namespace detcount {

struct ExpSumQuery {
    i64 m = 0;
    i64 n = 0;
    u64 c = 1;
};

struct ExpSumResult {
    double value = 0.0;    // real by the x -> c-x pairing; asserted on evaluation
    double weil_cap = 0.0; // tau(c) * gcd(m,n,c)^{1/2} * c^{1/2}
};

inline constexpr u64 kDefaultKloostermanBudget = 1'000'000;

// S(m,n;c) = sum over units x mod c of e((m x + n xbar)/c), by direct loop.
// The imaginary part must stay below 1e-9 * phi(c); a violation indicates a
// modular-inverse bug and raises AuditFailure.
ExpSumResult kloosterman_direct(const ExpSumQuery& q, u64 budget = kDefaultKloostermanBudget);

// Same value through twisted multiplicativity: for c = uv with coprime u,v,
// S(m,n;uv) = S(m vbar, n vbar; u) * S(m ubar, n ubar; v), recursing down to
// prime powers which are evaluated by direct loop.
ExpSumResult kloosterman_crt(const ExpSumQuery& q);

// Ramanujan sum r_q(n) = sum_{d | gcd(q,n)} d mu(q/d); r_q(0) = phi(q).
i64 ramanujan_sum(u64 q, i64 n);

struct WeilAuditReport {
    double max_ratio = 0.0; // max over queries of |S| / weil_cap
    std::vector<ExpSumQuery> violations;
};

// Checks |S(m,n,c)| <= weil_cap + 1e-6 on every query.  Returns the report;
// callers decide whether violations are fatal.
WeilAuditReport weil_audit(std::span<const ExpSumQuery> queries,
                           u64 budget = kDefaultKloostermanBudget);

// Aggregate of Weil-bounded Kloosterman blocks:
//   Delta = sum_{0<|n|<=N} |n|^-gamma sum_{0<|m|<=M} |m|^-beta
//           sum_{1 <= l a1 <= U} w(l a1) |S(n r1, -m, a1)| / a1^alpha
// with N = ceil(X/(l H)), M = ceil(X/H), r1 = r/l.  cap_shape carries the
// proved decay U^(3/2-alpha) (X/H)^(2-beta-gamma); the frozen multiplier in
// front of it lives with the tests.
struct AggregateDeltaQuery {
    double alpha = 1.5; // <= 3/2
    double beta = 1.0;  // <= 1
    double gamma = 1.0; // <= 1
    u64 l = 1;          // must divide r
    double U = 100.0;   // 0 < U <= X
    i64 r = 1;
    double X = 400.0;
    double H = 20.0;
};

struct AggregateDeltaReport {
    double value = 0.0;
    double cap_shape = 0.0;
};

AggregateDeltaReport kloosterman_aggregate(const AggregateDeltaQuery& q,
                                           const std::function<double(double)>& w);

} // namespace detcount
