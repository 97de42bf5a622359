#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "detcount/arith.hpp"

namespace detcount {

enum class Orthant { Positive, AllSigns };

enum class CountAlgorithm { Brute, DivisorSieve, Congruence, CoprimeFractions };

struct BoxCount {
    i64 r = 0;
    u64 X = 0;
    u64 value = 0;
    Orthant orthant = Orthant::Positive;
    CountAlgorithm algorithm = CountAlgorithm::DivisorSieve;
};

enum class MainTermVariant { AllSigns16, Positive2, ZeroDet };

struct MainTermValue {
    i64 r = 0;
    u64 X = 0;
    double value = 0.0;
    MainTermVariant variant = MainTermVariant::AllSigns16;
};

// tau[n] = #{(a,b) : 1 <= a,b <= M, ab = n} for 1 <= n <= limit.  tau[0] unused.
struct RestrictedDivisorTable {
    u64 M = 0;
    u64 limit = 0;
    std::vector<std::uint32_t> tau;
};

inline constexpr u64 kDefaultSieveBudgetBytes = 800'000'000;
inline constexpr u64 kDefaultBruteLimit = 2000;
inline constexpr u64 kDefaultCongruenceLimit = 8192;
inline constexpr u64 kDefaultEnumerationLimit = 60;

RestrictedDivisorTable restricted_divisor_sieve(u64 M, u64 limit,
                                                u64 budget_bytes = kDefaultSieveBudgetBytes);

// #{1<=a,b,c,d<=X : ad - bc = r} for r != 0, via the tau* autocorrelation
// sum_n tau*_X(n) tau*_X(n+r).  Capped at a modest X; the same sieve without
// the cap backs count_allsigns and the scans.
BoxCount count_positive_brute(i64 r, u64 X, u64 brute_limit = kDefaultBruteLimit);

// Same count through the congruence reformulation: for each modulus a and
// each b, the admissible c form a progression mod a/gcd(a,b) clipped to
// a - r <= bc <= aX - r.  Shares no code with the sieve path.
BoxCount count_congruence(i64 r, u64 X, u64 limit = kDefaultCongruenceLimit);

// #{|a|,|b|,|c|,|d| <= X : ad - bc = r} for r != 0, assembled from sign
// classes:
//   8 * S_r(X)            tuples with no zero coordinate, ad and bc same sign
//   4 * C_r(X)            no zero coordinate, opposite signs (ad+bc = |r|)
//   4 * (4X+1) * tau*_X(|r|)   one of the products vanishes
// where S_r is the positive-orthant count and C_r(X) =
// sum_{0<m<|r|} tau*_X(m) tau*_X(|r|-m).
BoxCount count_allsigns(i64 r, u64 X, CountAlgorithm algorithm = CountAlgorithm::DivisorSieve);

// #{1<=x1..x4<=X : x1 x2 = x3 x4} via the coprime-fractions identity: group
// (x1,x3) by the reduced fraction a/b of x1/x3, giving
// sum_{(a,b)=1, a,b<=X} floor(X/max(a,b))^2.
BoxCount count_zero_det(u64 X);

// sum_{n>=1} tau*_M(n) tau*_M(n+r); equals the positive-orthant count at X=M.
u64 shifted_convolution(u64 M, i64 r, u64 budget_bytes = kDefaultSieveBudgetBytes);

// Asymptotic leading terms (zeta(2) = pi^2/6):
//   AllSigns16: (16/zeta(2)) (sigma(|r|)/|r|) X^2
//   Positive2:  (2/zeta(2)) (sigma(r)/r) X^2, requires r > 0
//   ZeroDet:    (12/pi^2) X^2 log X, requires r = 0
MainTermValue main_term(i64 r, u64 X, MainTermVariant variant);

// sum over the full box of alpha(|a|) for solutions of ad - bc = r.
// alpha has X+1 entries; alpha[0] weights the a = 0 tuples, alpha[k] the
// tuples with |a| = k.  Constant weight 1 reproduces count_allsigns.
std::complex<double> count_weighted(i64 r, u64 X, std::span<const std::complex<double>> alpha,
                                    u64 budget_bytes = kDefaultSieveBudgetBytes);

// Reference enumerations, kept deliberately naive.  The first two walk all
// (2X+1)^4 sign combinations; the multi variant tallies every target r in a
// single pass so acceptance sweeps stay affordable.
u64 enumerate_allsigns(i64 r, u64 X, u64 limit = kDefaultEnumerationLimit);
std::vector<u64> enumerate_allsigns_multi(std::span<const i64> rs, u64 X,
                                          u64 limit = kDefaultEnumerationLimit);
// Tuples with a zero coordinate or with ad and bc of opposite sign.
u64 enumerate_boundary_and_mixed(i64 r, u64 X, u64 limit = kDefaultEnumerationLimit);
// Zero-determinant count through a product-multiplicity table, X <= 500.
u64 enumerate_zero_det(u64 X, u64 limit = 500);

} // namespace detcount
