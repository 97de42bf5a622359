#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "detcount/errors.hpp"

namespace detcount {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// (prime, exponent) pairs with primes strictly increasing; empty for n = 1.
struct Factorization {
    std::vector<std::pair<u64, int>> factors;
};

// Prime factorization for 1 <= n < 2^63.  Small factors by trial division
// against a cached prime table (primes below 2^20); survivors handled by
// deterministic Miller-Rabin plus Pollard rho, so 40+ bit semiprimes do not
// stall a sweep.
Factorization factorize(u64 n);

// Multiplicative basics, all driven by factorize.
u64 sigma_divisor_sum(u64 n); // sum of divisors
u64 tau_divisor_count(u64 n); // number of divisors
u64 euler_phi(u64 n);
int mobius(u64 n); // -1, 0, +1
std::vector<u64> divisors_of(u64 n); // ascending

// Modular helpers.  Words are reduced through 128-bit intermediates, never by
// repeated subtraction, so u64 moduli are safe.
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);

// Inverse of x mod c (c >= 1).  Throws errc::not_invertible when gcd(x,c) > 1.
u64 mod_inverse(u64 x, u64 c);

// Floor division for signed arguments (round toward -infinity).
inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool is_prime(u64 n);

} // namespace detcount
