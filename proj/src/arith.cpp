#include "detcount/arith.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace detcount {

namespace {

// Primes below 2^20, sieved once on first use.  Covers trial division up to
// n < 2^40 on its own; larger survivors go to Pollard rho.
const std::vector<u64>& small_primes() {
    static const std::vector<u64> primes = [] {
        const u64 limit = 1u << 20;
        std::vector<bool> composite(limit, false);
        std::vector<u64> out;
        for (u64 p = 2; p < limit; ++p) {
            if (composite[p]) continue;
            out.push_back(p);
            for (u64 q = p * p; q < limit; q += p) composite[q] = true;
        }
        return out;
    }();
    return primes;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    a %= n;
    if (a == 0) return false;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

u64 pollard_rho(u64 n) {
    // n is odd, composite, and has no factor below 2^20, so the smallest
    // factor is at most n^(1/2) ~ 2^31.5 and the cycle closes quickly.
    for (u64 c = 1;; ++c) {
        auto step = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        do {
            x = step(x);
            y = step(step(y));
            u64 diff = x > y ? x - y : y - x;
            d = diff == 0 ? n : std::gcd(diff, n);
        } while (d == 1);
        if (d != n) return d;
    }
}

void factor_rec(u64 n, std::vector<u64>& primes_out) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes_out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_rec(d, primes_out);
    factor_rec(n / d, primes_out);
}

} // namespace

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is deterministic for all n < 3.3e24, which covers u64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

Factorization factorize(u64 n) {
    if (n == 0 || n > (u64(1) << 63)) {
        throw Error(errc::limit_exceeded, "factorize: n must satisfy 1 <= n <= 2^63");
    }
    Factorization f;
    if (n == 1) return f;
    for (u64 p : small_primes()) {
        if (p * p > n) break;
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.factors.emplace_back(p, e);
        }
    }
    if (n > 1) {
        if (n < (u64(1) << 40) || is_prime(n)) {
            f.factors.emplace_back(n, 1);
        } else {
            std::vector<u64> rest;
            factor_rec(n, rest);
            std::sort(rest.begin(), rest.end());
            for (std::size_t i = 0; i < rest.size();) {
                std::size_t j = i;
                while (j < rest.size() && rest[j] == rest[i]) ++j;
                f.factors.emplace_back(rest[i], static_cast<int>(j - i));
                i = j;
            }
        }
    }
    return f;
}

u64 sigma_divisor_sum(u64 n) {
    u64 s = 1;
    for (auto [p, e] : factorize(n).factors) {
        // (p^(e+1) - 1) / (p - 1) via 128-bit accumulation.
        u128 term = 1, pk = 1;
        for (int i = 0; i < e; ++i) {
            pk *= p;
            term += pk;
        }
        u128 next = (u128)s * term;
        if (next > ~u64(0)) throw Error(errc::limit_exceeded, "sigma: overflow");
        s = static_cast<u64>(next);
    }
    return s;
}

u64 tau_divisor_count(u64 n) {
    u64 t = 1;
    for (auto [p, e] : factorize(n).factors) t *= static_cast<u64>(e) + 1;
    return t;
}

u64 euler_phi(u64 n) {
    u64 r = n;
    for (auto [p, e] : factorize(n).factors) r = r / p * (p - 1);
    return r;
}

int mobius(u64 n) {
    int sign = 1;
    for (auto [p, e] : factorize(n).factors) {
        if (e > 1) return 0;
        sign = -sign;
    }
    return sign;
}

std::vector<u64> divisors_of(u64 n) {
    std::vector<u64> divs{1};
    for (auto [p, e] : factorize(n).factors) {
        std::size_t base = divs.size();
        u64 pk = 1;
        for (int i = 0; i < e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

u64 mod_inverse(u64 x, u64 c) {
    if (c == 0) throw Error(errc::not_invertible, "mod_inverse: zero modulus");
    if (c == 1) return 0;
    i64 r0 = static_cast<i64>(c), r1 = static_cast<i64>(x % c);
    i64 t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        i64 t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw Error(errc::not_invertible, "mod_inverse: arguments not coprime");
    i64 inv = t0 % static_cast<i64>(c);
    if (inv < 0) inv += static_cast<i64>(c);
    return static_cast<u64>(inv);
}

} // namespace detcount
