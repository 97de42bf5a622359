#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "detcount/arith.hpp"

using namespace detcount;

namespace {

// Oracle: divisor scan up to n, no factorization involved.
struct DirectDivisorStats {
    u64 sigma = 0, tau = 0, phi = 0;
    int mu = 1;
};

DirectDivisorStats direct_stats(u64 n) {
    DirectDivisorStats s;
    for (u64 d = 1; d <= n; ++d) {
        if (n % d == 0) {
            s.sigma += d;
            ++s.tau;
        }
    }
    for (u64 k = 1; k <= n; ++k) {
        if (std::gcd(k, n) == 1) ++s.phi;
    }
    // Squarefree test by trial division.
    u64 m = n;
    int omega = 0;
    for (u64 p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            ++omega;
            if (m % p == 0) {
                s.mu = 0;
                return s;
            }
        }
    }
    if (m > 1) ++omega;
    s.mu = (omega % 2 == 0) ? 1 : -1;
    return s;
}

} // namespace

TEST_CASE("factorization of pinned inputs") {
    CHECK(factorize(1).factors.empty());
    auto f12 = factorize(12).factors;
    REQUIRE(f12.size() == 2);
    CHECK(f12[0] == std::pair<u64, int>{2, 2});
    CHECK(f12[1] == std::pair<u64, int>{3, 1});
    auto f97 = factorize(97).factors;
    REQUIRE(f97.size() == 1);
    CHECK(f97[0] == std::pair<u64, int>{97, 1});
}

TEST_CASE("factorization recomposes for random n up to 1e12") {
    std::mt19937_64 rng(20240901);
    std::uniform_int_distribution<u64> dist(1, 1'000'000'000'000ull);
    for (int i = 0; i < 10'000; ++i) {
        u64 n = dist(rng);
        u64 prod = 1;
        u64 last_prime = 0;
        for (auto [p, e] : factorize(n).factors) {
            CHECK(p > last_prime);
            last_prime = p;
            CHECK(is_prime(p));
            for (int j = 0; j < e; ++j) prod *= p;
        }
        CHECK(prod == n);
    }
}

TEST_CASE("multiplicative functions agree with direct divisor scans") {
    for (u64 n = 1; n <= 3000; ++n) {
        auto s = direct_stats(n);
        CHECK(sigma_divisor_sum(n) == s.sigma);
        CHECK(tau_divisor_count(n) == s.tau);
        CHECK(euler_phi(n) == s.phi);
        CHECK(mobius(n) == s.mu);
        CHECK(divisors_of(n).size() == s.tau);
    }
    CHECK(sigma_divisor_sum(1) == 1);
    CHECK(sigma_divisor_sum(6) == 12);
    CHECK(sigma_divisor_sum(4) == 7);
    CHECK(mobius(1) == 1);
    CHECK(mobius(4) == 0);
    CHECK(mobius(6) == 1);
}

TEST_CASE("sigma and mobius are multiplicative on coprime pairs") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<u64> dist(1, 1'000'000);
    int done = 0;
    while (done < 2000) {
        u64 m = dist(rng), n = dist(rng);
        if (std::gcd(m, n) != 1) continue;
        CHECK(sigma_divisor_sum(m * n) == sigma_divisor_sum(m) * sigma_divisor_sum(n));
        CHECK(mobius(m * n) == mobius(m) * mobius(n));
        ++done;
    }
}

TEST_CASE("mod_inverse pinned values and failure mode") {
    CHECK(mod_inverse(3, 7) == 5);
    CHECK_THROWS_AS(mod_inverse(2, 4), Error);
    try {
        mod_inverse(2, 4);
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_invertible);
    }
}

TEST_CASE("mod_inverse round trip on random coprime pairs") {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<u64> cdist(2, 1'000'000'007ull);
    int done = 0;
    while (done < 10'000) {
        u64 c = cdist(rng);
        u64 x = cdist(rng) % c;
        if (x == 0 || std::gcd(x, c) != 1) continue;
        u64 inv = mod_inverse(x, c);
        CHECK(inv < c);
        CHECK(mulmod(x, inv, c) == 1);
        ++done;
    }
}

TEST_CASE("divisors_of is sorted and complete") {
    auto d = divisors_of(360);
    CHECK(d.size() == 24);
    CHECK(std::is_sorted(d.begin(), d.end()));
    for (u64 v : d) CHECK(360 % v == 0);
}

TEST_CASE("floor_div rounds toward minus infinity") {
    CHECK(floor_div(7, 2) == 3);
    CHECK(floor_div(-7, 2) == -4);
    CHECK(floor_div(7, -2) == -4);
    CHECK(floor_div(-7, -2) == 3);
    CHECK(floor_div(6, 3) == 2);
    CHECK(floor_div(-6, 3) == -2);
}
