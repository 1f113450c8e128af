#include "em/arith.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace em;
using namespace em::arith;

namespace {

std::vector<std::pair<uint64_t, unsigned>> trial_division_oracle(uint64_t n) {
    std::vector<std::pair<uint64_t, unsigned>> out;
    for (uint64_t p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace

TEST_CASE("factorize on the examples") {
    CHECK(factorize(1).factors.empty());
    auto f = factorize(2730);
    std::vector<std::pair<Int, unsigned>> want{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {13, 1}};
    CHECK(f.factors == want);
    auto g = factorize(4830);
    std::vector<std::pair<Int, unsigned>> want2{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {23, 1}};
    CHECK(g.factors == want2);
    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize matches trial division and round-trips") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 10000; ++i) {
        uint64_t n = rng() | 1;  // keep away from 0
        n >>= (i % 3 == 0 ? 0 : 24);
        if (n == 0) n = 1;
        auto f = factorize64(n);
        Int prod = 1;
        for (auto& [p, e] : f.factors) {
            CHECK(is_prime_u64(p));
            for (unsigned j = 0; j < e; ++j) prod *= p;
        }
        CHECK(prod == n);
        for (size_t j = 1; j < f.factors.size(); ++j)
            CHECK(f.factors[j - 1].first < f.factors[j].first);
    }
    for (uint64_t n : {2ull, 97ull, 1024ull, 999999937ull, 600851475143ull}) {
        auto f = factorize64(n);
        auto want = trial_division_oracle(n);
        REQUIRE(f.factors.size() == want.size());
        for (size_t i = 0; i < want.size(); ++i) {
            CHECK(f.factors[i].first == want[i].first);
            CHECK(f.factors[i].second == want[i].second);
        }
    }
}

TEST_CASE("primality agrees with trial division below 20000") {
    for (uint64_t n = 2; n < 20000; ++n) {
        bool expected = true;
        for (uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                expected = false;
                break;
            }
        CHECK(is_prime_u64(n) == expected);
    }
    CHECK(is_prime(Int("170141183460469231731687303715884105727")));  // 2^127 - 1
    CHECK_FALSE(is_prime(Int("170141183460469231731687303715884105725")));
    // primes beyond the deterministic Miller-Rabin range exercise the Lucas leg
    CHECK(is_prime(Int("10000000000000000000000000000000000000121")));
}

TEST_CASE("mult_order examples") {
    CHECK(mult_order(2, 7) == 3);
    CHECK(mult_order(2, 11) == 10);
    for (int g : {3, 5, 7, 9}) CHECK(mult_order(g, 2) == 1);
    CHECK(mult_order64(2, 7) == 3);
    CHECK(mult_order64(2, 11) == 10);
    CHECK_THROWS_AS(mult_order(2, 8), std::invalid_argument);
    // direct powering oracle on a grid
    for (uint64_t n = 3; n <= 200; ++n)
        for (uint64_t g = 2; g <= 10; ++g) {
            if (em::detail::gcd64(g, n) != 1) continue;
            uint64_t t = mult_order64(g, n);
            CHECK(em::detail::powmod64(g, t, n) == 1);
            for (uint64_t s = 1; s < t; ++s) CHECK(em::detail::powmod64(g, s, n) != 1);
        }
}

TEST_CASE("carmichael examples") {
    CHECK(carmichael_lambda(8) == 2);
    CHECK(carmichael_lambda(15) == 4);
    for (uint64_t p : {3ull, 5ull, 101ull, 65537ull}) CHECK(carmichael_lambda64(p) == p - 1);
    CHECK(carmichael_lambda(1) == 1);
}

TEST_CASE("mult_order divides carmichael_lambda up to 1e5") {
    for (uint64_t n = 2; n <= 100000; n += (n < 1000 ? 1 : 97)) {
        uint64_t lam = carmichael_lambda64(n);
        for (uint64_t g : {2ull, 3ull, 5ull, 7ull}) {
            if (em::detail::gcd64(g % n, n) != 1) continue;
            CHECK(lam % mult_order64(g, n) == 0);
        }
    }
}

TEST_CASE("valuation") {
    CHECK(valuation(48, 2) == 4);
    CHECK(valuation(48, 3) == 1);
    CHECK(valuation(48, 5) == 0);
    CHECK(valuation64(1024, 2) == 10);
}
