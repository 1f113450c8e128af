#include "em/variants.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace em;
using namespace em::variants;

namespace {

// brute-force divisor counting records
std::vector<std::pair<uint64_t, uint64_t>> brute_hcn(uint64_t limit) {
    std::vector<uint32_t> d(limit + 1, 0);
    for (uint64_t i = 1; i <= limit; ++i)
        for (uint64_t j = i; j <= limit; j += i) ++d[j];
    std::vector<std::pair<uint64_t, uint64_t>> out;
    uint64_t rec = 0;
    for (uint64_t n = 1; n <= limit; ++n)
        if (d[n] > rec) {
            rec = d[n];
            out.emplace_back(n, rec);
        }
    return out;
}

}  // namespace

TEST_CASE("first ten highly composite numbers") {
    auto list = hcn_enumerate(130);
    std::vector<uint64_t> values, divisors;
    for (auto& h : list) {
        values.push_back(mpz_get_ui(h.value.get_mpz_t()));
        divisors.push_back(h.divisor_count);
    }
    CHECK(values == std::vector<uint64_t>{1, 2, 4, 6, 12, 24, 36, 48, 60, 120});
    CHECK(divisors == std::vector<uint64_t>{1, 2, 3, 4, 6, 8, 9, 10, 12, 16});
}

TEST_CASE("hcn list matches brute force to 1e6") {
    auto list = hcn_enumerate(1000000);
    auto brute = brute_hcn(1000000);
    REQUIRE(list.size() == brute.size());
    for (size_t i = 0; i < brute.size(); ++i) {
        CHECK(list[i].value == brute[i].first);
        CHECK(list[i].divisor_count == brute[i].second);
    }
    // exponent sequences are nonincreasing and reproduce the value
    for (auto& h : list) {
        Int v = 1;
        const auto primes = std::vector<uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23};
        for (size_t i = 0; i < h.exponents.size(); ++i) {
            if (i) CHECK(h.exponents[i] <= h.exponents[i - 1]);
            v *= pow_int(Int(primes[i]), h.exponents[i]);
        }
        CHECK(v == h.value);
    }
}

TEST_CASE("provo bound tiny cases") {
    auto s3 = provo_k_bound(3);
    CHECK(s3.n_low.value == 2);
    CHECK(s3.k_bound == 4);
    auto s2 = provo_k_bound(2);
    CHECK(s2.n_low.value == 1);
}

TEST_CASE("generalized inequality examples") {
    auto g3 = generalized_inequalities(1, 3);
    CHECK(g3.m_minus_1);  // 1/2 + 1/2 = 1
    auto g11 = generalized_inequalities(1, 11);
    CHECK_FALSE(g11.m_minus_1);  // 1/2 + 1/5 + 1/10 = 0.8
    CHECK(g11.v1 == Rat(4, 5));
}

TEST_CASE("only m = 2 passes all four inequalities at a = 1 below 1e4") {
    // m = 2 is degenerate (m-1 = 1 makes the first left side exactly 1);
    // for every larger m the odd-part inequalities miss 1
    std::vector<uint64_t> holders;
    for (uint64_t m = 2; m <= 10000; ++m)
        if (generalized_inequalities(1, m).all_hold) holders.push_back(m);
    CHECK(holders == std::vector<uint64_t>{2});
}

TEST_CASE("kellner exclusion criterion") {
    auto a6 = kellner_excluded_all_even(6);
    CHECK(a6.excluded);
    CHECK(*a6.witness_q == 2);
    auto a12 = kellner_excluded_all_even(12);  // 12 = 3 (mod 9)
    CHECK(a12.excluded);
    CHECK(*a12.witness_q == 3);
    auto a25 = kellner_excluded(25, 8);
    CHECK_FALSE(a25.excluded);  // 5^2 | 25, no q || a
    auto a4 = kellner_excluded_all_even(4);
    CHECK_FALSE(a4.excluded);

    // agreement between the all-even form and the per-k form
    for (uint64_t a = 1; a <= 500; ++a) {
        bool all_even = kellner_excluded_all_even(a).excluded;
        bool every_k = true;
        for (uint64_t k = 2; k <= 200; k += 2)
            if (!kellner_excluded(a, k).excluded) {
                every_k = false;
                break;
            }
        CHECK(all_even == every_k);
    }
}

TEST_CASE("kellner search finds exactly the two known solutions") {
    auto sols = kellner_search(200, 30);
    REQUIRE(sols.size() == 2);
    CHECK(sols[0].a == 1);
    CHECK(sols[0].k == 1);
    CHECK(sols[0].m == 3);
    CHECK(sols[1].a == 3);
    CHECK(sols[1].k == 3);
    CHECK(sols[1].m == 3);
    // S_3(3) = 9, a = 27/9
    CHECK(powersum::powersum_exact(3, 3) == 9);
    // m = 4, k = 2: S_2(4) = 14 does not divide 16
    CHECK(powersum::powersum_exact(2, 4) == 14);
}

TEST_CASE("kellner search output is stable under doubled bounds") {
    auto small = kellner_search(200, 30);
    auto big = kellner_search(400, 60);
    CHECK(small.size() == big.size());
    for (size_t i = 0; i < small.size(); ++i) {
        CHECK(small[i].a == big[i].a);
        CHECK(small[i].k == big[i].k);
        CHECK(small[i].m == big[i].m);
    }
}

TEST_CASE("ben_gerson examples") {
    auto s10 = ben_gerson_solve(10);
    REQUIRE(s10.size() == 2);
    CHECK(s10[0] == std::pair<unsigned, unsigned>{1, 1});
    CHECK(s10[1] == std::pair<unsigned, unsigned>{3, 2});
    auto s1000 = ben_gerson_solve(1000);
    CHECK(s1000 == s10);
    // k = 2: 5 is not a power of 3
    for (auto& [k, n] : s1000) CHECK(k != 2);
}
