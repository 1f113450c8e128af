#include "em/cf.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <mpfr.h>

#include <fstream>
#include <sstream>

using namespace em;
using namespace em::cf;

TEST_CASE("log_ratio examples") {
    auto l2 = log_ratio(1, 20);
    CHECK(l2.to_string() == "0.69314718055994530942");
    CHECK(l2.err < Rat(1) / Rat(pow10_int(20)));
    // log 2 = 0.69314718055994530941723...
    CHECK(l2.contains(Rat(Int("69314718055994530941723")) / Rat(pow10_int(23))));

    auto l43 = log_ratio(3, 10);
    CHECK(l43.to_string().substr(0, 11) == "0.287682072");
    CHECK(l43.contains(Rat(Int("28768207245178")) / Rat(pow10_int(14))));

    // additivity: log 2 - log(4/3) contains log(3/2)
    auto d = log_ratio(1, 30);
    auto t = log_ratio(3, 30);
    auto h = log_ratio(2, 30);  // log(3/2)
    Rat lo = d.lower() - t.upper();
    Rat hi = d.upper() - t.lower();
    CHECK(lo <= h.upper());
    CHECK(h.lower() <= hi);
}

TEST_CASE("log_ratio against mpfr") {
    mpfr_t ref, one;
    mpfr_inits2(512, ref, one, (mpfr_ptr) nullptr);
    for (uint64_t a : {1ull, 2ull, 3ull, 10ull, 99ull}) {
        auto b = log_ratio(a, 50);
        mpfr_set_ui(ref, 1, MPFR_RNDN);
        mpfr_div_ui(ref, ref, a, MPFR_RNDN);
        mpfr_log1p(ref, ref, MPFR_RNDN);
        mpfr_t mid, diff;
        mpfr_inits2(512, mid, diff, (mpfr_ptr) nullptr);
        mpfr_set_z(mid, b.mid.get_mpz_t(), MPFR_RNDN);
        Int sc = pow10_int(b.digits);
        mpfr_div_z(mid, mid, sc.get_mpz_t(), MPFR_RNDN);
        mpfr_sub(diff, mid, ref, MPFR_RNDN);
        mpfr_abs(diff, diff, MPFR_RNDN);
        mpfr_t eb;
        mpfr_init2(eb, 512);
        mpfr_set_q(eb, b.err.get_mpq_t(), MPFR_RNDU);
        CHECK(mpfr_cmp(diff, eb) <= 0);
        mpfr_clears(mid, diff, eb, (mpfr_ptr) nullptr);
    }
    mpfr_clears(ref, one, (mpfr_ptr) nullptr);
}

TEST_CASE("cf of exact rationals") {
    auto cf = cf_expand_rational(Rat(7, 10));
    std::vector<Int> want{0, 1, 2, 3};
    CHECK(cf.quotients == want);
    CHECK(cf.exact);
    CHECK(cf.certified_count == 4);
    // convergents: p/q sequence ends at 7/10
    CHECK(cf.p.back() == 7);
    CHECK(cf.q.back() == 10);
}

TEST_CASE("cf of log 2 begins [0; 1, 2, 3, 1, 6, 3, 1, 1, 2]") {
    auto v = log_ratio(1, 60);
    auto cf = cf_expand(v, 1);
    REQUIRE(cf.certified_count >= 10);
    std::vector<Int> head(cf.quotients.begin(), cf.quotients.begin() + 10);
    CHECK(head == std::vector<Int>{0, 1, 2, 3, 1, 6, 3, 1, 1, 2});
    // third convergent of log 2 is 7/10
    CHECK(cf.p[3] == 7);
    CHECK(cf.q[3] == 10);
}

TEST_CASE("certified prefix is stable under precision doubling") {
    auto a = cf_expand(log_ratio(1, 500), 1);
    auto b = cf_expand(log_ratio(1, 1000), 1);
    REQUIRE(b.certified_count >= a.certified_count);
    for (size_t i = 0; i < a.certified_count; ++i) CHECK(a.quotients[i] == b.quotients[i]);
}

TEST_CASE("convergent identities hold at every certified index") {
    auto cf = cf_expand(log_ratio(1, 1000), 1);
    REQUIRE(cf.certified_count > 100);
    for (size_t i = 2; i < cf.certified_count; ++i) {
        CHECK(cf.p[i] == cf.quotients[i] * cf.p[i - 1] + cf.p[i - 2]);
        CHECK(cf.q[i] == cf.quotients[i] * cf.q[i - 1] + cf.q[i - 2]);
    }
    for (size_t i = 1; i < cf.certified_count; ++i) {
        Int det = cf.p[i] * cf.q[i - 1] - cf.p[i - 1] * cf.q[i];
        CHECK(det == (i % 2 == 1 ? 1 : -1));
        CHECK(gcd(cf.p[i], cf.q[i]) == 1);
    }
}

TEST_CASE("even convergents lie below the value, odd above") {
    auto v = log_ratio(1, 200);
    auto cf = cf_expand(v, 1);
    for (size_t i = 0; i + 1 < cf.certified_count && i < 60; ++i) {
        Rat conv = Rat(cf.p[i]) / Rat(cf.q[i]);
        if (i % 2 == 0)
            CHECK(conv < v.lower());
        else
            CHECK(conv > v.upper());
    }
}

TEST_CASE("cf_prime_set membership") {
    CHECK(cf_prime_set_member(2, 24));
    CHECK(cf_prime_set_member(5, 24));   // 3 is a primitive root mod 5
    CHECK_FALSE(cf_prime_set_member(11, 24));
    CHECK(cf_prime_set_member(13, 24));  // 12 | 24
    CHECK_THROWS_AS(cf_prime_set_member(3, 24), std::invalid_argument);
    CHECK_THROWS_AS(cf_prime_set_member(9, 24), std::invalid_argument);
}

TEST_CASE("nu_p(3^(p-1)-1) lifting") {
    // 3^4 - 1 = 80 = 5 * 16: nu_5 = 1
    CHECK(nu_p_fermat_quotient_base3(5) == 1);
    // 11 and 1006003 are the only base-3 Wieferich-style primes below 1e7;
    // nu_11(3^10 - 1): 59048 = 2^3 * 11^2 * 61
    CHECK(nu_p_fermat_quotient_base3(11) == 2);
    CHECK(nu_p_fermat_quotient_base3(7) == 1);
}

TEST_CASE("theorem3_scan is deterministic and structurally sound") {
    Theorem3Options opt;
    opt.digits = 2000;
    opt.max_qj_digits = 40;
    auto a = theorem3_scan(1, opt);
    auto b = theorem3_scan(1, opt);
    CHECK(a.found == b.found);
    CHECK(a.budget_exhausted == b.budget_exhausted);
    CHECK(a.examined.size() == b.examined.size());
    CHECK(a.quotients_certified == b.quotients_certified);
    if (a.found) {
        CHECK(a.j == b.j);
        CHECK(a.qj == b.qj);
        CHECK(a.j % 2 == 0);
        CHECK(gcd(a.qj, Int(6)) == 1);
        CHECK(a.bound == Rat(a.qj) / 2);
    } else {
        CHECK_FALSE(a.exhausted_reason.empty());
    }
    // every logged candidate passed condition a with an even index
    for (auto& c : a.examined) {
        CHECK(c.cond_a);
        CHECK(c.j % 2 == 0);
    }
}

TEST_CASE("theorem3 rejects q_j divisible by 2 or 3") {
    Theorem3Options opt;
    opt.digits = 1500;
    auto res = theorem3_scan(24, opt);
    for (auto& c : res.examined)
        if (!c.cond_b) CHECK(c.cond_c == -1);  // never evaluated past b
}

TEST_CASE("cf golden file reproduces") {
    std::ifstream in(std::string(EM_GOLDEN_DIR) + "/cf_log2_d1000.txt");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);  // header: constant divisor digits certified_count
    std::istringstream hs(line);
    std::string constant;
    uint64_t divisor, digits;
    size_t certified;
    hs >> constant >> divisor >> digits >> certified;
    REQUIRE(constant == "log2");
    auto cf = cf_expand(log_ratio(1, unsigned(digits)), Int(divisor));
    CHECK(cf.certified_count == certified);
    size_t i = 0;
    while (std::getline(in, line) && i < cf.certified_count) {
        CHECK(cf.quotients[i].get_str() == line);
        ++i;
    }
    CHECK(i == certified);
}
