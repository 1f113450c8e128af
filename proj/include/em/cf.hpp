#pragma once

// Certified high-precision log(1 + 1/a), interval continued-fraction
// expansion with convergents, and the convergent-denominator condition
// checker over the prime set {p : p-1 | N} u {p : 3 is a primitive root
// mod p}.
//
// Certification rule: the continued fractions of both interval endpoints
// (exact rationals) are expanded and the common prefix minus its final
// quotient is certified -- the last agreeing quotient can be off by one at
// an interval boundary, so dropping it is always sound.  A zero-width
// interval is exact and certifies its full expansion.

#include "em/arith.hpp"
#include "em/fixed_decimal.hpp"

#include <future>
#include <optional>

namespace em::cf {

// log(1 + 1/a) with certified error < 10^-digits.  Two disjoint atanh
// decompositions are evaluated and their intervals intersected, trapping
// implementation errors.
inline BoundedReal log_ratio(uint64_t a, unsigned digits, unsigned threads = 1) {
    if (a < 1) throw std::invalid_argument("log_ratio: a must be >= 1");
    if (digits < 1 || digits > 1'000'000)
        throw std::invalid_argument("log_ratio: digits out of budget");
    unsigned dg = digits + 8;
    // route 1: log((a+1)/a) = 2 atanh(1/(2a+1))
    auto route1 = [&] {
        fx::Fx t = fx::atanh_frac(1, Int(2 * a + 1), dg);
        return fx::Fx{2 * t.v, 2 * t.err};
    };
    // route 2: log((a+1)/a) = 2 atanh(1/(4a+1)) + 2 atanh(1/(4a+3))
    auto route2 = [&] {
        fx::Fx u = fx::atanh_frac(1, Int(4 * a + 1), dg);
        fx::Fx v = fx::atanh_frac(1, Int(4 * a + 3), dg);
        return fx::Fx{2 * (u.v + v.v), 2 * (u.err + v.err)};
    };
    fx::Fx r1, r2;
    if (threads >= 2) {
        auto f2 = std::async(std::launch::async, route2);
        r1 = route1();
        r2 = f2.get();
    } else {
        r1 = route1();
        r2 = route2();
    }
    Int lo = std::max(r1.v - r1.err, r2.v - r2.err);
    Int hi = std::min(r1.v + r1.err, r2.v + r2.err);
    if (lo > hi) throw std::logic_error("log_ratio: disjoint route intervals");
    BoundedReal out = fx::to_bounded_nearest(r1, dg, digits);
    if (out.err >= Rat(1) / Rat(pow10_int(digits)))
        throw std::logic_error("log_ratio: error bound above one ulp");
    return out;
}

struct ContinuedFraction {
    std::vector<Int> quotients;  // certified partial quotients a_0, a_1, ...
    std::vector<Int> p, q;       // convergent numerators / denominators
    size_t certified_count = 0;
    bool exact = false;  // input was an exact rational and terminated
};

namespace detail {

// streaming Euclid expansion state for an exact nonnegative rational
struct EuclidStream {
    Int num, den;
    bool done = false;
    // next quotient; std::nullopt when the expansion has terminated
    std::optional<Int> next() {
        if (done || den == 0) {
            done = true;
            return std::nullopt;
        }
        Int a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        num = den;
        den = r;
        if (den == 0) done = true;
        return a;
    }
};

inline void push_convergent(ContinuedFraction& cf, const Int& a) {
    size_t i = cf.p.size();
    if (i == 0) {
        cf.p.push_back(a);
        cf.q.push_back(1);
    } else if (i == 1) {
        cf.p.push_back(a * cf.p[0] + 1);
        cf.q.push_back(a * cf.q[0]);
    } else {
        cf.p.push_back(a * cf.p[i - 1] + cf.p[i - 2]);
        cf.q.push_back(a * cf.q[i - 1] + cf.q[i - 2]);
    }
    cf.quotients.push_back(a);
}

}  // namespace detail

inline ContinuedFraction cf_expand_rational(const Rat& x) {
    if (sgn(x) < 0) throw std::invalid_argument("cf_expand_rational: value must be >= 0");
    ContinuedFraction cf;
    cf.exact = true;
    detail::EuclidStream s{Int(x.get_num()), Int(x.get_den())};
    while (auto a = s.next()) detail::push_convergent(cf, *a);
    cf.certified_count = cf.quotients.size();
    return cf;
}

// Expands (value / divisor).  The certified prefix is provably the prefix
// of every real inside the input interval.
inline ContinuedFraction cf_expand(const BoundedReal& value, const Int& divisor = 1) {
    if (divisor < 1) throw std::invalid_argument("cf_expand: divisor must be >= 1");
    Rat lo = value.lower() / Rat(divisor);
    Rat hi = value.upper() / Rat(divisor);
    if (sgn(lo) < 0) throw std::invalid_argument("cf_expand: interval must be nonnegative");
    if (lo == hi) return cf_expand_rational(lo);

    ContinuedFraction cf;
    detail::EuclidStream sl{Int(lo.get_num()), Int(lo.get_den())};
    detail::EuclidStream sh{Int(hi.get_num()), Int(hi.get_den())};
    std::vector<Int> common;
    while (true) {
        auto a = sl.next();
        auto b = sh.next();
        if (!a || !b || *a != *b) break;
        common.push_back(*a);
    }
    if (common.empty())
        throw precision_error("cf_expand: no certified quotients at this interval width");
    common.pop_back();  // boundary quotient may be off by one
    for (const Int& a : common) detail::push_convergent(cf, a);
    cf.certified_count = cf.quotients.size();
    if (cf.certified_count == 0)
        throw precision_error("cf_expand: no certified quotients at this interval width");
    // spot-check the determinant identity p_i q_{i-1} - p_{i-1} q_i = (-1)^(i-1)
    size_t i = cf.certified_count - 1;
    if (i >= 1) {
        Int det = cf.p[i] * cf.q[i - 1] - cf.p[i - 1] * cf.q[i];
        if (det != (i % 2 == 1 ? 1 : -1))
            throw std::logic_error("cf_expand: determinant identity violated");
    }
    return cf;
}

// membership in {p : p-1 | N} u {p : 3 is a primitive root mod p}
inline bool cf_prime_set_member(const Int& p, const Int& N) {
    if (p == 3) throw std::invalid_argument("cf_prime_set_member: p = 3 is excluded");
    if (!arith::is_prime(p)) throw std::invalid_argument("cf_prime_set_member: p must be prime");
    if (mpz_divisible_p(N.get_mpz_t(), Int(p - 1).get_mpz_t())) return true;
    if (p == 2) return false;  // 3 = 1 mod 2 is not a primitive root
    return arith::mult_order(3, p) == p - 1;
}

struct Theorem3Options {
    unsigned digits = 20000;        // precision of log 2
    unsigned max_qj_digits = 48;    // largest q_j attempted for factorization
    uint64_t factor_budget = 4'000'000;  // rho iterations per factorization
    unsigned threads = 1;
};

struct Theorem3Candidate {
    size_t j = 0;
    size_t qj_digits = 0;
    bool cond_a = false;
    bool cond_b = false;
    int cond_c = -1;  // -1 not evaluated, 0 failed, 1 held
    std::string note;
};

struct Theorem3Result {
    uint64_t N = 0;
    bool found = false;
    size_t j = 0;
    Int qj;
    Rat bound;  // q_j / 2
    bool budget_exhausted = false;
    std::string exhausted_reason;
    std::vector<Theorem3Candidate> examined;  // candidates passing condition a
    size_t quotients_certified = 0;
    unsigned digits_used = 0;
};

// nu_p(3^(p-1) - 1) by exact modular lifting
inline unsigned nu_p_fermat_quotient_base3(const Int& p) {
    unsigned t = 1;
    while (t < 64) {
        Int mod = pow_int(p, t + 1);
        if (powmod(3, p - 1, mod) != 1) return t;
        ++t;
    }
    throw std::logic_error("nu_p(3^(p-1)-1): lifting ran away");
}

// Smallest even j with a_{j+1} >= 180N - 2, gcd(q_j, 6) = 1, and the
// valuation condition nu_p(q_j) = nu_p(3^(p-1)-1) + nu_p(N) + 1 for every
// prime p in the set dividing q_j.  "Not found within budget" is a
// legitimate, fully reported outcome.
inline Theorem3Result theorem3_scan(uint64_t N, const Theorem3Options& opts = {}) {
    if (N < 1) throw std::invalid_argument("theorem3_scan: N must be >= 1");
    Theorem3Result out;
    out.N = N;
    out.digits_used = opts.digits;
    BoundedReal l2 = log_ratio(1, opts.digits, opts.threads);
    ContinuedFraction cf = cf_expand(l2, Int(2) * Int(N));
    out.quotients_certified = cf.certified_count;
    Int threshold = Int(180) * Int(N) - 2;
    Int bigN = Int(N);

    for (size_t j = 0; j + 1 < cf.certified_count; j += 2) {
        if (cf.quotients[j + 1] < threshold) continue;
        Theorem3Candidate cand;
        cand.j = j;
        cand.cond_a = true;
        const Int& qj = cf.q[j];
        cand.qj_digits = digits10(qj);
        cand.cond_b = gcd(qj, Int(6)) == 1;
        if (!cand.cond_b) {
            out.examined.push_back(cand);
            continue;
        }
        if (cand.qj_digits > opts.max_qj_digits) {
            cand.note = "q_j too large to factor within budget";
            out.examined.push_back(cand);
            out.budget_exhausted = true;
            out.exhausted_reason = "q_j at j = " + std::to_string(j) + " has " +
                                   std::to_string(cand.qj_digits) +
                                   " digits, above the factorization cap";
            return out;
        }
        try {
            bool ok = true;
            // gcd(q_j, 6) = 1 here, so the excluded p = 3 case cannot arise
            for (auto& [p, e] : arith::factorize(qj, opts.factor_budget).factors) {
                if (!cf_prime_set_member(p, bigN)) continue;
                unsigned rhs = nu_p_fermat_quotient_base3(p) + arith::valuation(bigN, p) + 1;
                if (e != rhs) {
                    ok = false;
                    cand.note = "valuation condition failed at p = " + p.get_str();
                    break;
                }
            }
            cand.cond_c = ok ? 1 : 0;
        } catch (const budget_error&) {
            cand.note = "factorization budget exhausted";
            out.examined.push_back(cand);
            out.budget_exhausted = true;
            out.exhausted_reason = "factorization budget exhausted at j = " + std::to_string(j);
            return out;
        }
        out.examined.push_back(cand);
        if (cand.cond_c == 1) {
            out.found = true;
            out.j = j;
            out.qj = qj;
            out.bound = Rat(qj) / 2;
            return out;
        }
    }
    out.budget_exhausted = true;
    out.exhausted_reason = "certified quotient budget exhausted (" +
                           std::to_string(cf.certified_count) + " quotients at " +
                           std::to_string(opts.digits) + " digits)";
    return out;
}

}  // namespace em::cf
