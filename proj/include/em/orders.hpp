#pragma once

// Divisor structure of the sequence 2^(2e+1) + 1, the order-based prime set
// P(N) = {p > 3 : gcd(ord_2(p), N) = 2}, its density delta(N), N-good
// integers, the m+2 witness analysis, and the tiered lower bounds keyed on
// 3 | m+2 and 5 | m+2.

#include "em/arith.hpp"
#include "em/bernoulli.hpp"
#include "em/helpful.hpp"
#include "em/moser.hpp"
#include "em/primes.hpp"

#include <cmath>
#include <optional>

namespace em::orders {

struct OrderClassification {
    uint64_t p = 0;
    uint64_t ord2 = 0;      // ord_2(p)
    bool divides_s2 = false;  // iff ord_2(p) = 2 (mod 4)
    unsigned residue_mod_8 = 0;
};

inline OrderClassification classify(uint64_t p) {
    if (p < 3 || !arith::is_prime_u64(p))
        throw std::invalid_argument("classify: p must be an odd prime");
    OrderClassification c;
    c.p = p;
    c.ord2 = arith::mult_order64(2, p);
    c.divides_s2 = c.ord2 % 4 == 2;
    c.residue_mod_8 = unsigned(p % 8);
    return c;
}

inline bool order_prime_set_member(uint64_t p, const Int& N) {
    if (!mpz_divisible_ui_p(N.get_mpz_t(), 24))
        throw std::invalid_argument("order_prime_set_member: N must be divisible by 24");
    if (p <= 3) throw std::invalid_argument("order_prime_set_member: p must be > 3");
    uint64_t ord = arith::mult_order64(2, p);
    return gcd(Int(ord), N) == 2;
}

// p | 2^(2e+1) + 1  iff  2e = ord_2(p)/2 - 1 (mod ord_2(p)); both the
// congruence and direct modular powering are evaluated and must agree.
inline bool bloepie_index(uint64_t p, uint64_t e) {
    OrderClassification c = classify(p);
    if (!c.divides_s2)
        throw std::invalid_argument("bloepie_index: requires ord_2(p) = 2 (mod 4)");
    bool by_congruence = (2 * e) % c.ord2 == c.ord2 / 2 - 1;
    bool by_powering = em::detail::powmod64(2, 2 * e + 1, p) == p - 1;
    if (by_congruence != by_powering)
        throw std::logic_error("bloepie_index: congruence and direct powering disagree");
    return by_congruence;
}

// N_2 = 2^8 3^5 5^4 7^3 11^2 13^2 17^2 19^2 * (product of primes 23..997)
inline const Int& n2_modulus() {
    static const Int n2 = [] {
        Int v = pow_int(2, 8) * pow_int(3, 5) * pow_int(5, 4) * pow_int(7, 3);
        v *= pow_int(11, 2) * pow_int(13, 2) * pow_int(17, 2) * pow_int(19, 2);
        for (uint64_t p = 23; p <= 997; ++p)
            if (arith::is_prime_u64(p)) v *= p;
        return v;
    }();
    return n2;
}

// exact delta(N) = 7/24 * prod_{p | N_0} (1 - p/(p^2-1)), N_0 the odd radical
inline Rat delta_exact(const Int& N) {
    if (!mpz_divisible_ui_p(N.get_mpz_t(), 24))
        throw std::invalid_argument("delta_exact: N must be divisible by 24");
    Rat d(7, 24);
    for (auto& [p, e] : arith::factorize(N).factors) {
        if (p == 2) continue;
        d *= Rat(1) - Rat(p) / Rat(p * p - 1);
    }
    return d;
}

// the same density through inclusion-exclusion over squarefree divisors of
// the odd radical (test oracle; exponential in the number of odd primes)
inline Rat delta_inclusion_exclusion(const Int& N) {
    std::vector<Int> odd;
    for (auto& [p, e] : arith::factorize(N).factors)
        if (p != 2) odd.push_back(p);
    if (odd.size() > 20) throw budget_error("delta_inclusion_exclusion: too many odd primes");
    Rat total = 0;
    for (size_t mask = 0; mask < (size_t(1) << odd.size()); ++mask) {
        Rat term(7, 24);
        int mu = 1;
        for (size_t i = 0; i < odd.size(); ++i)
            if (mask >> i & 1) {
                term *= Rat(odd[i]) / Rat(odd[i] * odd[i] - 1);
                mu = -mu;
            }
        total += Rat(mu) * term;
    }
    return total;
}

struct Ord2Stats {
    uint64_t odd_primes = 0;   // primes 2 < p <= limit
    uint64_t s2_divisors = 0;  // ord_2(p) = 2 (mod 4)
    uint64_t mod8_1 = 0;
    uint64_t mod8_1_s2 = 0;
};

// Bulk classification of ord_2(p) over all odd primes <= limit.  Segmented
// and deterministic; counts combine in ascending segment order.
inline Ord2Stats ord2_scan(uint64_t limit, const primes::PrimeTable& table,
                           unsigned threads = 1) {
    if (limit > table.limit()) throw std::invalid_argument("ord2_scan: limit above table");
    const auto& ps = table.primes();
    size_t n = table.count_leq(limit);
    size_t nseg = limit / primes::segment_span + 1;
    std::vector<Ord2Stats> parts(nseg);
    em::detail::parallel_chunks(nseg, threads, [&](size_t s) {
        uint64_t lo = s * primes::segment_span;
        uint64_t hi = lo + primes::segment_span;
        size_t i = size_t(std::lower_bound(ps.begin(), ps.begin() + n, lo) - ps.begin());
        Ord2Stats& st = parts[s];
        for (; i < n && ps[i] < hi; ++i) {
            uint64_t p = ps[i];
            if (p == 2) continue;
            ++st.odd_primes;
            uint64_t ord = arith::mult_order64(2, p);
            bool s2 = ord % 4 == 2;
            if (s2) ++st.s2_divisors;
            if (p % 8 == 1) {
                ++st.mod8_1;
                if (s2) ++st.mod8_1_s2;
            }
        }
    });
    Ord2Stats out;
    for (auto& st : parts) {
        out.odd_primes += st.odd_primes;
        out.s2_divisors += st.s2_divisors;
        out.mod8_1 += st.mod8_1;
        out.mod8_1_s2 += st.mod8_1_s2;
    }
    return out;
}

struct NGoodVerdict {
    bool good = false;
    std::optional<Int> witness;  // a prime divisor inside P(N)
};

inline NGoodVerdict is_n_good(const Int& n, const Int& N) {
    if (mpz_even_p(n.get_mpz_t())) throw std::invalid_argument("is_n_good: n must be odd");
    if (n < 1) throw std::invalid_argument("is_n_good: n must be positive");
    for (auto& [p, e] : arith::factorize(n).factors) {
        if (p <= 3) continue;
        if (!mpz_fits_ulong_p(p.get_mpz_t()))
            throw budget_error("is_n_good: prime factor too large to classify");
        if (order_prime_set_member(mpz_get_ui(p.get_mpz_t()), N)) return {false, p};
    }
    return {true, std::nullopt};
}

// truncated Euler-product estimate of c_N (double precision by design --
// the constant is a reported statistic, not a certified value)
inline double c_estimate(const Int& N, const primes::PrimeTable& table,
                         uint64_t truncation = 1'000'000) {
    if (truncation > table.limit())
        throw std::invalid_argument("c_estimate: truncation above table limit");
    double delta = Rat(delta_exact(N)).get_d();
    double logprod = 0.0;
    const auto& ps = table.primes();
    size_t n = table.count_leq(truncation);
    for (size_t i = 0; i < n; ++i) {
        uint64_t p = ps[i];
        double chi;
        if (p == 2)
            chi = 0.0;
        else if (p == 3)
            chi = 1.0;  // 3 is never in P(N)
        else
            chi = order_prime_set_member(p, N) ? 0.0 : 1.0;
        logprod += (1.0 - delta) * std::log1p(-1.0 / double(p));
        logprod -= std::log1p(-chi / double(p));
    }
    return std::exp(logprod - std::lgamma(1.0 - delta));
}

struct NGoodCount {
    uint64_t count = 0;       // N-good odd n <= x
    double c_estimate = 0.0;  // truncated-product estimate of c_N
    uint64_t c_truncation = 0;
};

inline NGoodCount ngood_count(uint64_t x, const Int& N, const primes::PrimeTable& table,
                              unsigned threads = 1, uint64_t c_trunc = 1'000'000) {
    if (x > 100'000'000) throw std::invalid_argument("ngood_count: x above 10^8 budget");
    if (x > table.limit()) throw std::invalid_argument("ngood_count: x above table limit");
    // mark all n <= x divisible by some member of P(N)
    std::vector<bool> bad(size_t(x) + 1, false);
    const auto& ps = table.primes();
    size_t n = table.count_leq(x);
    // member primes collected in segments (deterministic), marking serial
    size_t nseg = x / primes::segment_span + 1;
    std::vector<std::vector<uint64_t>> members(nseg);
    em::detail::parallel_chunks(nseg, threads, [&](size_t s) {
        uint64_t lo = s * primes::segment_span;
        uint64_t hi = lo + primes::segment_span;
        size_t i = size_t(std::lower_bound(ps.begin(), ps.begin() + n, lo) - ps.begin());
        for (; i < n && ps[i] < hi; ++i)
            if (ps[i] > 3 && order_prime_set_member(ps[i], N)) members[s].push_back(ps[i]);
    });
    for (auto& seg : members)
        for (uint64_t p : seg)
            for (uint64_t v = p; v <= x; v += p) bad[size_t(v)] = true;
    NGoodCount out;
    for (uint64_t v = 1; v <= x; v += 2)
        if (!bad[size_t(v)]) ++out.count;
    out.c_truncation = std::min(c_trunc, table.limit());
    out.c_estimate = c_estimate(N, table, out.c_truncation);
    return out;
}

struct M2Witness {
    uint64_t p = 0;
    uint64_t forced_residue = 0;  // k = ord_2(p)/2 - 1 ...
    uint64_t modulus = 0;         // ... (mod ord_2(p))
};

struct M2Analysis {
    uint64_t m = 0;
    std::vector<M2Witness> witnesses;  // primes p > 3 of m+2 inside P(N)
    // lower-bound tier 10^(10^e) when no witness survives, keyed on
    // 3 | m+2 and 5 | m+2
    std::optional<int> tier_outer_exponent;
    Rat newbee_lhs;
    bool newbee_integral = false;
};

inline M2Analysis m_plus_2_analysis(uint64_t m, const Int& N) {
    if (m < 3) throw std::invalid_argument("m_plus_2_analysis: m must be >= 3");
    M2Analysis out;
    out.m = m;
    auto f = arith::factorize64(m + 2);
    for (auto& [p, e] : f.factors) {
        if (p <= 3) continue;
        if (order_prime_set_member(p, N)) {
            uint64_t ord = arith::mult_order64(2, p);
            out.witnesses.push_back({p, ord / 2 - 1, ord});
        }
    }
    if (out.witnesses.empty()) {
        bool d3 = (m + 2) % 3 == 0, d5 = (m + 2) % 5 == 0;
        out.tier_outer_exponent = !d3 ? (!d5 ? 20 : 16) : (!d5 ? 14 : 11);
    }
    out.newbee_lhs = moser::detail::recip_sum(f) + Rat(3) / Rat(Int(m + 2));
    out.newbee_integral = out.newbee_lhs.get_den() == 1;
    return out;
}

struct WitnessElimination {
    bool eliminated = false;
    uint64_t p_used = 0;               // the prime carrying the helpful pairs
    std::vector<unsigned> residues;    // r of the pairs used
};

// Tries to rule out the residue class k = ord/2 - 1 (mod ord) forced by an
// m+2 witness prime, using helpful pairs at a single prime P = 1 (mod ord).
inline WitnessElimination eliminate_witness_class(uint64_t p, uint64_t prime_budget = 10000) {
    uint64_t ord = arith::mult_order64(2, p);
    if (ord % 4 != 2)
        throw std::invalid_argument("eliminate_witness_class: ord_2(p) must be 2 mod 4");
    uint64_t c = ord / 2 - 1;
    for (uint64_t P = ord + 1; P <= prime_budget; P += ord) {
        if (!arith::is_prime_u64(P)) continue;
        if (!bernoulli::irregular_indices(P).regular()) continue;
        bool all = true;
        std::vector<unsigned> used;
        for (uint64_t r = c; r < P - 1; r += ord) {
            if (r < 2 || r > P - 3 || (r & 1)) {
                all = false;
                break;
            }
            if (!helpful::is_helpful(unsigned(r), P).helpful) {
                all = false;
                break;
            }
            used.push_back(unsigned(r));
        }
        if (all && !used.empty()) return {true, P, std::move(used)};
    }
    return {false, 0, {}};
}

}  // namespace em::orders
