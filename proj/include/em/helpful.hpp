#pragma once

// Helpful pairs (r, p): regular prime p, even r in [2, p-3], with
// S_r(a) never congruent to a^r mod p.  A helpful pair excludes the
// residue class k = r (mod p-1) for any solution exponent k; the cascade
// chains such exclusions into proven divisors of k.

#include "em/powersum.hpp"

#include <optional>

namespace em::helpful {

struct HelpfulVerdict {
    unsigned r = 0;
    uint64_t p = 0;
    bool helpful = false;
    std::optional<uint64_t> witness;  // least a with S_r(a) = a^r (mod p)
    bool regular = false;
};

inline HelpfulVerdict is_helpful(unsigned r, uint64_t p) {
    if (!arith::is_prime_u64(p)) throw std::invalid_argument("is_helpful: p must be prime");
    if (!bernoulli::irregular_indices(p).regular())
        throw std::invalid_argument("is_helpful: p is irregular, verdict undefined");
    if (r < 2 || (r & 1) || r > p - 3)
        throw std::invalid_argument("is_helpful: r must be even in [2, p-3]");
    uint64_t s = 0;  // S_r(a) mod p, running prefix sum
    for (uint64_t a = 1; a < p; ++a) {
        uint64_t ar = em::detail::powmod64(a, r, p);
        if (s == ar) return {r, p, false, a, true};
        s = em::detail::addmod64(s, ar, p);
    }
    return {r, p, true, std::nullopt, true};
}

struct HelpfulSet {
    uint64_t p = 0;
    std::vector<unsigned> helpful_r;
    unsigned candidates = 0;
    double fraction = 0.0;  // statistic only; heuristically near 1/e
};

inline HelpfulSet helpful_residues(uint64_t p) {
    if (!arith::is_prime_u64(p) || p < 5)
        throw std::invalid_argument("helpful_residues: p must be a prime >= 5");
    if (!bernoulli::irregular_indices(p).regular())
        throw std::invalid_argument("helpful_residues: p is irregular");
    HelpfulSet out;
    out.p = p;
    std::vector<uint64_t> sq(p), pw(p);
    for (uint64_t a = 1; a < p; ++a) {
        sq[a] = em::detail::mulmod64(a, a, p);
        pw[a] = sq[a];  // a^2, the r = 2 powers
    }
    for (unsigned r = 2; r + 3 <= p; r += 2) {
        ++out.candidates;
        uint64_t s = 0;
        bool ok = true;
        for (uint64_t a = 1; a < p; ++a) {
            if (s == pw[a]) {
                ok = false;
                break;
            }
            s = em::detail::addmod64(s, pw[a], p);
        }
        if (ok) out.helpful_r.push_back(r);
        if (r + 5 <= p)
            for (uint64_t a = 1; a < p; ++a) pw[a] = em::detail::mulmod64(pw[a], sq[a], p);
    }
    out.fraction = out.candidates ? double(out.helpful_r.size()) / out.candidates : 0.0;
    return out;
}

// One excluded residue class of the step's target prime power, covered by
// helpful pairs at a single prime p.
struct ClassExclusion {
    uint64_t residue_class = 0;  // class of k mod prime_power being ruled out
    uint64_t p = 0;
    std::vector<unsigned> residues;  // the r of the helpful pairs (r, p) used
};

struct CascadeStep {
    uint64_t prime_power = 0;  // q^(b+1) proven to divide k by this step
    std::vector<ClassExclusion> exclusions;
};

struct CascadeState {
    uint64_t target = 0;
    uint64_t proven = 2;  // k is even for every solution
    bool reached = false;
    std::vector<CascadeStep> trace;
    std::string stall_reason;
};

namespace detail {

inline uint64_t first_prime_in_progression(uint64_t w) {
    for (uint64_t p = w + 1;; p += w)
        if (arith::is_prime_u64(p)) return p;
}

// Try to exclude k = c (mod w) given proven | k, using helpful pairs at a
// single prime p = 1 (mod w).  Covers every residue r mod (p-1) compatible
// with both congruences.
inline std::optional<ClassExclusion> exclude_class(uint64_t w, uint64_t c, uint64_t proven,
                                                   uint64_t prime_budget) {
    for (uint64_t p = w + 1; p <= prime_budget; p += w) {
        if (!arith::is_prime_u64(p)) continue;
        if (!bernoulli::irregular_indices(p).regular()) continue;
        uint64_t g = em::detail::gcd64(proven, p - 1);
        uint64_t step = g / em::detail::gcd64(g, w) * w;  // lcm(g, w)
        // smallest r >= 0 with r = c (mod w) and r = 0 (mod g)
        uint64_t r0 = 0;
        bool found0 = false;
        for (uint64_t r = 0; r < step; r += g)
            if (r % w == c % w) {
                r0 = r;
                found0 = true;
                break;
            }
        if (!found0) continue;  // class incompatible with proven | k at this p
        std::vector<unsigned> used;
        bool all = true;
        for (uint64_t r = r0; r < p - 1; r += step) {
            if (r < 2 || r > p - 3 || (r & 1)) {
                all = false;
                break;
            }
            if (!is_helpful(unsigned(r), p).helpful) {
                all = false;
                break;
            }
            used.push_back(unsigned(r));
        }
        if (all && !used.empty()) return ClassExclusion{c, p, std::move(used)};
    }
    return std::nullopt;
}

}  // namespace detail

// Starting from 2 | k, proves target | k by excluding residue classes of k
// with helpful pairs.  Prime-power steps are ordered by the first prime in
// the progression 1 mod q^(b+1) (4 before 3 before 8, as in the source
// derivation).  Budget exhaustion is an explicit non-error outcome.
inline CascadeState cascade_run(uint64_t target, uint64_t prime_budget = 10000) {
    if (target < 1) throw std::invalid_argument("cascade_run: target must be positive");
    CascadeState st;
    st.target = target;
    auto tfac = arith::factorize64(target).factors;
    while (st.proven % target != 0) {
        // pending prime powers, each one exponent above what is proven
        uint64_t best_w = 0, best_p = ~uint64_t(0);
        for (auto& [q, e] : tfac) {
            unsigned have = arith::valuation64(st.proven, q);
            if (have >= e) continue;
            uint64_t w = q;
            for (unsigned i = 0; i < have; ++i) w *= q;
            uint64_t fp = detail::first_prime_in_progression(w);
            if (fp < best_p || (fp == best_p && w < best_w)) {
                best_p = fp;
                best_w = w;
            }
        }
        uint64_t w = best_w;
        uint64_t q = 0;
        for (auto& [qq, e] : tfac)
            if (w % qq == 0) q = qq;
        uint64_t qb = w / q;  // q^b, the proven power
        CascadeStep step;
        step.prime_power = w;
        bool ok = true;
        for (uint64_t t = 1; t < q && ok; ++t) {
            uint64_t c = t * qb;
            auto ex = detail::exclude_class(w, c, st.proven, prime_budget);
            if (!ex) {
                st.stall_reason = "no prime <= budget excludes k = " + std::to_string(c) +
                                  " (mod " + std::to_string(w) + ")";
                ok = false;
                break;
            }
            step.exclusions.push_back(std::move(*ex));
        }
        if (!ok) return st;
        st.trace.push_back(std::move(step));
        st.proven *= q;
    }
    st.reached = true;
    return st;
}

}  // namespace em::helpful
