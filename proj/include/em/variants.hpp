#pragma once

// Generalized power-sum equation machinery: highly-composite-number
// enumeration and the divisor-threshold bound on k, the four k-free
// necessary inequalities for S_k(m) = a m^k, and complete treatment of the
// reversed equation a S_k(m) = m^k, including the power-of-2-vs-3 equation
// 1 + 2^k = 3^n.

#include "em/arith.hpp"
#include "em/powersum.hpp"

#include <optional>
#include <tuple>

namespace em::variants {

struct HighlyCompositeNumber {
    Int value;
    std::vector<unsigned> exponents;  // over consecutive primes 2, 3, 5, ...
    uint64_t divisor_count = 0;
};

namespace detail {

using u128 = unsigned __int128;

inline const std::vector<uint64_t>& hcn_primes() {
    static const std::vector<uint64_t> ps = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                             31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                             73, 79, 83, 89, 97, 101, 103, 107, 109, 113};
    return ps;
}

inline Int u128_to_int(u128 v) {
    Int r = uint64_t(v >> 64);
    r <<= 64;
    r += uint64_t(v);
    return r;
}

// all products over nonincreasing exponent sequences, value <= limit
inline void enumerate_candidates(u128 limit, std::vector<std::pair<u128, uint64_t>>& out) {
    const auto& ps = hcn_primes();
    out.emplace_back(1, 1);
    // depth-first; exponent of prime i capped by the previous prime's
    std::vector<std::tuple<size_t, unsigned, u128, uint64_t>> stack;
    stack.emplace_back(0, 128, u128(1), uint64_t(1));
    while (!stack.empty()) {
        auto [idx, cap, val, dc] = stack.back();
        stack.pop_back();
        if (idx >= ps.size()) continue;
        u128 v = val;
        for (unsigned e = 1; e <= cap; ++e) {
            if (v > limit / ps[idx]) break;
            v *= ps[idx];
            uint64_t d = dc * (e + 1);
            out.emplace_back(v, d);
            stack.emplace_back(idx + 1, e, v, d);
        }
        if (out.size() > 80'000'000) throw budget_error("hcn_enumerate: candidate set above budget");
    }
}

}  // namespace detail

// Complete ordered list of highly composite numbers <= max_value, generated
// by bounded exponent-sequence search; every record is validated against
// the running maximum rather than trusted from the search shape.
inline std::vector<HighlyCompositeNumber> hcn_enumerate(const Int& max_value) {
    if (max_value < 1) throw std::invalid_argument("hcn_enumerate: bound must be positive");
    if (max_value > pow10_int(30)) throw std::invalid_argument("hcn_enumerate: bound above 10^30");
    detail::u128 limit = 0;
    {
        Int v = max_value;
        Int hi = v >> 64;
        limit = detail::u128(mpz_get_ui(hi.get_mpz_t())) << 64 |
                detail::u128(mpz_get_ui(Int(v & Int((Int(1) << 64) - 1)).get_mpz_t()));
    }
    std::vector<std::pair<detail::u128, uint64_t>> cand;
    detail::enumerate_candidates(limit, cand);
    std::sort(cand.begin(), cand.end());
    std::vector<HighlyCompositeNumber> out;
    uint64_t record = 0;
    for (auto& [v, d] : cand) {
        if (d <= record) continue;
        record = d;
        HighlyCompositeNumber h;
        h.value = detail::u128_to_int(v);
        h.divisor_count = d;
        Int rest = h.value;
        for (uint64_t p : detail::hcn_primes()) {
            unsigned e = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++e;
            }
            if (e == 0) break;
            h.exponents.push_back(e);
        }
        out.push_back(std::move(h));
    }
    return out;
}

struct ProvoBound {
    HighlyCompositeNumber n_low;   // largest HCN with d(n) < s
    HighlyCompositeNumber n_high;  // the next one, d(n) >= s
    size_t n_low_index = 0;        // 0-based position in the HCN sequence
    Int k_bound;                   // k >= 2 n_low
};

// Consecutive highly composite pair straddling the divisor threshold s;
// any m-1 with at least s prime factors forces k >= 2 n_low.
inline ProvoBound provo_k_bound(uint64_t s) {
    if (s < 2) throw std::invalid_argument("provo_k_bound: s must be >= 2");
    Int limit = 1'000'000;
    while (true) {
        auto list = hcn_enumerate(limit);
        for (size_t i = 1; i < list.size(); ++i) {
            if (list[i].divisor_count >= s) {
                ProvoBound out;
                out.n_low = list[i - 1];
                out.n_high = list[i];
                out.n_low_index = i - 1;
                out.k_bound = 2 * out.n_low.value;
                return out;
            }
        }
        if (limit >= pow10_int(30)) throw budget_error("provo_k_bound: threshold out of range");
        limit *= 10000;
        if (limit > pow10_int(30)) limit = pow10_int(30);
    }
}

// The four k-free necessary inequalities for S_k(m) = a m^k; the p-1 | k
// restriction in the exact forms is dropped, which only strengthens the
// left sides, so a failure still certifies non-existence.
struct GeneralizedInequalities {
    bool m_minus_1 = false, m_plus_1 = false, two_m_minus_1 = false, two_m_plus_1 = false;
    Rat v1, v2, v3, v4;
    bool all_hold = false;
};

inline GeneralizedInequalities generalized_inequalities(const Int& a, uint64_t m) {
    if (m < 2) throw std::invalid_argument("generalized_inequalities: m must be >= 2");
    if (a < 1) throw std::invalid_argument("generalized_inequalities: a must be >= 1");
    auto recip = [](uint64_t n) {
        Rat s = 0;
        for (auto& [p, e] : arith::factorize64(n).factors) s += Rat(1) / Rat(Int(p));
        return s;
    };
    GeneralizedInequalities g;
    g.v1 = recip(m - 1) + Rat(a) / Rat(Int(m - 1));
    g.v2 = recip(m + 1) + Rat(a + 1) / Rat(Int(m + 1));
    g.v3 = recip(2 * m - 1) + Rat(2 * a) / Rat(Int(2 * m - 1));
    g.v4 = recip(2 * m + 1) + Rat(2 * (a + 1)) / Rat(Int(2 * m + 1));
    g.m_minus_1 = g.v1 >= 1;
    g.m_plus_1 = g.v2 >= 1;
    g.two_m_minus_1 = g.v3 >= 1;
    g.two_m_plus_1 = g.v4 >= 1;
    g.all_hold = g.m_minus_1 && g.m_plus_1 && g.two_m_minus_1 && g.two_m_plus_1;
    return g;
}

struct KellnerVerdict {
    bool excluded = false;
    std::optional<uint64_t> witness_q;  // prime q || a with q-1 | k
};

// a S_k(m) = m^k has no solution when some prime q || a has q-1 | k.
// For all even k simultaneously this reduces to a = 2 (mod 4) or
// a = 3, 6 (mod 9).
inline KellnerVerdict kellner_excluded_all_even(const Int& a) {
    if (a < 1) throw std::invalid_argument("kellner_excluded: a must be >= 1");
    if (mod_pos(a, 4) == 2) return {true, 2};
    Int r9 = mod_pos(a, 9);
    if (r9 == 3 || r9 == 6) return {true, 3};
    return {false, std::nullopt};
}

inline KellnerVerdict kellner_excluded(const Int& a, uint64_t k) {
    if (a < 1) throw std::invalid_argument("kellner_excluded: a must be >= 1");
    if (k < 2 || k % 2) throw std::invalid_argument("kellner_excluded: k must be even, >= 2");
    for (auto& [p, e] : arith::factorize(a).factors) {
        if (e != 1) continue;
        if (!mpz_fits_ulong_p(p.get_mpz_t())) continue;
        uint64_t q = mpz_get_ui(p.get_mpz_t());
        if (k % (q - 1) == 0) return {true, q};
    }
    return {false, std::nullopt};
}

struct KellnerSolution {
    Int a;
    unsigned k = 0;
    uint64_t m = 0;
};

// Exhaustive search of a S_k(m) = m^k over 3 <= m <= m_max, 1 <= k <= k_max:
// a is determined as m^k / S_k(m) whenever that ratio is integral.  For odd
// k >= 3 and m >= 4, m(m-1)/2 divides S_k(m) while some prime of m(m-1)/2
// misses m^k, so those cases are skipped.
inline std::vector<KellnerSolution> kellner_search(uint64_t m_max, unsigned k_max) {
    if (m_max > 10000) throw std::invalid_argument("kellner_search: m_max above 10^4");
    if (k_max > 100) throw std::invalid_argument("kellner_search: k_max above 100");
    std::vector<KellnerSolution> out;
    for (unsigned k = 1; k <= k_max; ++k) {
        uint64_t mhi = (k >= 3 && k % 2 == 1) ? std::min<uint64_t>(3, m_max) : m_max;
        Int s = 1;  // S_k(2) = 1^k
        for (uint64_t m = 3; m <= mhi; ++m) {
            Int t;
            mpz_ui_pow_ui(t.get_mpz_t(), m - 1, k);
            s += t;  // S_k(m) = S_k(m-1) + (m-1)^k
            Int mk;
            mpz_ui_pow_ui(mk.get_mpz_t(), m, k);
            if (mpz_divisible_p(mk.get_mpz_t(), s.get_mpz_t())) out.push_back({Int(mk / s), k, m});
        }
    }
    std::sort(out.begin(), out.end(), [](const KellnerSolution& x, const KellnerSolution& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.k != y.k) return x.k < y.k;
        return x.m < y.m;
    });
    return out;
}

// solutions of 1 + 2^k = 3^n with k <= bound; the mod-3^12 filter keeps the
// exhaustive pass cheap without excluding anything
inline std::vector<std::pair<unsigned, unsigned>> ben_gerson_solve(uint64_t bound) {
    if (bound > 1'000'000) throw std::invalid_argument("ben_gerson_solve: bound above 10^6");
    std::vector<std::pair<unsigned, unsigned>> out;
    const uint64_t m312 = 531441;  // 3^12
    for (uint64_t k = 1; k <= bound; ++k) {
        bool candidate;
        if (k <= 24)
            candidate = true;  // 3^n <= 1 + 2^24 handled exactly below
        else
            candidate = em::detail::powmod64(2, k, m312) == m312 - 1;
        if (candidate) {
            Int v = 1;
            mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), k);
            v += 1;
            // strip factors of 3 and test for exact power
            unsigned n = 0;
            Int w = v;
            while (mpz_divisible_ui_p(w.get_mpz_t(), 3)) {
                mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(), 3);
                ++n;
            }
            if (w == 1 && n >= 1) out.emplace_back(unsigned(k), n);
        }
    }
    return out;
}

}  // namespace em::variants
