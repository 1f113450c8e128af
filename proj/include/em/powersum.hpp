#pragma once

// Power sums S_r(n) = sum_{j=0}^{n-1} j^r with the 0^0 = 1 convention
// (so S_0(n) = n): exact values through the Bernoulli closed form,
// modular values through block periodicity, and the Carlitz-von Staudt
// residue evaluator.

#include "em/bernoulli.hpp"

namespace em::powersum {

namespace detail {

inline constexpr uint64_t direct_sum_cap = 2'000'000;

inline Int powersum_direct(unsigned r, const Int& n) {
    if (n > direct_sum_cap)
        throw budget_error("powersum_exact: r above Bernoulli cap and n too large for direct summation");
    uint64_t lim = mpz_get_ui(n.get_mpz_t());
    Int acc = r == 0 ? 1 : 0;  // j = 0 term
    Int t;
    for (uint64_t j = 1; j < lim; ++j) {
        mpz_ui_pow_ui(t.get_mpz_t(), j, r);
        acc += t;
    }
    return acc;
}

}  // namespace detail

inline Int powersum_exact(unsigned r, const Int& n) {
    if (n < 1) throw std::invalid_argument("powersum_exact: n must be positive");
    if (r > 10000) throw std::invalid_argument("powersum_exact: r must be <= 10^4");
    if (r == 0) return n;
    if (r > bernoulli::exact_index_cap) return detail::powersum_direct(r, n);
    // S_r(n) = sum_{j=0}^{r} C(r, j) B_{r-j} n^{j+1} / (j+1)
    Rat acc = 0;
    Int binom = 1;  // C(r, j)
    Int npow = n;   // n^{j+1}
    for (unsigned j = 0; j <= r; ++j) {
        const Rat& b = bernoulli::bernoulli_exact(r - j);
        if (b != 0) acc += Rat(binom * npow) * b / Rat(j + 1);
        if (j < r) {
            binom *= r - j;
            binom /= j + 1;
            npow *= n;
        }
    }
    if (acc.get_den() != 1) throw std::logic_error("powersum_exact: non-integral result");
    return Int(acc.get_num());
}

// S_r(n) mod M in O(M log r): full blocks of length M each contribute
// S_r(M), the trailing partial block is summed directly.
inline Int powersum_mod(unsigned r, const Int& n, const Int& modulus) {
    if (modulus < 2) throw std::invalid_argument("powersum_mod: modulus must be >= 2");
    if (n < 1) throw std::invalid_argument("powersum_mod: n must be positive");
    if (modulus > 1'000'000'000)
        throw budget_error("powersum_mod: modulus above O(M) summation budget");
    uint64_t m64 = mpz_get_ui(modulus.get_mpz_t());
    Int blocks_i = n / modulus;
    uint64_t rem = mpz_get_ui(Int(n % modulus).get_mpz_t());
    uint64_t blocks_mod = mpz_get_ui(Int(blocks_i % modulus).get_mpz_t());

    // (bM + i)^r = i^r (mod M), including i = 0 under 0^0 = 1
    uint64_t full = r == 0 ? 1 % m64 : 0;  // j = 0 contributes 0^r
    uint64_t partial = 0;
    bool no_blocks = blocks_i == 0;
    for (uint64_t j = 1; j < m64; ++j) {
        if (j == rem) {
            partial = full;
            if (no_blocks) break;
        }
        full = em::detail::addmod64(full, em::detail::powmod64(j, r, m64), m64);
    }
    uint64_t res = em::detail::addmod64(em::detail::mulmod64(blocks_mod, full, m64), partial, m64);
    return Int(res);
}

inline int epsilon(unsigned r, const Int& p) {
    if (r < 1) throw std::invalid_argument("epsilon: r must be >= 1");
    if (!arith::is_prime(p)) throw std::invalid_argument("epsilon: p must be prime");
    return mpz_divisible_p(Int(r).get_mpz_t(), Int(p - 1).get_mpz_t()) ? -1 : 0;
}

// Carlitz-von Staudt residue of S_r(y).  For even r the theorem gives
// -sum_{p-1|r, p|y} y/p (mod y); for odd r it claims 0 (mod y(y-1)/2),
// which Carlitz overstated, so both the strict and the doubled form
// 2 S_r(y) = 0 (mod y(y-1)) are evaluated and reported.
struct CvsResult {
    unsigned r = 0;
    Int y;
    Int modulus;          // y if r even, y(y-1)/2 if r odd
    Int residue;          // S_r(y) mod modulus, by modular summation
    Int formula_residue;  // theorem's claimed residue
    bool matches = false;
    bool strict_form_held = false;   // odd r only
    bool doubled_form_held = false;  // odd r only
};

inline CvsResult cvs_eval(unsigned r, const Int& y) {
    if (r < 1) throw std::invalid_argument("cvs_eval: r must be positive");
    if (y < 2) throw std::invalid_argument("cvs_eval: y must be >= 2");
    CvsResult out;
    out.r = r;
    out.y = y;
    if (r % 2 == 0) {
        out.modulus = y;
        Int s = 0;
        for (auto& [p, e] : arith::factorize(y).factors)
            if (mpz_divisible_p(Int(r).get_mpz_t(), Int(p - 1).get_mpz_t())) s += y / p;
        out.formula_residue = mod_pos(-s, y);
        out.residue = powersum_mod(r, y, y);
        out.matches = out.residue == out.formula_residue;
    } else {
        Int half = y * (y - 1) / 2;
        out.modulus = half;
        out.formula_residue = 0;
        out.residue = half >= 2 ? powersum_mod(r, y, half) : Int(0);
        out.strict_form_held = out.residue == 0;
        Int full = y * (y - 1);
        Int res2 = powersum_mod(r, y, full);
        out.doubled_form_held = mod_pos(2 * res2, full) == 0;
        out.matches = out.strict_form_held;
    }
    return out;
}

}  // namespace em::powersum
