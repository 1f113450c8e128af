#pragma once

// Bernoulli numbers: exact rationals via the classical recurrence,
// von Staudt-Clausen denominators, values modulo p, and irregular-prime
// detection.  Everything mod p stays mod p: for k <= p-3 every B_k is
// p-integral, so the recurrence runs entirely in Z/p.

#include "em/arith.hpp"

#include <deque>
#include <map>

namespace em::bernoulli {

inline constexpr unsigned exact_index_cap = 2000;
inline constexpr uint64_t irregular_prime_cap = 32768;

inline const Rat& bernoulli_exact(unsigned k) {
    if (k > exact_index_cap)
        throw std::invalid_argument("bernoulli_exact: index above supported cap");
    static std::deque<Rat> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (cache.empty()) {
        cache.emplace_back(1);
        cache.push_back(Rat(-1) / 2);
    }
    while (cache.size() <= k) {
        unsigned m = cache.size();
        if (m >= 3 && (m & 1)) {
            cache.emplace_back(0);
            continue;
        }
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        Rat s = 0;
        Int c = 1;  // C(m+1, j)
        for (unsigned j = 0; j < m; ++j) {
            if (cache[j] != 0) s += Rat(c) * cache[j];
            c *= m + 1 - j;
            c /= j + 1;
        }
        Rat b = -s / Rat(c);  // c = C(m+1, m) = m+1
        cache.push_back(b);
    }
    return cache[k];
}

inline Int vsc_denominator(unsigned k) {
    if (k < 2 || (k & 1)) throw std::invalid_argument("vsc_denominator: k must be even and >= 2");
    Int d = 1;
    for (unsigned div = 1; div <= k; ++div)
        if (k % div == 0 && arith::is_prime_u64(div + 1)) d *= div + 1;
    return d;
}

namespace detail {

// B_j mod p for j = 0..p-3, by the recurrence run in Z/p.
inline const std::vector<uint64_t>& bmod_table(uint64_t p) {
    static std::map<uint64_t, std::vector<uint64_t>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    if (p < 5 || !arith::is_prime_u64(p))
        throw std::invalid_argument("bmod_table: p must be a prime >= 5");
    if (p > irregular_prime_cap)
        throw std::invalid_argument("bmod_table: p above supported cap");

    size_t n = p - 2;  // indices 0..p-3
    std::vector<uint64_t> b(n);
    b[0] = 1;
    if (n > 1) b[1] = em::detail::mulmod64(p - 1, em::detail::invmod_prime64(2, p), p);
    // row holds C(m+1, j) mod p while computing B_m
    std::vector<uint64_t> row(n + 2, 0);
    row[0] = 1;
    row[1] = 2;
    row[2] = 1;  // C(2, *)
    for (size_t m = 2; m < n; ++m) {
        // advance Pascal row to C(m+1, *)
        for (size_t j = m + 1; j > 0; --j) {
            row[j] += row[j - 1];
            if (row[j] >= p) row[j] -= p;
        }
        uint64_t s = 0;
        for (size_t j = 0; j < m; ++j)
            if (b[j]) s = em::detail::addmod64(s, em::detail::mulmod64(row[j], b[j], p), p);
        uint64_t inv = em::detail::invmod_prime64((m + 1) % p, p);
        b[m] = em::detail::mulmod64(s ? p - s : 0, inv, p);
    }
    auto [pos, ok] = cache.emplace(p, std::move(b));
    return pos->second;
}

}  // namespace detail

// B_k mod p for even k with (p-1) not dividing k (the p-integral case).
// Indices above p-3 are lifted with the Kummer congruence B_k/k = B_r/r.
inline uint64_t bernoulli_mod(unsigned k, uint64_t p) {
    if (k < 2 || (k & 1)) throw std::invalid_argument("bernoulli_mod: k must be even and >= 2");
    if (p < 5 || !arith::is_prime_u64(p))
        throw std::invalid_argument("bernoulli_mod: p must be a prime >= 5");
    if (k % (p - 1) == 0)
        throw std::invalid_argument("bernoulli_mod: p-1 divides k (von Staudt-Clausen pole)");
    const auto& table = detail::bmod_table(p);
    if (k <= p - 3) return table[k];
    unsigned r = k % (p - 1);
    uint64_t scale = em::detail::mulmod64(k % p, em::detail::invmod_prime64(r, p), p);
    return em::detail::mulmod64(table[r], scale, p);
}

struct IrregularityRecord {
    uint64_t p;
    std::vector<unsigned> irregular_indices;  // even k in [2, p-3] with p | numerator(B_k)
    bool regular() const { return irregular_indices.empty(); }
};

inline const IrregularityRecord& irregular_indices(uint64_t p) {
    static std::map<uint64_t, IrregularityRecord> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(p);
        if (it != cache.end()) return it->second;
    }
    if (p < 5 || !arith::is_prime_u64(p))
        throw std::invalid_argument("irregular_indices: p must be a prime >= 5");
    const auto& table = detail::bmod_table(p);
    IrregularityRecord rec{p, {}};
    for (unsigned k = 2; k + 3 <= p; k += 2)
        if (table[k] == 0) rec.irregular_indices.push_back(k);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(p, std::move(rec)).first->second;
}

}  // namespace em::bernoulli
