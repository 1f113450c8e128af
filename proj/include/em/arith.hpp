#pragma once

// Foundation arithmetic on arbitrary-precision integers: factorization,
// deterministic primality, multiplicative orders, the Carmichael function
// and p-adic valuations.  64-bit fast paths back the bulk scans.

#include "em/base.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <utility>

namespace em::arith {

struct Factorization {
    Int value;
    std::vector<std::pair<Int, unsigned>> factors;  // (prime, exponent), primes increasing
};

struct Factorization64 {
    uint64_t value = 1;
    std::vector<std::pair<uint64_t, unsigned>> factors;
};

namespace detail {

using em::detail::gcd64;
using em::detail::mulmod64;
using em::detail::powmod64;

inline const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> table = [] {
        const uint32_t limit = 100000;
        std::vector<bool> comp(limit + 1, false);
        std::vector<uint32_t> ps;
        for (uint32_t i = 2; i <= limit; ++i) {
            if (comp[i]) continue;
            ps.push_back(i);
            for (uint64_t j = uint64_t(i) * i; j <= limit; j += i) comp[j] = true;
        }
        return ps;
    }();
    return table;
}

inline bool mr_composite_witness64(uint64_t n, uint64_t a, uint64_t d, unsigned s) {
    uint64_t x = powmod64(a % n, d, n);
    if (x == 1 || x == n - 1 || x == 0) return false;
    for (unsigned i = 1; i < s; ++i) {
        x = mulmod64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

// Strong pseudoprime test for mpz to one base.
inline bool mr_composite_witness(const Int& n, unsigned long a) {
    Int nm1 = n - 1;
    unsigned long s = mpz_scan1(nm1.get_mpz_t(), 0);
    Int d = nm1 >> s;
    Int x = powmod(Int(a), d, n);
    if (x == 1 || x == nm1) return false;
    for (unsigned long i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == nm1) return false;
    }
    return true;
}

// Strong Lucas probable prime test (the Lucas half of BPSW), Selfridge
// parameters.  Deterministic; no counterexample is known in combination
// with the base-2 strong test.
inline bool strong_lucas_prp(const Int& n) {
    if (mpz_perfect_square_p(n.get_mpz_t())) return false;
    long d = 5;
    while (true) {
        int j = mpz_si_kronecker(d, n.get_mpz_t());
        if (j == -1) break;
        if (j == 0) return abs(Int(d)) != n ? false : true;
        d = d > 0 ? -(d + 2) : -(d - 2);
    }
    // P = 1, Q = (1 - d) / 4
    Int q = Int(1 - d) / 4;
    Int nm1 = n + 1;
    unsigned long s = mpz_scan1(nm1.get_mpz_t(), 0);
    Int t = nm1 >> s;

    Int u = 0, v = 2, qk = 1;
    size_t bits = mpz_sizeinbase(t.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        u = mod_pos(u * v, n);
        v = mod_pos(v * v - 2 * qk, n);
        qk = mod_pos(qk * qk, n);
        if (mpz_tstbit(t.get_mpz_t(), i)) {
            Int u2 = u + v;
            if (mpz_odd_p(u2.get_mpz_t())) u2 += n;
            u2 >>= 1;
            Int v2 = Int(d) * u + v;
            v2 = mod_pos(v2, n);
            if (mpz_odd_p(v2.get_mpz_t())) v2 += n;
            v2 >>= 1;
            u = mod_pos(u2, n);
            v = v2;
            qk = mod_pos(qk * q, n);
        }
    }
    if (u == 0 || v == 0) return true;
    for (unsigned long r = 1; r < s; ++r) {
        v = mod_pos(v * v - 2 * qk, n);
        if (v == 0) return true;
        qk = mod_pos(qk * qk, n);
    }
    return false;
}

// Brent-variant Pollard rho on 64 bits; deterministic parameter sequence.
inline uint64_t pollard_brent64(uint64_t n) {
    if ((n & 1) == 0) return 2;
    for (uint64_t c = 1;; ++c) {
        uint64_t x = 2, y = 2, d = 1;
        uint64_t power = 1, lam = 1;
        auto f = [&](uint64_t v) { return (mulmod64(v, v, n) + c) % n; };
        while (d == 1) {
            if (power == lam) {
                x = y;
                power <<= 1;
                lam = 0;
            }
            y = f(y);
            ++lam;
            uint64_t diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = gcd64(diff, n);
        }
        if (d != 0 && d != 1 && d != n) return d;
    }
}

// Brent rho on mpz with batched gcds and an iteration budget.
inline Int pollard_brent(const Int& n, uint64_t budget) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    uint64_t used = 0;
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, q = 1, g = 1, xs = 0;
        unsigned long r = 1;
        const unsigned long batch = 128;
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = mod_pos(y * y + c, n);
            for (unsigned long k = 0; k < r && g == 1; k += batch) {
                xs = y;
                unsigned long lim = std::min(batch, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = mod_pos(y * y + c, n);
                    q = mod_pos(q * (x - y), n);
                }
                used += lim;
                if (used > budget) throw budget_error("pollard_brent: iteration budget exceeded");
                g = gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            // back up and retry step by step
            g = 1;
            while (g == 1) {
                xs = mod_pos(xs * xs + c, n);
                g = gcd(Int(x - xs), n);
                if (++used > budget) throw budget_error("pollard_brent: iteration budget exceeded");
            }
        }
        if (g != n) return g;
    }
}

}  // namespace detail

// Deterministic Miller-Rabin; the 12 prime bases decide primality exactly
// for all 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (detail::mr_composite_witness64(n, a, d, s)) return false;
    return true;
}

// Deterministic for n < 3.317e24 via the fixed Miller-Rabin bases; larger
// inputs additionally pass a strong Lucas test (BPSW).  No randomness, so
// verdicts are reproducible.
inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
    for (unsigned long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    for (unsigned long a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (detail::mr_composite_witness(n, a)) return false;
    static const Int mr_certified_limit("3317044064679887385961980");
    if (n < mr_certified_limit) return true;
    return !detail::strong_lucas_prp(n) ? false : true;
}

inline Factorization64 factorize64(uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize64: n must be positive");
    Factorization64 f;
    f.value = n;
    std::vector<uint64_t> stack;
    for (uint32_t p : detail::small_primes()) {
        if (uint64_t(p) * p > n) break;
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.factors.emplace_back(p, e);
        }
    }
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        uint64_t m = stack.back();
        stack.pop_back();
        if (is_prime_u64(m)) {
            auto it = std::find_if(f.factors.begin(), f.factors.end(),
                                   [&](const auto& pr) { return pr.first == m; });
            if (it != f.factors.end())
                ++it->second;
            else
                f.factors.emplace_back(m, 1);
            continue;
        }
        uint64_t d = detail::pollard_brent64(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    std::sort(f.factors.begin(), f.factors.end());
    return f;
}

inline Factorization factorize(const Int& n, uint64_t rho_budget = 50'000'000) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    Factorization f;
    f.value = n;
    if (mpz_fits_ulong_p(n.get_mpz_t())) {
        Factorization64 g = factorize64(mpz_get_ui(n.get_mpz_t()));
        for (auto& [p, e] : g.factors) f.factors.emplace_back(Int(p), e);
        return f;
    }
    Int m = n;
    for (uint32_t p : detail::small_primes()) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            unsigned e = 0;
            do {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
            f.factors.emplace_back(Int(p), e);
        }
    }
    std::vector<Int> stack;
    if (m > 1) stack.push_back(m);
    while (!stack.empty()) {
        Int v = stack.back();
        stack.pop_back();
        if (is_prime(v)) {
            auto it = std::find_if(f.factors.begin(), f.factors.end(),
                                   [&](const auto& pr) { return pr.first == v; });
            if (it != f.factors.end())
                ++it->second;
            else
                f.factors.emplace_back(v, 1);
            continue;
        }
        Int d = detail::pollard_brent(v, rho_budget);
        stack.push_back(d);
        stack.push_back(Int(v / d));
    }
    std::sort(f.factors.begin(), f.factors.end());
    // merge duplicates that arrived along different split paths
    std::vector<std::pair<Int, unsigned>> merged;
    for (auto& pe : f.factors) {
        if (!merged.empty() && merged.back().first == pe.first)
            merged.back().second += pe.second;
        else
            merged.push_back(pe);
    }
    f.factors = std::move(merged);
    return f;
}

inline unsigned total_prime_factors(const Factorization& f) {
    unsigned t = 0;
    for (auto& [p, e] : f.factors) t += e;
    return t;
}

inline unsigned valuation(Int n, const Int& p) {
    if (n == 0) throw std::invalid_argument("valuation: n must be nonzero");
    unsigned v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

inline unsigned valuation64(uint64_t n, uint64_t p) {
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline uint64_t carmichael_lambda64(uint64_t n) {
    if (n == 0) throw std::invalid_argument("carmichael_lambda: n must be positive");
    if (n <= 2) return 1;
    uint64_t lam = 1;
    for (auto& [p, e] : factorize64(n).factors) {
        uint64_t comp;
        if (p == 2)
            comp = e == 1 ? 1 : (e == 2 ? 2 : uint64_t(1) << (e - 2));
        else {
            comp = p - 1;
            for (unsigned i = 1; i < e; ++i) comp *= p;
        }
        lam = lam / detail::gcd64(lam, comp) * comp;
    }
    return lam;
}

inline Int carmichael_lambda(const Int& n) {
    if (n < 1) throw std::invalid_argument("carmichael_lambda: n must be positive");
    if (mpz_fits_ulong_p(n.get_mpz_t())) return Int(carmichael_lambda64(mpz_get_ui(n.get_mpz_t())));
    Int lam = 1;
    for (auto& [p, e] : factorize(n).factors) {
        Int comp;
        if (p == 2)
            comp = e == 1 ? Int(1) : (e == 2 ? Int(2) : Int(Int(1) << (e - 2)));
        else
            comp = pow_int(p, e - 1) * (p - 1);
        lam = lcm(lam, comp);
    }
    return lam;
}

// least t >= 1 with g^t = 1 mod n; requires gcd(g, n) = 1
inline Int mult_order(const Int& g, const Int& n) {
    if (n < 2) throw std::invalid_argument("mult_order: n must be >= 2");
    if (gcd(mod_pos(g, n), n) != 1) throw std::invalid_argument("mult_order: gcd(g, n) != 1");
    Int lam = carmichael_lambda(n);
    Int t = lam;
    for (auto& [q, e] : factorize(lam).factors) {
        for (unsigned i = 0; i < e; ++i) {
            if (!mpz_divisible_p(t.get_mpz_t(), q.get_mpz_t())) break;
            Int cand = t / q;
            if (powmod(mod_pos(g, n), cand, n) == 1)
                t = cand;
            else
                break;
        }
    }
    return t;
}

inline uint64_t mult_order64(uint64_t g, uint64_t n) {
    if (n < 2) throw std::invalid_argument("mult_order: n must be >= 2");
    if (detail::gcd64(g % n, n) != 1) throw std::invalid_argument("mult_order: gcd(g, n) != 1");
    uint64_t lam = carmichael_lambda64(n);
    uint64_t t = lam;
    for (auto& [q, e] : factorize64(lam).factors) {
        for (unsigned i = 0; i < e; ++i) {
            if (t % q != 0) break;
            uint64_t cand = t / q;
            if (detail::powmod64(g % n, cand, n) == 1)
                t = cand;
            else
                break;
        }
    }
    return t;
}

}  // namespace em::arith
