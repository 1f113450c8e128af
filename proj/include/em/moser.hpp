#pragma once

// Candidate-m filters for the power-sum equation: the four reciprocal
// congruence identities over the prime divisors of m-1, m+1, 2m-1, 2m+1
// (plus the m+2 analogue), square-freeness and residue conditions, the
// per-prime congruence forms, and the derived reciprocal-sum left sides.
// Every verdict is the exact integrality of an explicitly computed
// rational; no floating point enters any verdict.

#include "em/arith.hpp"

#include <optional>

namespace em::moser {

struct IdentityCheck {
    bool integral = false;
    Rat lhs;
};

struct PerPrimeCheck {
    uint64_t p = 0;
    bool holds = false;
};

struct CandidateReport {
    uint64_t m = 0;
    IdentityCheck m8, m13, m16, m18, newbee;
    // all four of m8/m13/m16/m18 integral, with every modulus > 1
    bool joint = false;
    bool degenerate = false;  // some modulus equals 1 (only m = 2)
    bool sf_m_minus_1 = false;
    std::optional<bool> sf_m_plus_1_half;  // absent when m is even
    bool sf_m_plus_1 = false;
    bool sf_2m_minus_1 = false;
    bool sf_2m_plus_1 = false;
    unsigned m_mod_8 = 0, m_mod_3 = 0;
    std::vector<PerPrimeCheck> m5;    // (m-1)/p + 1 = 0 (mod p)
    std::vector<PerPrimeCheck> m12;   // (m+1)/(2p) + 1 = 0 (mod p), odd p, 4 | m+1
    bool m12_applicable = false;
    std::vector<PerPrimeCheck> m15;   // (2m-1)/p + 2 = 0 (mod p)
    std::vector<PerPrimeCheck> m18p;  // (2m+1)/p + 4 = 0 (mod p)
    Rat lhs_m19;          // over primes of M_1 = (m^2-1)(4m^2-1)/12
    Rat lhs_improvement;  // over primes of M_3 = M_1 * 12 * (m+2) / 12
};

namespace detail {

inline bool squarefree(const arith::Factorization64& f) {
    for (auto& [p, e] : f.factors)
        if (e > 1) return false;
    return true;
}

inline Rat recip_sum(const arith::Factorization64& f) {
    Rat s = 0;
    for (auto& [p, e] : f.factors) s += Rat(1) / Rat(Int(p));
    return s;
}

}  // namespace detail

inline CandidateReport check_candidate(uint64_t m) {
    if (m < 2) throw std::invalid_argument("check_candidate: m must be >= 2");
    if (m > (uint64_t(1) << 62)) throw std::invalid_argument("check_candidate: m too large");
    CandidateReport r;
    r.m = m;
    auto fm1 = arith::factorize64(m - 1);
    auto fp1 = arith::factorize64(m + 1);
    auto f2m1 = arith::factorize64(2 * m - 1);
    auto f2p1 = arith::factorize64(2 * m + 1);
    auto fp2 = arith::factorize64(m + 2);

    auto identity = [](const arith::Factorization64& f, uint64_t c, uint64_t n) {
        IdentityCheck ic;
        ic.lhs = detail::recip_sum(f) + Rat(Int(c)) / Rat(Int(n));
        ic.integral = ic.lhs.get_den() == 1;
        return ic;
    };
    r.m8 = identity(fm1, 1, m - 1);
    r.m13 = identity(fp1, 2, m + 1);
    r.m16 = identity(f2m1, 2, 2 * m - 1);
    r.m18 = identity(f2p1, 4, 2 * m + 1);
    r.newbee = identity(fp2, 3, m + 2);
    r.degenerate = (m - 1 == 1);
    r.joint = !r.degenerate && r.m8.integral && r.m13.integral && r.m16.integral &&
              r.m18.integral;

    r.sf_m_minus_1 = detail::squarefree(fm1);
    r.sf_m_plus_1 = detail::squarefree(fp1);
    if (m % 2 == 1) r.sf_m_plus_1_half = detail::squarefree(arith::factorize64((m + 1) / 2));
    r.sf_2m_minus_1 = detail::squarefree(f2m1);
    r.sf_2m_plus_1 = detail::squarefree(f2p1);
    r.m_mod_8 = unsigned(m % 8);
    r.m_mod_3 = unsigned(m % 3);

    for (auto& [p, e] : fm1.factors) r.m5.push_back({p, ((m - 1) / p + 1) % p == 0});
    r.m12_applicable = (m + 1) % 4 == 0;
    if (r.m12_applicable)
        for (auto& [p, e] : fp1.factors)
            if (p != 2) r.m12.push_back({p, ((m + 1) / (2 * p) + 1) % p == 0});
    for (auto& [p, e] : f2m1.factors) r.m15.push_back({p, ((2 * m - 1) / p + 2) % p == 0});
    for (auto& [p, e] : f2p1.factors) r.m18p.push_back({p, ((2 * m + 1) / p + 4) % p == 0});

    // lhs of the summed inequalities, over the union of the prime divisors
    // (no prime > 3 divides two of the factors; 2 and 3 are counted once)
    auto union_recip = [](std::initializer_list<const arith::Factorization64*> fs) {
        std::vector<uint64_t> ps;
        for (auto* f : fs)
            for (auto& [p, e] : f->factors) ps.push_back(p);
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        Rat s = 0;
        for (uint64_t p : ps) s += Rat(1) / Rat(Int(p));
        return s;
    };
    Rat tails = Rat(1) / Rat(Int(m - 1)) + Rat(2) / Rat(Int(m + 1)) +
                Rat(2) / Rat(Int(2 * m - 1)) + Rat(4) / Rat(Int(2 * m + 1));
    r.lhs_m19 = union_recip({&fm1, &fp1, &f2m1, &f2p1}) + tails;
    r.lhs_improvement =
        union_recip({&fm1, &fp1, &f2m1, &f2p1, &fp2}) + tails + Rat(3) / Rat(Int(m + 2));
    return r;
}

struct ScanResult {
    std::vector<uint64_t> joint;      // all four identities hold, none degenerate
    std::vector<uint64_t> m16_alone;  // the (M16) identity considered alone
};

inline ScanResult scan_range(uint64_t lo, uint64_t hi, unsigned threads = 1) {
    if (lo < 2) throw std::invalid_argument("scan_range: lo must be >= 2");
    if (hi < lo) throw std::invalid_argument("scan_range: empty range");
    if (hi - lo > 10'000'000) throw std::invalid_argument("scan_range: range above 10^7 budget");
    uint64_t span = hi - lo + 1;
    size_t nchunks = size_t(std::min<uint64_t>((span + 9999) / 10000, 1024));
    std::vector<ScanResult> parts(nchunks);
    em::detail::parallel_chunks(nchunks, threads, [&](size_t c) {
        uint64_t a = lo + span * c / nchunks;
        uint64_t b = lo + span * (c + 1) / nchunks;
        for (uint64_t m = a; m < b; ++m) {
            CandidateReport r = check_candidate(m);
            if (r.joint) parts[c].joint.push_back(m);
            if (r.m16.integral) parts[c].m16_alone.push_back(m);
        }
    });
    ScanResult out;
    for (auto& p : parts) {
        out.joint.insert(out.joint.end(), p.joint.begin(), p.joint.end());
        out.m16_alone.insert(out.m16_alone.end(), p.m16_alone.begin(), p.m16_alone.end());
    }
    return out;
}

// true iff no prime p | m has p-1 | k: the reciprocal sum over such primes
// must be empty, since a sum of reciprocals of distinct primes is never a
// positive integer.
inline bool five_check(uint64_t m, uint64_t k) {
    if (m < 2) throw std::invalid_argument("five_check: m must be >= 2");
    for (auto& [p, e] : arith::factorize64(m).factors)
        if (k % (p - 1) == 0) return false;
    return true;
}

// Verifies 2(3^k-1)(m-1)^k + sum_{p | 2m-3, p-1 | k} (2m-3)/p = 0 (mod 2m-3).
inline bool sta_check(uint64_t m, uint64_t k) {
    if (m < 2) throw std::invalid_argument("sta_check: m must be >= 2");
    if (m > (uint64_t(1) << 62)) throw std::invalid_argument("sta_check: m too large");
    uint64_t mod = 2 * m - 3;
    if (mod <= 1) return true;  // modulus-1 congruences hold vacuously
    uint64_t t3 = em::detail::powmod64(3 % mod, k, mod);
    uint64_t lhs = em::detail::mulmod64(2 * ((t3 + mod - 1) % mod) % mod,
                                        em::detail::powmod64((m - 1) % mod, k, mod), mod);
    for (auto& [p, e] : arith::factorize64(mod).factors)
        if (k % (p - 1) == 0) lhs = em::detail::addmod64(lhs, (mod / p) % mod, mod);
    return lhs % mod == 0;
}

struct MMinus4Result {
    bool holds = false;
    Rat lhs;
    uint64_t lambda_m_minus_4 = 0;  // the side condition needs lambda(m-4) | k
};

inline MMinus4Result m_minus_4_check(uint64_t m) {
    if (m < 6) throw std::invalid_argument("m_minus_4_check: m must be >= 6");
    if (m % 3 != 2) throw std::invalid_argument("m_minus_4_check: requires m = 2 (mod 3)");
    MMinus4Result out;
    uint64_t n = m - 4;
    out.lhs = detail::recip_sum(arith::factorize64(n)) - Rat(2) / Rat(Int(n));
    out.holds = out.lhs.get_den() == 1;
    out.lambda_m_minus_4 = arith::carmichael_lambda64(n);
    return out;
}

}  // namespace em::moser
