#pragma once

#include <gmpxx.h>

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace em {

using Int = mpz_class;
using Rat = mpq_class;

// An operation ran past its configured search or iteration budget.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Interval arithmetic could not separate a comparison at the requested
// precision; the caller must raise the digit count.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int pow10_int(unsigned k) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
    return r;
}

inline Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Int powmod(const Int& b, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

// value mod m normalized to [0, m)
inline Int mod_pos(const Int& v, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline size_t digits10(const Int& n) { return mpz_sizeinbase(n.get_mpz_t(), 10); }

// truncated decimal expansion of a rational, `frac_digits` digits after the point
inline std::string decimal_string(const Rat& x, unsigned frac_digits) {
    Rat a = abs(x);
    Int scaled = Int(a.get_num() * pow10_int(frac_digits) / a.get_den());
    Int ip = scaled / pow10_int(frac_digits);
    Int fp = scaled % pow10_int(frac_digits);
    std::string frac = fp.get_str();
    frac.insert(0, frac_digits - frac.size(), '0');
    std::string s = (sgn(x) < 0 ? "-" : "") + ip.get_str();
    if (frac_digits) s += "." + frac;
    return s;
}

namespace detail {

inline uint64_t mulmod64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline uint64_t addmod64(uint64_t a, uint64_t b, uint64_t m) {
    a %= m;
    b %= m;
    uint64_t s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

inline uint64_t powmod64(uint64_t b, uint64_t e, uint64_t m) {
    if (m == 1) return 0;
    uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, b, m);
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    return r;
}

inline uint64_t gcd64(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline uint64_t invmod_prime64(uint64_t a, uint64_t p) { return powmod64(a % p, p - 2, p); }

// Runs fn(chunk) for chunk in [0, n_chunks) over `threads` workers. The
// caller owns per-chunk result slots and combines them in chunk order, so
// results cannot depend on the thread count.
template <class Fn>
void parallel_chunks(std::size_t n_chunks, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n_chunks <= 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&] {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < n_chunks;) fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::size_t n = std::min<std::size_t>(threads, n_chunks);
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail
}  // namespace em
