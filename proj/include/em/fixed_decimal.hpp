#pragma once

// Fixed-point decimal interval scalars (midpoint + rigorous error bound)
// and the certified elementary functions built on them.  All midpoints are
// integers scaled by 10^digits, truncated toward zero; errors are tracked
// exactly, either as integer ulp counts (hot paths) or as rationals.
// Nothing here uses floating point, so results are bit-reproducible.

#include "em/base.hpp"

#include <map>
#include <optional>

namespace em {

struct BoundedReal {
    Int mid;             // value ~ mid / 10^digits
    unsigned digits = 30;
    Rat err;             // |true - mid/10^digits| <= err

    Rat midpoint() const { return Rat(mid) / Rat(pow10_int(digits)); }
    Rat lower() const { return midpoint() - err; }
    Rat upper() const { return midpoint() + err; }
    bool certainly_less(const Rat& x) const { return upper() < x; }
    bool certainly_ge(const Rat& x) const { return lower() >= x; }
    bool contains(const Rat& x) const { return lower() <= x && x <= upper(); }

    std::string to_string() const {
        Rat m = midpoint();
        return decimal_string(m, digits);
    }

    static BoundedReal from_rational(const Rat& v, unsigned digits) {
        BoundedReal b;
        b.digits = digits;
        Int scale = pow10_int(digits);
        Int m;
        mpz_tdiv_q(m.get_mpz_t(), Int(v.get_num() * scale).get_mpz_t(), v.get_den().get_mpz_t());
        b.mid = m;
        b.err = abs(v - Rat(m) / Rat(scale));
        return b;
    }
};

namespace fx {

// scaled integer plus exact error in ulps of 10^-digits
struct Fx {
    Int v;
    Int err;  // ulps
};

inline Fx add(const Fx& a, const Fx& b) { return {a.v + b.v, a.err + b.err}; }
inline Fx sub(const Fx& a, const Fx& b) { return {a.v - b.v, a.err + b.err}; }
inline Fx scale_int(const Fx& a, unsigned long k) { return {a.v * k, a.err * k}; }

inline BoundedReal to_bounded(const Fx& f, unsigned engine_digits, unsigned out_digits) {
    BoundedReal b;
    b.digits = out_digits;
    if (out_digits >= engine_digits) {
        b.mid = f.v * pow10_int(out_digits - engine_digits);
        b.err = Rat(f.err) / Rat(pow10_int(engine_digits));
    } else {
        Int d = pow10_int(engine_digits - out_digits);
        mpz_tdiv_q(b.mid.get_mpz_t(), f.v.get_mpz_t(), d.get_mpz_t());
        b.err = Rat(f.err) / Rat(pow10_int(engine_digits)) + Rat(1) / Rat(pow10_int(out_digits));
    }
    return b;
}

// nearest-rounded conversion: the rescaling contributes exactly half an ulp
inline BoundedReal to_bounded_nearest(const Fx& f, unsigned engine_digits, unsigned out_digits) {
    if (out_digits >= engine_digits) return to_bounded(f, engine_digits, out_digits);
    BoundedReal b;
    b.digits = out_digits;
    Int d = pow10_int(engine_digits - out_digits);
    Int shifted = 2 * f.v + d;
    mpz_fdiv_q(b.mid.get_mpz_t(), shifted.get_mpz_t(), Int(2 * d).get_mpz_t());
    b.err = Rat(f.err) / Rat(pow10_int(engine_digits)) + Rat(1, 2) / Rat(pow10_int(out_digits));
    return b;
}

// --- binary-splitting atanh ---------------------------------------------
//
// atanh(num/den) = (num/den) * sum_{i>=0} (num^2/den^2)^i / (2i+1),
// requires num/den <= 1/3.  The partial sum over [l, r) is carried as
// T / (B * Q^(r-l-1)) with Q = den^2, P = num^2:
//   T(l,r) = T(l,m) * B(m,r) * Q^(r-m) + T(m,r) * B(l,m) * P^(m-l)
//   B(l,r) = B(l,m) * B(m,r)

namespace detail {

inline void atanh_split(const Int& P, const Int& Q, unsigned long l, unsigned long r, Int& B,
                        Int& T) {
    if (r - l == 1) {
        B = 2 * l + 1;
        T = 1;
        return;
    }
    unsigned long m = l + (r - l) / 2;
    Int B1, T1, B2, T2;
    atanh_split(P, Q, l, m, B1, T1);
    atanh_split(P, Q, m, r, B2, T2);
    B = B1 * B2;
    T = T1 * B2 * pow_int(Q, r - m) + T2 * B1 * pow_int(P, m - l);
}

}  // namespace detail

// atanh(num/den) * 10^digits truncated toward zero; err <= 2 ulps.
// Requires 0 <= num/den <= 1/3.
inline Fx atanh_frac(const Int& num, const Int& den, unsigned digits) {
    if (num == 0) return {Int(0), Int(0)};
    if (3 * num > den) throw std::invalid_argument("atanh_frac: argument must be <= 1/3");
    // terms: x^(2n+1) below a quarter ulp; x <= 1/3 keeps the geometric
    // tail under (9/8) * x^(2n+1)
    double ln_ratio = (mpz_sizeinbase(den.get_mpz_t(), 2) - mpz_sizeinbase(num.get_mpz_t(), 2));
    if (ln_ratio < 1) ln_ratio = 1;
    double need = (digits + 2) * 3.3219281 / (2.0 * ln_ratio) + 2;
    unsigned long n = static_cast<unsigned long>(need) + 2;
    Int P = num * num, Q = den * den;
    Int B, T;
    detail::atanh_split(P, Q, 0, n, B, T);
    // atanh = num * T / (den * B * Q^(n-1))
    Int numer = num * T * pow10_int(digits);
    Int denom = den * B * pow_int(Q, n - 1);
    Int v;
    mpz_tdiv_q(v.get_mpz_t(), numer.get_mpz_t(), denom.get_mpz_t());
    return {v, Int(2)};
}

// cached ln 2 at the engine precision
inline Fx ln2(unsigned digits) {
    static std::map<unsigned, Fx> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(digits);
    if (it == cache.end()) {
        Fx a = atanh_frac(1, 3, digits);
        it = cache.emplace(digits, Fx{2 * a.v, 2 * a.err}).first;
    }
    return it->second;
}

// ln of a positive integer: n = m * 2^s with m in [1, 2), via
// ln m = 2 atanh((m-1)/(m+1)).  Integers wider than 96 bits are bracketed
// by their top 96 bits; the bracket width lands in err.
inline Fx ln_int(const Int& n, unsigned digits) {
    if (n < 1) throw std::invalid_argument("ln_int: n must be positive");
    if (n == 1) return {Int(0), Int(0)};
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    unsigned long s = bits - 1;
    Int H = n;
    unsigned long shift = 0;
    Int width_err = 0;
    if (bits > 96) {
        shift = bits - 96;
        H = n >> shift;
        // n in [H * 2^shift, (H+1) * 2^shift): ln uncertainty <= ln(1+1/H) <= 1/H
        Int w;
        mpz_cdiv_q(w.get_mpz_t(), pow10_int(digits).get_mpz_t(), H.get_mpz_t());
        width_err = w + 1;
    }
    unsigned long hs = mpz_sizeinbase(H.get_mpz_t(), 2) - 1;  // H in [2^hs, 2^(hs+1))
    Fx l2 = ln2(digits);
    Int p2 = Int(1) << hs;
    Fx a = atanh_frac(H - p2, H + p2, digits);
    Fx r{l2.v * (hs + shift) + 2 * a.v, l2.err * (hs + shift) + 2 * a.err + width_err};
    (void)s;
    return r;
}

inline Fx ln10(unsigned digits) {
    static std::map<unsigned, Fx> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(digits);
    if (it == cache.end()) it = cache.emplace(digits, ln_int(10, digits)).first;
    return it->second;
}

inline Fx ln_rat(const Rat& x, unsigned digits) {
    if (sgn(x) <= 0) throw std::invalid_argument("ln_rat: argument must be positive");
    return sub(ln_int(x.get_num(), digits), ln_int(x.get_den(), digits));
}

// ln of a positive fixed-point value v/10^digits (propagates input error)
inline Fx ln_fx(const Fx& x, unsigned digits) {
    if (x.v <= x.err) throw std::invalid_argument("ln_fx: argument interval must be positive");
    Fx r = sub(ln_int(x.v, digits), scale_int(ln10(digits), digits));
    // d(ln y) = dy / y, with y >= (v - err)/10^digits
    Int prop;
    mpz_cdiv_q(prop.get_mpz_t(), Int(x.err * pow10_int(digits)).get_mpz_t(),
               Int(x.v - x.err).get_mpz_t());
    r.err += prop + 1;
    return r;
}

// e^x for 0 <= x <= ~2.4 * ln 10, by 2^-5 argument reduction and the
// Taylor series; error tracked in ulps, loosely but soundly.
inline Fx exp_fx(const Fx& x, unsigned digits) {
    if (x.v < 0) throw std::invalid_argument("exp_fx: argument must be >= 0");
    Int scale = pow10_int(digits);
    if (x.v > 6 * scale) throw std::invalid_argument("exp_fx: argument too large");
    Int r = x.v >> 5;  // x/32, floor; remainder folded into err below
    Int acc = scale, term = scale;
    unsigned long k = 1;
    while (term != 0) {
        term = term * r / scale;  // truncation toward zero per step
        term /= k;
        acc += term;
        ++k;
        if (k > 500) break;
    }
    Int err = 3 * k + 4;  // per-term truncations plus series tail
    for (int i = 0; i < 5; ++i) {
        acc = acc * acc / scale;
        Int bound = acc / scale + 2;  // |value| upper bound after this squaring
        err = 2 * err * bound + 1;
    }
    // reduction remainder (< 32 ulp) and input error enter multiplicatively
    Int bound = acc / scale + 2;
    err += bound * (64 + 2 * x.err + 2);
    return {acc, err};
}

}  // namespace fx
}  // namespace em
