#pragma once

// Prime machinery at scale: a segmented sieve, rigorously error-bounded
// prime-reciprocal sums and Chebyshev theta, the reciprocal-threshold
// search, the resulting lower bound on m, and the Rosser-Schoenfeld
// analytic bounds.
//
// Determinism contract: reciprocal and log sums are computed per value
// segment of fixed size 2^22 with every term truncated toward zero, then
// combined in ascending segment order.  Results are identical for every
// thread count.

#include "em/fixed_decimal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

namespace em::primes {

inline constexpr uint64_t segment_span = uint64_t(1) << 22;

class PrimeTable {
public:
    // limit <= 2^34 by contract; the memory guard rejects tables whose
    // prime list would not fit the byte budget.
    static PrimeTable build(uint64_t limit, unsigned threads = 1,
                            uint64_t max_bytes = uint64_t(2) << 30) {
        if (limit < 2) throw std::invalid_argument("sieve: limit must be >= 2");
        if (limit > (uint64_t(1) << 34)) throw std::invalid_argument("sieve: limit above 2^34");
        double dl = double(limit);
        double est = limit < 100 ? 30.0 : 1.26 * dl / std::log(dl);
        if (est * 8.0 > double(max_bytes))
            throw std::invalid_argument("sieve: limit exceeds configured memory budget");

        PrimeTable t;
        t.limit_ = limit;
        uint64_t root = uint64_t(std::sqrt(double(limit))) + 2;
        while (root * root > limit + 1) --root;
        // base primes by simple sieve
        std::vector<bool> comp(root + 1, false);
        std::vector<uint64_t> base;
        for (uint64_t i = 2; i <= root; ++i) {
            if (comp[i]) continue;
            base.push_back(i);
            for (uint64_t j = i * i; j <= root; j += i) comp[j] = true;
        }
        size_t nseg = size_t((limit - 1) / segment_span) + 1;
        std::vector<std::vector<uint64_t>> found(nseg);
        em::detail::parallel_chunks(nseg, threads, [&](size_t s) {
            uint64_t lo = s * segment_span;
            uint64_t hi = std::min(limit + 1, lo + segment_span);
            // bitmap over odd values in [lo, hi)
            size_t nbits = size_t((hi - lo + 1) / 2);
            std::vector<uint64_t> bits((nbits + 63) / 64, 0);
            auto mark = [&](uint64_t v) {  // v odd, in range
                size_t idx = size_t((v - lo) >> 1);
                if ((lo & 1) == 0) idx = size_t((v - lo - 1) >> 1);
                bits[idx >> 6] |= uint64_t(1) << (idx & 63);
            };
            for (uint64_t p : base) {
                if (p == 2) continue;
                uint64_t start = p * p;
                if (start >= hi) break;
                if (start < lo) {
                    uint64_t k = (lo + p - 1) / p;
                    if ((k & 1) == 0) ++k;  // odd multiples only
                    start = k * p;
                }
                for (uint64_t v = start; v < hi; v += 2 * p) mark(v);
            }
            std::vector<uint64_t>& out = found[s];
            if (lo <= 2 && 2 <= hi - 1) out.push_back(2);
            uint64_t first_odd = lo | 1;
            if (first_odd < 3) first_odd = 3;
            for (uint64_t v = first_odd; v < hi; v += 2) {
                size_t idx = size_t((v - lo) >> 1);
                if ((lo & 1) == 0) idx = size_t((v - lo - 1) >> 1);
                if (!(bits[idx >> 6] >> (idx & 63) & 1)) out.push_back(v);
            }
        });
        size_t total = 0;
        for (auto& v : found) total += v.size();
        t.primes_.reserve(total);
        for (auto& v : found) t.primes_.insert(t.primes_.end(), v.begin(), v.end());
        return t;
    }

    uint64_t limit() const { return limit_; }
    size_t count() const { return primes_.size(); }
    uint64_t operator[](size_t i) const { return primes_[i]; }
    const std::vector<uint64_t>& primes() const { return primes_; }

    bool contains(uint64_t x) const {
        auto it = std::lower_bound(primes_.begin(), primes_.end(), x);
        return it != primes_.end() && *it == x;
    }
    // number of primes <= x
    size_t count_leq(uint64_t x) const {
        return size_t(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
    }

private:
    std::vector<uint64_t> primes_;
    uint64_t limit_ = 0;
};

// --- bulk certified logs ---------------------------------------------------
//
// ln p = s ln 2 + T[h] + ln(1+u) with h the top 17 bits of p and
// u < 2^-16; the table T[h] = ln(h/2^16) is built once by telescoping
// ln(h/(h-1)) = 2 atanh(1/(2h-1)).  Everything is truncated fixed point
// with exact integer ulp accounting.

namespace detail {

class LogTable {
public:
    explicit LogTable(unsigned digits) : digits_(digits) {
        Int scale = pow10_int(digits);
        fx::Fx l2 = fx::ln2(digits);
        l2v_ = l2.v;
        l2err_ = mpz_get_ui(l2.err.get_mpz_t());
        size_t n = size_t(1) << F;
        t_.resize(n);
        terr_.resize(n);
        t_[0] = 0;
        terr_[0] = 0;
        Int two_scale = 2 * scale;
        Int u, acc;
        for (size_t i = 1; i < n; ++i) {
            uint64_t h = (uint64_t(1) << F) + i;
            uint64_t m = 2 * h - 1;
            uint64_t m2 = m * m;
            // 2 atanh(1/m) = sum 2 / ((2j+1) m^(2j+1))
            mpz_tdiv_q_ui(u.get_mpz_t(), two_scale.get_mpz_t(), m);
            acc = u;
            unsigned terms = 1;
            unsigned long j = 1;
            while (u != 0) {
                mpz_tdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), m2);
                if (u == 0) break;
                Int term;
                mpz_tdiv_q_ui(term.get_mpz_t(), u.get_mpz_t(), 2 * j + 1);
                acc += term;
                ++terms;
                ++j;
            }
            t_[i] = t_[i - 1] + acc;
            terr_[i] = terr_[i - 1] + 2 * terms + 2;
        }
    }

    unsigned digits() const { return digits_; }

    struct Workspace {
        Int a, b, z, z2, t;
    };

    // certified ln p (p >= 2): out_v = ln(p) * 10^digits truncated,
    // |true - out_v| <= out_err ulps
    void ln_u64(uint64_t p, Workspace& ws, Int& out_v, uint64_t& out_err) const {
        unsigned s = 63 - __builtin_clzll(p);
        if (s <= F) {
            size_t idx = (size_t(p) << (F - s)) - (size_t(1) << F);
            out_v = l2v_ * s + t_[idx];
            out_err = uint64_t(l2err_) * s + terr_[idx];
            return;
        }
        uint64_t h = p >> (s - F);
        size_t idx = size_t(h) - (size_t(1) << F);
        uint64_t num = (p << F) - (h << s);
        uint64_t den = (p << F) + (h << s);
        // z = num/den < 2^-17;  ln(1+u) = 2 atanh(z)
        out_v = l2v_ * s + t_[idx];
        out_err = uint64_t(l2err_) * s + terr_[idx];
        if (num == 0) return;
        const Int& scale = pow10_int_cached();
        ws.a = num;
        ws.a *= scale;
        mpz_tdiv_q_ui(ws.z.get_mpz_t(), ws.a.get_mpz_t(), den);
        // z2 = z^2 / scale
        ws.z2 = ws.z * ws.z;
        mpz_tdiv_q(ws.z2.get_mpz_t(), ws.z2.get_mpz_t(), scale.get_mpz_t());
        ws.t = ws.z;
        ws.b = ws.z;  // series accumulator (atanh)
        unsigned terms = 1;
        unsigned long j = 1;
        while (ws.t != 0) {
            ws.t *= ws.z2;
            mpz_tdiv_q(ws.t.get_mpz_t(), ws.t.get_mpz_t(), scale.get_mpz_t());
            if (ws.t == 0) break;
            Int term;
            mpz_tdiv_q_ui(term.get_mpz_t(), ws.t.get_mpz_t(), 2 * j + 1);
            ws.b += term;
            ++terms;
            ++j;
        }
        out_v += 2 * ws.b;
        out_err += 2 * (2 * terms + 2) + 1;
    }

    static const LogTable& instance(unsigned digits) {
        static std::map<unsigned, std::unique_ptr<LogTable>> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(digits);
        if (it == cache.end())
            it = cache.emplace(digits, std::make_unique<LogTable>(digits)).first;
        return *it->second;
    }

private:
    const Int& pow10_int_cached() const {
        static std::map<unsigned, Int> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(digits_);
        if (it == cache.end()) it = cache.emplace(digits_, pow10_int(digits_)).first;
        return it->second;
    }

    static constexpr unsigned F = 16;
    unsigned digits_;
    Int l2v_;
    uint64_t l2err_ = 0;
    std::vector<Int> t_;
    std::vector<uint32_t> terr_;
};

inline constexpr unsigned theta_guard_digits = 12;

}  // namespace detail

// --- Chebyshev theta -------------------------------------------------------

inline BoundedReal theta(uint64_t x, const PrimeTable& table, unsigned digits = 30,
                         unsigned threads = 1) {
    if (x > table.limit()) throw std::invalid_argument("theta: x above table limit");
    unsigned dg = digits + detail::theta_guard_digits;
    const auto& lt = detail::LogTable::instance(dg);
    size_t n = table.count_leq(x);
    size_t nseg = x / segment_span + 1;
    std::vector<Int> seg_v(nseg);
    std::vector<uint64_t> seg_e(nseg, 0);
    const auto& ps = table.primes();
    em::detail::parallel_chunks(nseg, threads, [&](size_t s) {
        uint64_t lo = s * segment_span;
        uint64_t hi = lo + segment_span;
        size_t i = size_t(std::lower_bound(ps.begin(), ps.begin() + n, lo) - ps.begin());
        detail::LogTable::Workspace ws;
        Int v = 0, pv;
        uint64_t e = 0, pe;
        for (; i < n && ps[i] < hi; ++i) {
            lt.ln_u64(ps[i], ws, pv, pe);
            v += pv;
            e += pe;
        }
        seg_v[s] = v;
        seg_e[s] = e;
    });
    Int total = 0;
    Int err_ulps = 0;
    for (size_t s = 0; s < nseg; ++s) {
        total += seg_v[s];
        err_ulps += seg_e[s];
    }
    fx::Fx f{total, err_ulps};
    return fx::to_bounded(f, dg, digits);
}

// --- certified reciprocal sums --------------------------------------------

struct RecipThreshold {
    size_t count = 0;                  // largest k with sum_{i<=k} 1/p_i < alpha
    std::optional<uint64_t> p_max;     // p_count (absent when count = 0)
    BoundedReal sum;                   // certified partial sum at count
    // Any set of distinct primes whose reciprocal sum reaches alpha has at
    // least count+1 elements, each dominating the corresponding smallest
    // prime.  These carry that forced configuration.
    size_t forced_factor_count = 0;    // count + 1, certified sum >= alpha there
    uint64_t p_forced = 0;             // the (count+1)-th prime
};

// Largest prefix of the primes with reciprocal sum certifiably below alpha.
// Terms are floor(10^D / p); the true prefix sum lies in
// [mid, mid + count ulp).  Throws precision_error if the interval straddles
// alpha and invalid_argument if the table ends before the threshold.
inline RecipThreshold recip_threshold(const Rat& alpha, const PrimeTable& table,
                                      unsigned digits = 30, unsigned threads = 1) {
    if (alpha > 4) throw std::invalid_argument("recip_threshold: alpha must be <= 4");
    if (digits < 1 || digits > 36)
        throw std::invalid_argument("recip_threshold: digits must be in [1, 36]");
    if (sgn(alpha) <= 0) throw std::invalid_argument("recip_threshold: alpha must be positive");

    using u128 = unsigned __int128;
    Int scale_z = pow10_int(digits);
    u128 scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;

    const auto& ps = table.primes();
    size_t n = ps.size();
    size_t nseg = table.limit() / segment_span + 1;
    std::vector<u128> seg_sum(nseg, 0);
    std::vector<uint64_t> seg_cnt(nseg, 0);
    em::detail::parallel_chunks(nseg, threads, [&](size_t s) {
        uint64_t lo = s * segment_span;
        uint64_t hi = lo + segment_span;
        size_t i = size_t(std::lower_bound(ps.begin(), ps.end(), lo) - ps.begin());
        u128 acc = 0;
        uint64_t c = 0;
        for (; i < n && ps[i] < hi; ++i) {
            acc += scale / ps[i];
            ++c;
        }
        seg_sum[s] = acc;
        seg_cnt[s] = c;
    });

    auto to_int = [](u128 v) {
        Int r = uint64_t(v >> 64);
        r <<= 64;
        r += uint64_t(v);
        return r;
    };
    Int alpha_scaled_num = alpha.get_num() * scale_z;  // compare against alpha*10^D exactly
    const Int& aden = alpha.get_den();

    // locate the segment where the running midpoint first reaches alpha
    Int cum = 0;
    size_t cum_cnt = 0;
    size_t seg = 0;
    bool crossed = false;
    for (; seg < nseg; ++seg) {
        Int next = cum + to_int(seg_sum[seg]);
        if (Int(next * aden) >= alpha_scaled_num) {
            crossed = true;
            break;
        }
        cum = next;
        cum_cnt += seg_cnt[seg];
    }
    if (!crossed) throw std::invalid_argument("recip_threshold: table limit too small for alpha");

    // walk the crossing segment prime by prime
    uint64_t lo = seg * segment_span;
    size_t i = size_t(std::lower_bound(ps.begin(), ps.end(), lo) - ps.begin());
    while (i < n) {
        Int next = cum + to_int(scale / ps[i]);
        if (Int(next * aden) >= alpha_scaled_num) break;
        cum = next;
        ++cum_cnt;
        ++i;
    }
    // cum = midpoint at count = cum_cnt; the next prefix has mid >= alpha,
    // hence true sum >= alpha.  Certify the answer: the true sum at cum_cnt
    // is strictly below mid + count ulp, so <= alpha suffices.
    if (Int((cum + cum_cnt) * aden) > alpha_scaled_num)
        throw precision_error("recip_threshold: interval straddles alpha; raise digits");
    RecipThreshold out;
    out.count = cum_cnt;
    if (cum_cnt > 0) out.p_max = ps[cum_cnt - 1];
    out.sum.mid = cum;
    out.sum.digits = digits;
    out.sum.err = Rat(Int(cum_cnt)) / Rat(scale_z);
    // the break certified midpoint(count+1) >= alpha, hence true sum >= alpha
    out.forced_factor_count = cum_cnt + 1;
    out.p_forced = ps[cum_cnt];
    return out;
}

// --- Rosser-Schoenfeld analytic bounds -------------------------------------

struct AnalyticBounds {
    BoundedReal recip_upper;  // log log x + 0.2615 + 1/log^2 x
    std::optional<std::pair<BoundedReal, BoundedReal>> theta_interval;  // x(1 -+ 1/(40 log x))
};

inline AnalyticBounds analytic_bounds(const Rat& x, unsigned digits = 30) {
    if (x <= 1) throw std::invalid_argument("analytic_bounds: x must be > 1");
    unsigned dg = digits + 10;
    Int scale = pow10_int(dg);
    fx::Fx lx = fx::ln_rat(x, dg);
    fx::Fx llx = fx::ln_fx(lx, dg);
    // 1 / (ln x)^2, directed outward
    Int lx_lo = lx.v - lx.err, lx_hi = lx.v + lx.err;
    Int inv_hi, inv_lo;
    mpz_cdiv_q(inv_hi.get_mpz_t(), Int(scale * scale).get_mpz_t(), Int(lx_lo * lx_lo).get_mpz_t());
    mpz_fdiv_q(inv_lo.get_mpz_t(), Int(scale * scale).get_mpz_t(), Int(lx_hi * lx_hi).get_mpz_t());
    Int c2615 = Int(2615) * pow10_int(dg - 4);
    Int up_hi = llx.v + llx.err + c2615 + inv_hi;
    Int up_lo = llx.v - llx.err + c2615 + inv_lo;
    fx::Fx upper{up_lo, up_hi - up_lo};

    AnalyticBounds out;
    out.recip_upper = fx::to_bounded(upper, dg, digits);
    // value stored at the interval's lower end; widen err to cover both sides
    out.recip_upper.err += Rat(1) / Rat(pow10_int(digits));

    if (x >= 678407) {
        // x / (40 ln x), outward
        Int xs_num = x.get_num() * scale;
        Int t_hi, t_lo;
        mpz_cdiv_q(t_hi.get_mpz_t(), Int(xs_num * scale).get_mpz_t(),
                   Int(x.get_den() * 40 * lx_lo).get_mpz_t());
        mpz_fdiv_q(t_lo.get_mpz_t(), Int(xs_num * scale).get_mpz_t(),
                   Int(x.get_den() * 40 * lx_hi).get_mpz_t());
        Int xs;
        mpz_fdiv_q(xs.get_mpz_t(), xs_num.get_mpz_t(), x.get_den().get_mpz_t());
        BoundedReal lo_b, hi_b;
        lo_b.digits = hi_b.digits = digits;
        Int redig = pow10_int(dg - digits);
        mpz_fdiv_q(lo_b.mid.get_mpz_t(), Int(xs - t_hi).get_mpz_t(), redig.get_mpz_t());
        mpz_cdiv_q(hi_b.mid.get_mpz_t(), Int(xs + t_hi + 1).get_mpz_t(), redig.get_mpz_t());
        lo_b.err = 0;
        hi_b.err = 0;
        out.theta_interval = std::make_pair(lo_b, hi_b);
    }
    return out;
}

// --- the lower bound m > 3^(1/4) e^(theta(x)/4) ----------------------------

struct MagnitudeBound {
    long exponent10 = 0;       // floor(log10 of the bound)
    std::string leading;       // leading digits, "d.ddddd"
    bool analytic = false;     // true when derived from analytic_bounds
    Rat x_used;                // the cutoff x entering theta
    BoundedReal log10_bound;
};

namespace detail {

inline MagnitudeBound magnitude_from_log10(const fx::Fx& lg, unsigned dg) {
    MagnitudeBound out;
    Int scale = pow10_int(dg);
    Int ip;
    mpz_fdiv_q(ip.get_mpz_t(), lg.v.get_mpz_t(), scale.get_mpz_t());
    out.exponent10 = mpz_get_si(ip.get_mpz_t());
    Int frac = lg.v - ip * scale;
    if (frac < lg.err || scale - frac < lg.err)
        throw precision_error("magnitude bound: exponent not separated at this precision");
    fx::Fx f10 = fx::ln10(dg);
    // leading = 10^frac = e^(frac * ln 10)
    Int arg = frac * f10.v / scale;
    fx::Fx lead = fx::exp_fx(fx::Fx{arg, lg.err * 3 + 8}, dg);
    Rat lv = Rat(lead.v) / Rat(scale);
    out.leading = decimal_string(lv, 5);
    out.log10_bound = fx::to_bounded(lg, dg, std::min(dg, 30u));
    return out;
}

}  // namespace detail

inline MagnitudeBound moser_lower_bound(const Rat& alpha, const PrimeTable& table,
                                        unsigned digits = 30, unsigned threads = 1) {
    if (alpha > 4) throw std::invalid_argument("moser_lower_bound: alpha must be <= 4");
    if (digits < 1 || digits > 36)
        throw std::invalid_argument("moser_lower_bound: digits must be in [1, 36]");
    unsigned dg = digits + 10;
    Int scale = pow10_int(dg);
    try {
        RecipThreshold rt = recip_threshold(alpha, table, digits, threads);
        // any prime set with reciprocal sum >= alpha contains at least
        // forced_factor_count primes, elementwise dominating the smallest
        // ones, so the product is at least exp(theta(p_forced))
        uint64_t x = rt.p_forced;
        if (x > table.limit()) throw std::invalid_argument("moser_lower_bound: table too small");
        BoundedReal th = theta(x, table, dg, threads);
        // log10 bound = (theta + ln 3) / (4 ln 10)
        fx::Fx th_fx{th.mid, Int(1)};
        Rat e = th.err * Rat(pow10_int(dg));
        th_fx.err += Int(e.get_num() / e.get_den()) + 1;
        fx::Fx l3 = fx::ln_int(3, dg);
        fx::Fx l10 = fx::ln10(dg);
        Int num = (th_fx.v + l3.v) * scale;
        Int den = 4 * l10.v;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        fx::Fx lgf{q, th_fx.err + l3.err + 16};
        MagnitudeBound out = detail::magnitude_from_log10(lgf, dg);
        out.analytic = false;
        out.x_used = Rat(Int(x));
        return out;
    } catch (const std::invalid_argument&) {
        // beyond the sieve: largest x with the RS upper bound below alpha,
        // then theta(x) > x (1 - 1/(40 ln x))
        Int lo = 678407, hi = pow10_int(30);
        auto below = [&](const Int& v) {
            AnalyticBounds ab = analytic_bounds(Rat(v), digits);
            return ab.recip_upper.upper() < alpha;
        };
        if (!below(lo)) throw std::invalid_argument("moser_lower_bound: alpha too small for analytic range");
        while (hi - lo > 1) {
            Int mid = (lo + hi) / 2;
            if (below(mid))
                lo = mid;
            else
                hi = mid;
        }
        fx::Fx lx = fx::ln_int(lo, dg);
        // theta lower bound: x - x/(40 ln x)
        Int xs = lo * scale;
        Int t;
        mpz_cdiv_q(t.get_mpz_t(), Int(xs * scale).get_mpz_t(), Int(40 * (lx.v - lx.err)).get_mpz_t());
        Int th_lo = xs - t;
        fx::Fx l3 = fx::ln_int(3, dg);
        fx::Fx l10 = fx::ln10(dg);
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), Int((th_lo + l3.v) * scale).get_mpz_t(),
                   Int(4 * l10.v).get_mpz_t());
        fx::Fx lgf{q, Int(64)};
        MagnitudeBound out = detail::magnitude_from_log10(lgf, dg);
        out.analytic = true;
        out.x_used = Rat(lo);
        return out;
    }
}

}  // namespace em::primes
