#pragma once

#include <cstdint>
#include <cmath>
#include <utility>
#include <vector>

#include "orddist/errors.hpp"

namespace orddist {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

// All primes <= limit, by plain sieve of Eratosthenes. Intended for base
// primes (limit up to ~2^32 would fit, typical use is sqrt of the range).
inline std::vector<u32> small_primes(u32 limit) {
    std::vector<u32> out;
    if (limit < 2) return out;
    std::vector<std::uint8_t> comp(static_cast<size_t>(limit) + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        out.push_back(static_cast<u32>(i));
        for (u64 j = i * i; j <= limit; j += i) comp[j] = 1;
    }
    return out;
}

// Primes in [lo, hi], ascending, generated in fixed-size segments so that
// ranges up to ~10^10 stay memory-bounded. Segment boundaries do not affect
// the output: concatenating (lo,m) and (m+1,hi) equals (lo,hi).
class PrimeRange {
public:
    PrimeRange(u64 lo, u64 hi, u64 segment_size = u64(1) << 22)
        : lo_(lo), hi_(hi), segment_(segment_size) {
        if (lo > hi) throw ArgumentError("PrimeRange: lo > hi");
        if (hi > (u64(1) << 63) - 1) throw ArgumentError("PrimeRange: hi too large");
        if (segment_ < 64) segment_ = 64;
    }

    u64 lo() const { return lo_; }
    u64 hi() const { return hi_; }

    template <class F>
    void for_each(F&& fn) const {
        if (hi_ < 2) return;
        u64 lo = lo_ < 2 ? 2 : lo_;
        const std::vector<u32> base = small_primes(static_cast<u32>(isqrt_u64(hi_)));
        std::vector<std::uint8_t> comp;
        for (u64 seg_lo = lo; seg_lo <= hi_;) {
            u64 seg_hi = seg_lo + segment_ - 1;
            if (seg_hi > hi_ || seg_hi < seg_lo) seg_hi = hi_;
            sieve_segment(base, seg_lo, seg_hi, comp);
            for (u64 i = 0; i < seg_hi - seg_lo + 1; ++i)
                if (!comp[i]) fn(seg_lo + i);
            if (seg_hi == hi_) break;
            seg_lo = seg_hi + 1;
        }
    }

    u64 count() const {
        u64 c = 0;
        for_each([&](u64) { ++c; });
        return c;
    }

    std::vector<u64> to_vector() const {
        std::vector<u64> v;
        for_each([&](u64 p) { v.push_back(p); });
        return v;
    }

    // Marks composite offsets for [seg_lo, seg_hi] into comp (resized here).
    static void sieve_segment(const std::vector<u32>& base, u64 seg_lo, u64 seg_hi,
                              std::vector<std::uint8_t>& comp) {
        const u64 n = seg_hi - seg_lo + 1;
        comp.assign(n, 0);
        if (seg_lo <= 1) {
            for (u64 v = seg_lo; v <= 1 && v <= seg_hi; ++v) comp[v - seg_lo] = 1;
        }
        for (u32 q : base) {
            const u64 q2 = u64(q) * q;
            if (q2 > seg_hi) break;
            u64 start = (seg_lo + q - 1) / q * q;
            if (start < q2) start = q2;
            for (u64 m = start; m <= seg_hi; m += q) comp[m - seg_lo] = 1;
        }
    }

private:
    u64 lo_, hi_, segment_;
};

inline PrimeRange primes_in_range(u64 lo, u64 hi) { return PrimeRange(lo, hi); }

// (prime, exponent) terms in increasing prime order; product reconstructs
// the original value. value = 1 has an empty term list.
struct PrimeFactorization {
    struct Term {
        u64 p;
        u32 e;
    };
    std::vector<Term> terms;
    u64 value = 1;

    u64 reconstruct() const {
        u64 v = 1;
        for (const Term& t : terms)
            for (u32 i = 0; i < t.e; ++i) v *= t.p;
        return v;
    }

    u64 phi() const {
        u64 r = 1;
        for (const Term& t : terms) {
            r *= t.p - 1;
            for (u32 i = 1; i < t.e; ++i) r *= t.p;
        }
        return r;
    }

    bool squarefree() const {
        for (const Term& t : terms)
            if (t.e > 1) return false;
        return true;
    }

    u64 radical() const {
        u64 r = 1;
        for (const Term& t : terms) r *= t.p;
        return r;
    }

    // Visits every divisor k of value as (k, phi(k)). Order is not sorted.
    template <class F>
    void for_each_divisor_phi(F&& fn) const {
        struct Frame {
            u64 k, ph;
        };
        std::vector<Frame> cur{{1, 1}};
        for (const Term& t : terms) {
            const size_t n = cur.size();
            u64 pk = 1, phk = 1;
            for (u32 j = 1; j <= t.e; ++j) {
                phk = (j == 1) ? t.p - 1 : phk * t.p;
                pk *= t.p;
                for (size_t i = 0; i < n; ++i) cur.push_back({cur[i].k * pk, cur[i].ph * phk});
            }
        }
        for (const Frame& f : cur) fn(f.k, f.ph);
    }
};

// Deterministic trial-division factorization with a 2,3,5-wheel. Exact for
// any m < 2^63; the intended workload is m = p-1 with p <= 2^40, where the
// wheel walks at most ~10^6 candidates.
inline PrimeFactorization factorize(u64 m) {
    if (m == 0) throw ArgumentError("factorize: m must be positive");
    PrimeFactorization f;
    f.value = m;
    auto strip = [&](u64 q) {
        if (m % q) return;
        u32 e = 0;
        while (m % q == 0) {
            m /= q;
            ++e;
        }
        f.terms.push_back({q, e});
    };
    strip(2);
    strip(3);
    strip(5);
    static constexpr u32 wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    u64 q = 7;
    u32 w = 0;
    while (q <= m / q) {
        strip(q);
        q += wheel[w];
        w = (w + 1) & 7;
    }
    if (m > 1) f.terms.push_back({m, 1});
    return f;
}

// Shared factorization engine: a smallest-prime-factor table below `spf_bound`
// plus trial division by sieved base primes above it. Immutable after
// construction, safe to share across threads.
class FactorEngine {
public:
    explicit FactorEngine(u64 max_value, u64 spf_bound = u64(1) << 24) {
        if (max_value < 2) max_value = 2;
        spf_bound_ = spf_bound < 4 ? 4 : spf_bound;
        if (spf_bound_ > max_value + 1) spf_bound_ = max_value + 1;
        spf_.assign(static_cast<size_t>(spf_bound_), 0);
        for (u64 i = 2; i < spf_bound_; ++i) {
            if (spf_[i]) continue;
            for (u64 j = i; j < spf_bound_; j += i)
                if (!spf_[j]) spf_[j] = static_cast<u32>(i);
        }
        base_ = small_primes(static_cast<u32>(isqrt_u64(max_value)));
    }

    u64 max_spf_value() const { return spf_bound_ - 1; }
    const std::vector<u32>& base_primes() const { return base_; }

    void factorize_into(u64 m, PrimeFactorization& out) const {
        out.terms.clear();
        out.value = m;
        if (m == 0) throw ArgumentError("FactorEngine: m must be positive");
        size_t bi = 0;
        while (m > 1 && m >= spf_bound_) {
            if (bi >= base_.size())
                throw ArgumentError("FactorEngine: value exceeds configured range");
            const u64 q = base_[bi++];
            if (q > m / q) {
                out.terms.push_back({m, 1});
                return;
            }
            if (m % q == 0) {
                u32 e = 0;
                while (m % q == 0) {
                    m /= q;
                    ++e;
                }
                out.terms.push_back({q, e});
            }
        }
        while (m > 1) {
            const u64 q = spf_[m];
            u32 e = 0;
            while (m % q == 0) {
                m /= q;
                ++e;
            }
            insert_sorted(out, q, e);
        }
    }

    PrimeFactorization factorize(u64 m) const {
        PrimeFactorization f;
        factorize_into(m, f);
        return f;
    }

private:
    // Trial division emits ascending primes; the SPF walk afterwards also
    // ascends, but its primes may interleave below the last trial prime.
    static void insert_sorted(PrimeFactorization& f, u64 q, u32 e) {
        auto it = f.terms.end();
        while (it != f.terms.begin() && (it - 1)->p > q) --it;
        f.terms.insert(it, {q, e});
    }

    u64 spf_bound_;
    std::vector<u32> spf_;
    std::vector<u32> base_;
};

}  // namespace orddist
