#pragma once

#include <gmpxx.h>

#include <future>

#include "orddist/densities.hpp"

namespace orddist {

// Exact prime-average of the local densities:
//   (1/pi(x)) sum_{p <= x} delta(p; a, d)  for every a mod d at once.
// Per prime the contribution is the integer vector S_a = sum_{k | p-1,
// k = a (d)} phi(k) over the denominator p-1; the sum of fractions is
// accumulated exactly (unreduced big-integer numerators over a common
// product denominator, combined divide-and-conquer), then rendered to
// doubles once at the end.
struct PrimeAverageResult {
    u64 d = 1;
    u64 x = 0;
    u64 pi = 0;
    std::vector<double> centers;  // size d
    bool unity_exact = false;     // sum_a numerators == pi * denominator, exactly
};

namespace detail {

struct FracNode {
    std::vector<mpz_class> num;
    mpz_class den;
};

inline FracNode merge_frac(FracNode l, FracNode r) {
    FracNode out;
    out.num.resize(l.num.size());
    for (size_t i = 0; i < l.num.size(); ++i) {
        out.num[i] = l.num[i] * r.den;
        mpz_addmul(out.num[i].get_mpz_t(), r.num[i].get_mpz_t(), l.den.get_mpz_t());
    }
    out.den = l.den * r.den;
    return out;
}

// leaves[i] holds (den = p_i - 1, S_0..S_{d-1}) flattened.
inline FracNode combine_range(const std::vector<u64>& dens, const std::vector<u64>& svals,
                              u64 d, size_t lo, size_t hi) {
    if (hi - lo == 1) {
        FracNode n;
        n.den = static_cast<unsigned long>(dens[lo]);
        n.num.resize(d);
        for (u64 a = 0; a < d; ++a) n.num[a] = static_cast<unsigned long>(svals[lo * d + a]);
        return n;
    }
    const size_t mid = lo + (hi - lo) / 2;
    return merge_frac(combine_range(dens, svals, d, lo, mid),
                      combine_range(dens, svals, d, mid, hi));
}

inline double mpz_ratio_to_double(const mpz_class& num, const mpz_class& den) {
    if (num == 0) return 0.0;
    signed long int en, ed;
    const double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
    const double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
    return std::ldexp(mn / md, static_cast<int>(en - ed));
}

}  // namespace detail

inline PrimeAverageResult prime_average_local_density(u64 d, u64 x) {
    if (d == 0) throw ArgumentError("prime_average_local_density: d must be positive");
    if (x < 3) throw ArgumentError("prime_average_local_density: x must be >= 3");
    if (x > (u64(1) << 40)) throw CapacityError("prime_average_local_density: x too large");

    const FactorEngine engine(x);
    std::vector<u64> dens;
    std::vector<u64> svals;
    PrimeFactorization f;
    primes_in_range(2, x).for_each([&](u64 p) {
        engine.factorize_into(p - 1, f);
        const size_t base = svals.size();
        svals.resize(base + d, 0);
        f.for_each_divisor_phi([&](u64 k, u64 ph) { svals[base + k % d] += ph; });
        dens.push_back(p - 1);
    });

    const size_t n = dens.size();
    detail::FracNode total;
    if (n >= 4096) {
        const size_t mid = n / 2;
        auto right = std::async(std::launch::async, [&] {
            return detail::combine_range(dens, svals, d, mid, n);
        });
        detail::FracNode left = detail::combine_range(dens, svals, d, 0, mid);
        total = detail::merge_frac(std::move(left), right.get());
    } else {
        total = detail::combine_range(dens, svals, d, 0, n);
    }

    PrimeAverageResult res;
    res.d = d;
    res.x = x;
    res.pi = n;
    res.centers.resize(d);
    for (u64 a = 0; a < d; ++a)
        res.centers[a] = detail::mpz_ratio_to_double(total.num[a], total.den) / double(n);
    mpz_class sum = 0;
    for (const auto& v : total.num) sum += v;
    res.unity_exact = (sum == total.den * static_cast<unsigned long>(n));
    return res;
}

// Single-cell wrapper matching the density-estimate interface. No proven
// convergence rate is attached to this estimator, so the radius is absent
// and the estimate is tagged uncertified.
inline DensityEstimate average_density_empirical(i64 a, u64 d, u64 x) {
    const PrimeAverageResult r = prime_average_local_density(d, x);
    const u64 am = static_cast<u64>(((a % i64(d)) + i64(d)) % i64(d));
    DensityEstimate e;
    e.a = a;
    e.d = d;
    e.method = DensityMethod::PrimeAverage;
    e.center = r.centers[am];
    e.radius = 0.0;
    e.certified = false;
    e.bound_x = x;
    return e;
}

}  // namespace orddist
