#pragma once

#include "orddist/constants.hpp"
#include "orddist/rational_base.hpp"

namespace orddist {

// Exact local density: the fraction of elements of F_p^* whose order is
// congruent to a (mod d), i.e. (1/(p-1)) sum_{k | p-1, k = a (d)} phi(k).
inline Rat local_density(u64 p, i64 a, u64 d, const PrimeFactorization* pm1 = nullptr) {
    if (p < 2) throw ArgumentError("local_density: p must be prime");
    if (d == 0) throw ArgumentError("local_density: d must be positive");
    PrimeFactorization local;
    if (!pm1) {
        local = factorize(p - 1);
        pm1 = &local;
    }
    const u64 am = static_cast<u64>(((a % static_cast<i64>(d)) + static_cast<i64>(d)) %
                                    static_cast<i64>(d));
    u64 s = 0;
    pm1->for_each_divisor_phi([&](u64 k, u64 ph) {
        if (k % d == am) s += ph;
    });
    return Rat(static_cast<i64>(s), static_cast<i64>(p - 1));
}

enum class DensityMethod { DegenerateSum, PrimeAverage, ClosedFormMod4 };

struct DensityEstimate {
    i64 a = 0;
    u64 d = 1;
    DensityMethod method = DensityMethod::DegenerateSum;
    double center = 0.0;
    double radius = 0.0;
    bool certified = false;  // prime-average has no proven rate; radius informational
    u64 trunc_t = 0, trunc_n = 0, bound_x = 0;
};

namespace detail {

// Sieve of mu, phi and smallest prime factor up to m.
struct MuPhiSieve {
    std::vector<int> mu;
    std::vector<u32> phi;
    std::vector<u32> spf;
    explicit MuPhiSieve(u32 m) : mu(m + 1, 0), phi(m + 1, 0), spf(m + 1, 0) {
        std::vector<u32> primes;
        mu[1] = 1;
        phi[1] = 1;
        for (u32 i = 2; i <= m; ++i) {
            if (!spf[i]) {
                spf[i] = i;
                mu[i] = -1;
                phi[i] = i - 1;
                primes.push_back(i);
            }
            for (u32 p : primes) {
                if (p > spf[i] || u64(p) * i > m) break;
                spf[p * i] = p;
                if (i % p == 0) {
                    mu[p * i] = 0;
                    phi[p * i] = phi[i] * p;
                } else {
                    mu[p * i] = -mu[i];
                    phi[p * i] = phi[i] * (p - 1);
                }
            }
        }
    }
};

// Upper bound for sum_{m > M} 1/(m phi(m)).
//
// For M >= 100 use phi(m) > m / C(m), C(x) = e^gamma lnln x + 3/lnln x
// (Rosser-Schoenfeld Thm. 15 with the constant relaxed from 2.50637 to 3,
// which absorbs the single exceptional modulus; checked numerically to 10^6
// in the tests). C(x)/x^2 decreases there, so
//   sum_{m>M} C(m)/m^2 <= int_M^inf C(x)/x^2 dx
//                      <= (e^g (lnln M + 1/ln M) + 3/lnln M) / M.
// Below 100 fall back on phi(m) >= sqrt(m/2):
//   sum_{m>M} sqrt(2) m^{-3/2} <= 2 sqrt(2) / sqrt(M).
inline double reciprocal_totient_tail(double M) {
    constexpr double e_gamma = 1.7810724179902;  // rounded up
    if (M < 100) return 2.0 * std::sqrt(2.0) / std::sqrt(M) * 1.0000001;
    const double ll = std::log(std::log(M));
    return (e_gamma * (ll + 1.0 / std::log(M)) + 3.0 / ll) / M * 1.0000001;
}

// Upper bound for sum_{m >= 1} 1/(m phi(m)) (~2.20386), partial sum plus tail.
inline double reciprocal_totient_sum_upper() {
    static const double value = [] {
        const u32 M = 1 << 16;
        MuPhiSieve sv(M);
        double s = 0.0;
        for (u32 m = M; m >= 1; --m) s += 1.0 / (double(m) * sv.phi[m]);
        return s * 1.0000001 + reciprocal_totient_tail(M);
    }();
    return value;
}

// Precomputed state for the degenerate-density double sum at fixed (a, d, N).
struct DegenerateSumContext {
    i64 a;
    u64 d;
    u32 T, N;
    std::shared_ptr<MuPhiSieve> sieve;     // up to max(T, N)
    std::vector<double> g_table;           // G(f) = sum_{n <= N, f | n} c_n
    std::vector<u32> d_primes;

    DegenerateSumContext(i64 a_, u64 d_, u32 T_, u32 N_) : a(a_), d(d_), T(T_), N(N_) {
        if (d == 0) throw ArgumentError("average_density_sum: d must be positive");
        if (T == 0 || N == 0) throw ArgumentError("average_density_sum: T, N must be >= 1");
        if (u64(T) > (u64(1) << 26) || u64(N) > (u64(1) << 26))
            throw CapacityError("average_density_sum: truncation too large");
        sieve = std::make_shared<MuPhiSieve>(std::max(T, N));
        for (const auto& t : factorize(d).terms) d_primes.push_back(static_cast<u32>(t.p));

        const u64 phi_d = euler_phi(d);
        const i64 am = ((a % i64(d)) + i64(d)) % i64(d);
        // c_n = mu(n) / (n phi([d,n])), with phi([d,n]) = phi(d)phi(n)/phi(gcd(d,n))
        std::vector<double> c(N + 1, 0.0);
        for (u32 n = 1; n <= N; ++n) {
            if (sieve->mu[n] == 0) continue;
            const u64 g = std::gcd<u64>(n, d);
            if (am % i64(g) != 0) continue;
            const double phim = double(phi_d) * sieve->phi[n] / double(euler_phi(g));
            c[n] = sieve->mu[n] / (phim * n);
        }
        g_table.assign(N + 1, 0.0);
        for (u32 f = 1; f <= N; ++f) {
            double s = 0.0;
            for (u32 n = f; n <= N; n += f) s += c[n];
            g_table[f] = s;
        }
    }

    // Inner sum over squarefree n for one t, via the divisor expansion of
    // prod_{p | gcd([d,n], t)} (1 - 1/p) = sum_{e | rad(t), e | nd} mu(e)/e.
    double t_term(u32 t) const {
        const i64 am = ((a % i64(d)) + i64(d)) % i64(d);
        if (std::gcd<u64>(((1 + u64(t % d) * u64(am)) % d), d) != 1) return 0.0;
        u32 qs[8];
        int nq = 0;
        u32 v = t;
        while (v > 1) {
            const u32 q = sieve->spf[v];
            qs[nq++] = q;
            while (v % q == 0) v /= q;
        }
        double inner = 0.0;
        for (u32 mask = 0; mask < (1u << nq); ++mask) {
            u64 e = 1, ep = 1;
            int sgn = 1;
            for (int i = 0; i < nq; ++i) {
                if (!(mask >> i & 1)) continue;
                e *= qs[i];
                sgn = -sgn;
                if (d % qs[i] != 0) ep *= qs[i];
            }
            if (ep <= N) inner += sgn * g_table[ep] / double(e);
        }
        return inner / (double(t) * sieve->phi[t]);
    }

    // Compensated partial sum over a t-range; associative across ranges.
    double partial_sum(u32 t_lo, u32 t_hi) const {
        double s = 0.0, comp = 0.0;
        for (u32 t = t_lo; t <= t_hi && t <= T; ++t) {
            const double y = t_term(t) - comp;
            const double u = s + y;
            comp = (u - s) - y;
            s = u;
        }
        return s;
    }
};

}  // namespace detail

inline constexpr u32 kDefaultDensityTruncation = 200000;

// Truncation of the degenerate double sum
//   delta(a,d) = sum_{t>=1, (1+ta,d)=1} sum_{n>=1 squarefree, (n,d)|a}
//                mu(n) / (phi([d,n]t) n t)
// over t <= T, n <= N, with a proven tail radius. Every discarded term is
// bounded via phi([d,n]t) >= phi(nt) >= phi(n)phi(t) by 1/(n phi(n) t phi(t)),
// so |tail| <= S * (Tail(T) + Tail(N)) with S = sum_m 1/(m phi(m)) and
// Tail as in reciprocal_totient_tail.
inline DensityEstimate average_density_sum(i64 a, u64 d, u32 T = kDefaultDensityTruncation,
                                           u32 N = kDefaultDensityTruncation) {
    detail::DegenerateSumContext ctx(a, d, T, N);
    const double center = ctx.partial_sum(1, T);
    const double tail = detail::reciprocal_totient_sum_upper() *
                        (detail::reciprocal_totient_tail(T) + detail::reciprocal_totient_tail(N));
    // float rounding pad: ~N log N + T 2^omega ops on values <= ~2
    const double pad = 1e-8;
    DensityEstimate e;
    e.a = a;
    e.d = d;
    e.method = DensityMethod::DegenerateSum;
    e.center = center;
    e.radius = tail + pad;
    e.certified = true;
    e.trunc_t = T;
    e.trunc_n = N;
    return e;
}

// ---- closed form for d = 4 ----------------------------------------------

namespace detail {

// prod over odd primes p | m of 2p/(p^3 - p^2 - p - 1), as an interval.
inline ErrorInterval mod4_prime_product(u64 m, bool psi_weighted) {
    ErrorInterval prod = ErrorInterval::exact(1);
    for (const auto& t : factorize(m).terms) {
        const Real p = Real(i64(t.p));
        // psi-weighted variant uses (1 - psi(p)) p instead of 2p
        const int w = psi_weighted ? (t.p % 4 == 1 ? 0 : 2) : 2;
        prod = prod * ErrorInterval::ratio_real(w * p, p * p * p - p * p - p - 1);
    }
    return prod;
}

}  // namespace detail

// Closed form for delta_g(a, 4), a odd, g an integer in the power-free set:
// 1/6 unless D(g) is divisible by 8 and has no prime divisor = 1 (mod 4);
// in the exceptional case 7/48 -+ sgn(g) A_psi/8 when D = +-8, else
// 1/6 -+ sgn(g) (A_psi/8) prod_{p | D/8} 2p/(p^3-p^2-p-1), the upper sign
// belonging to a = 1 (mod 4).
inline ErrorInterval delta_g_mod4_interval(const RationalBase& g, i64 a, u32 n = 64) {
    if (a % 2 == 0) throw ArgumentError("delta_g_mod4: a must be odd");
    if (!g.is_integer() || !g.in_G())
        throw HypothesisError("delta_g_mod4: g must be an integer in the power-free set");
    const i64 D = g.discriminant();
    const u64 absD = static_cast<u64>(D < 0 ? -D : D);

    bool exceptional = (absD % 8 == 0);
    if (exceptional) {
        for (const auto& t : factorize(absD).terms)
            if (t.p % 4 == 1) {
                exceptional = false;
                break;
            }
    }
    if (!exceptional) return ErrorInterval::ratio(1, 6);

    const int sign = ((((a % 4) + 4) % 4 == 1) ? -1 : +1) * g.sign();
    const ErrorInterval apsi = a_chi(CharacterGroup::psi(), n);
    const ErrorInterval corr = apsi * ErrorInterval::ratio(sign, 8);
    if (absD == 8) return ErrorInterval::ratio(7, 48) + corr;
    return ErrorInterval::ratio(1, 6) + corr * detail::mod4_prime_product(absD / 8, false);
}

inline DensityEstimate delta_g_mod4(const RationalBase& g, i64 a, u32 n = 64) {
    const ErrorInterval v = delta_g_mod4_interval(g, a, n);
    DensityEstimate e;
    e.a = a;
    e.d = 4;
    e.method = DensityMethod::ClosedFormMod4;
    e.center = v.center_double();
    e.radius = v.radius_double();
    e.certified = true;
    return e;
}

// The same density written around an externally supplied delta_g(1,2):
//   delta_g(a,4) = delta_g(1,2)/2 + eps1(D) sgn(g) A_psi (-1)^((a+1)/2) / 8
//                  * prod_{p | D/8} (1 - psi(p)) p / (p^3 - p^2 - p - 1),
// eps1(n) = 1 iff 8 | n. delta_g(1,2) is an input (census estimate or
// literature value); its closed form is outside this library's scope.
inline ErrorInterval delta_g_mod4_remark2_interval(const RationalBase& g, i64 a,
                                                   double delta_g_half, u32 n = 64) {
    if (a % 2 == 0) throw ArgumentError("delta_g_mod4_remark2: a must be odd");
    if (!g.is_integer() || !g.in_G())
        throw HypothesisError("delta_g_mod4_remark2: g must be an integer in the power-free set");
    const i64 D = g.discriminant();
    const u64 absD = static_cast<u64>(D < 0 ? -D : D);
    ErrorInterval out = ErrorInterval::approx(Real(delta_g_half) / 2, arith_slop(Real(1)));
    if (absD % 8 != 0) return out;
    const int sign = ((((a + 1) / 2) % 2 != 0) ? -1 : +1) * g.sign();
    const ErrorInterval apsi = a_chi(CharacterGroup::psi(), n);
    return out + apsi * ErrorInterval::ratio(sign, 8) * detail::mod4_prime_product(absD / 8, true);
}

// ---- modulus reduction and closeness ------------------------------------

enum class PeelSemantics { GDensity, AverageDensity };

struct PeelOff {
    i64 a;
    u64 d_reduced;
    Rat multiplier;
};

// delta_g(a,d) = delta_g(a, k2(d)) k2(d)/d and delta(a,d) = delta(a, k(d)) k(d)/d.
inline PeelOff peel_off(i64 a, u64 d, PeelSemantics sem) {
    if (d == 0) throw ArgumentError("peel_off: d must be positive");
    const Kernels ks = kernels(d);
    const u64 dr = (sem == PeelSemantics::GDensity) ? ks.k2 : ks.k;
    return {a, dr, Rat(static_cast<i64>(dr), static_cast<i64>(d))};
}

struct ClosenessBound {
    double value;
    bool vacuous;  // bound >= 1 says nothing about a density difference
};

// |delta_g(a,d) - delta(a,d)| < 3 * 2^(omega(D1)+2) / (phi(D1) D1),
// D1 = |D(g) / gcd(D(g), d)|.
inline ClosenessBound closeness_bound(const RationalBase& g, u64 d) {
    if (!g.is_integer() || !g.in_G())
        throw HypothesisError("closeness_bound: g must be an integer in the power-free set");
    if (d == 0) throw ArgumentError("closeness_bound: d must be positive");
    const i64 D = g.discriminant();
    const u64 absD = static_cast<u64>(D < 0 ? -D : D);
    const u64 D1 = absD / std::gcd(absD, d);
    const PrimeFactorization f = factorize(D1);
    const double value =
        3.0 * std::pow(2.0, double(f.terms.size()) + 2.0) / (double(f.phi()) * double(D1));
    return {value, value >= 1.0};
}

// ---- order comparison prediction (d = 3 cells) ---------------------------

enum class OrderRelation { LessOrEqual, GreaterOrEqual, Equal };

struct OrderPrediction {
    OrderRelation relation;
    u64 h;  // g = +- g0^h with g0 positive, not an exact power
};

// Predicted comparison of delta_g(2,3;1,3) with delta_g(2,3;2,3): "<=" when
// g > 0 and h is even, ">=" otherwise, equality exactly when
// Q(sqrt(g0)) = Q(sqrt(3)) and nu_2(h) is 0 or 2.
inline OrderPrediction order_comparison_predicate(const RationalBase& g) {
    const u64 num = static_cast<u64>(g.num() < 0 ? -g.num() : g.num());
    const u64 den = static_cast<u64>(g.den());
    const PrimeFactorization fn = factorize(num), fd = factorize(den);
    u32 h = 0;
    for (const auto& t : fn.terms) h = h ? std::gcd(h, t.e) : t.e;
    for (const auto& t : fd.terms) h = h ? std::gcd(h, t.e) : t.e;
    if (h == 0) h = 1;  // only |g| = 1 lands here, which RationalBase excludes

    // squarefree part of g0's numerator times denominator
    i64 sq = 1;
    for (const auto& t : fn.terms)
        if ((t.e / h) % 2 == 1) sq *= static_cast<i64>(t.p);
    for (const auto& t : fd.terms)
        if ((t.e / h) % 2 == 1) sq *= static_cast<i64>(t.p);

    u32 nu2h = 0;
    for (u32 v = h; v % 2 == 0; v /= 2) ++nu2h;

    if (sq == 3 && (nu2h == 0 || nu2h == 2)) return {OrderRelation::Equal, h};
    if (g.sign() > 0 && h % 2 == 0) return {OrderRelation::LessOrEqual, h};
    return {OrderRelation::GreaterOrEqual, h};
}

}  // namespace orddist
