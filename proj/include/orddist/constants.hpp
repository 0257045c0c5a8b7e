#pragma once

#include "orddist/interval.hpp"

namespace orddist {

namespace detail {

// B_2, B_4, ..., B_30 as exact rationals.
struct BernoulliEntry {
    i64 num, den;
};
inline constexpr BernoulliEntry kBernoulli[] = {
    {1, 6},           {-1, 30},          {1, 42},       {-1, 30},
    {5, 66},          {-691, 2730},      {7, 6},        {-3617, 510},
    {43867, 798},     {-174611, 330},    {854513, 138}, {-236364091, 2730},
    {8553103, 6},     {-23749461029, 870},
    {8615841276005LL, 14322},
};
inline constexpr int kBernoulliCount = 15;

inline Real real_factorial(u32 n) {
    Real r = 1;
    for (u32 i = 2; i <= n; ++i) r *= i;
    return r;
}

// Pochhammer (s)_m = s (s+1) ... (s+m-1).
inline Real pochhammer(u32 s, u32 m) {
    Real r = 1;
    for (u32 i = 0; i < m; ++i) r *= Real(s + i);
    return r;
}

inline u32 nth_prime(u32 n) {  // 1-based: nth_prime(1) = 2
    static std::vector<u32> primes;
    static u32 limit = 0;
    static std::mutex mu;
    if (n == 0) throw ArgumentError("nth_prime: n is 1-based");
    std::lock_guard<std::mutex> lock(mu);
    while (primes.size() < n) {
        limit = limit ? 2 * limit : (1 << 16);
        if (limit > (1u << 28)) throw CapacityError("nth_prime: n out of range");
        primes = small_primes(limit);
    }
    return primes[n - 1];
}

}  // namespace detail

// Hurwitz zeta(s, p/q) for integer s >= 2 and 0 < p/q <= 1, by Euler-
// Maclaurin with a certified remainder:
//
//   zeta(s,a) = sum_{n<N} (n+a)^-s + (N+a)^{1-s}/(s-1) + (N+a)^-s / 2
//             + sum_{j=1..m} B_2j/(2j)! (s)_{2j-1} (N+a)^{-s-2j+1} + R_m,
//
// where, with f(x) = (x+a)^-s, the remainder R_m is the integral of
// B_2m({x})/(2m)! * f^(2m)(x) over [N, inf). Since |B_2m({x})| <= |B_2m|
// and f^(2m) has constant sign, |R_m| is at most the magnitude of the j=m
// term itself, which is what the radius charges.
inline ErrorInterval hurwitz_zeta(u32 s, i64 p, i64 q, const Real& target) {
    if (s < 2) throw ArgumentError("hurwitz_zeta: s must be >= 2");
    if (p <= 0 || q <= 0 || p > q) throw ArgumentError("hurwitz_zeta: need 0 < p/q <= 1");
    if (target < Real("1e-45"))
        throw PrecisionError("hurwitz_zeta: target below working precision");

    for (u32 N = 24; N <= (1u << 18); N *= 2) {
        // find m with remainder bound <= target/4
        int m_used = -1;
        Real bound;
        for (int m = 2; m <= detail::kBernoulliCount; ++m) {
            const auto& B = detail::kBernoulli[m - 1];
            const Real Na = Real(N) + Real(p) / Real(q);
            bound = abs(Real(B.num) / Real(B.den)) / detail::real_factorial(2 * m) *
                    detail::pochhammer(s, 2 * m - 1) * pow(Na, -Real(int(s)) - (2 * m - 1));
            if (bound <= target / 4) {
                m_used = m;
                break;
            }
        }
        if (m_used < 0) continue;

        const Real a = Real(p) / Real(q);
        ErrorInterval sum;
        for (u32 n = 0; n < N; ++n) {
            const Real term = pow(Real(q) / Real(i64(n) * q + p), int(s));
            sum.re += term;
            sum.rre += transcendental_slop(term);
        }
        sum.rre += arith_slop(sum.re) * N;

        const Real Na = Real(N) + a;
        ErrorInterval tail;
        tail.re = pow(Na, 1 - int(s)) / (s - 1) + pow(Na, -int(s)) / 2;
        tail.rre = transcendental_slop(tail.re);
        for (int j = 1; j <= m_used; ++j) {
            const auto& B = detail::kBernoulli[j - 1];
            const Real t = Real(B.num) / Real(B.den) / detail::real_factorial(2 * j) *
                           detail::pochhammer(s, 2 * j - 1) * pow(Na, -Real(int(s)) - (2 * j - 1));
            tail.re += t;
            tail.rre += transcendental_slop(t);
        }
        tail.rre += bound;  // certified Euler-Maclaurin remainder

        ErrorInterval out = sum + tail;
        if (out.rre <= target) return out;
    }
    throw PrecisionError("hurwitz_zeta: precision not attained");
}

inline ErrorInterval riemann_zeta(u32 s, const Real& target) { return hurwitz_zeta(s, 1, 1, target); }

struct LValue {
    u32 s;
    u64 chi_modulus;
    u64 chi_index;
    ErrorInterval value;
};

// L(s, chi) = sum chi(m) m^-s for integer s >= 2, via the Hurwitz splitting
// L(s, chi) = d^-s * sum_{r mod d} chi(r) zeta(s, r/d).
inline LValue l_value(u32 s, const DirichletCharacter& chi, const Real& target) {
    if (s < 2) throw ArgumentError("l_value: s must be >= 2");
    if (!(target > 0)) throw ArgumentError("l_value: target must be positive");
    const u64 d = chi.modulus();
    if (d == 1) return {s, 1, 0, riemann_zeta(s, target)};

    const u64 phi_d = euler_phi(d);
    // each zeta term is scaled by d^-s, so give each a pre-scale budget
    const Real zeta_target = target * pow(Real(i64(d)), int(s)) / Real(i64(2 * phi_d));
    ErrorInterval acc;
    for (u64 r = 1; r <= d; ++r) {
        const Rot c = chi.eval(static_cast<i64>(r));
        if (c.zero) continue;
        acc = acc + hurwitz_zeta(s, static_cast<i64>(r), static_cast<i64>(d), zeta_target)
                        .scale_rot(c);
    }
    ErrorInterval scale;
    scale.re = pow(Real(i64(d)), -int(s));
    scale.rre = transcendental_slop(scale.re);
    LValue out{s, d, chi.index(), acc * scale};
    if (out.value.radius_upper() > target)
        throw PrecisionError("l_value: precision not attained");
    return out;
}

// Finite product over the first n primes:
//   S(n) = prod_{k<=n} (1 + chi(p_k)/(p_k(p_k^2-p_k-1)))
//                      (1 - chi(p_k)/p_k^3)(1 - chi(p_k)/p_k^4),
// exact up to rounding radii.
inline ErrorInterval s_n_product(const DirichletCharacter& chi, u32 n) {
    if (n == 0) throw ArgumentError("s_n_product: n must be >= 1");
    if (n > 200000) throw CapacityError("s_n_product: n too large");
    ErrorInterval prod = ErrorInterval::exact(1);
    const ErrorInterval one = ErrorInterval::exact(1);
    for (u32 k = 1; k <= n; ++k) {
        const Real p = Real(i64(detail::nth_prime(k)));
        const Rot c = chi.eval(detail::nth_prime(k));
        if (c.zero) continue;
        const ErrorInterval f1 =
            one + ErrorInterval::ratio_real(1, p * (p * p - p - 1)).scale_rot(c);
        const ErrorInterval f2 = one - ErrorInterval::ratio_real(1, p * p * p).scale_rot(c);
        const ErrorInterval f3 = one - ErrorInterval::ratio_real(1, p * p * p * p).scale_rot(c);
        prod = prod * f1 * f2 * f3;
    }
    return prod;
}

namespace detail {

// Upper bound for p_{n+1}^{-3.85} = p_{n+1}^{-77/20}.
inline Real tail_window_eps(u32 n) {
    const Real p = Real(i64(nth_prime(n + 1)));
    Real e = exp(Real(-77) / 20 * log(p));
    return e * (1 + Real("1e-40"));
}

}  // namespace detail

// The universal constant A = prod_p (1 - 1/(p(p-1))) = 0.3739558136...
// For the trivial character mod 1 every Euler factor of B_chi is 1, so the
// product identity B = A zeta(2) zeta(3) zeta(4) S(n) R_1 inverts to
//   A = 1 / (zeta(2) zeta(3) zeta(4) S(n) R_1),
// with |R_1| in [1/(1+eps), 1+eps], eps = p_{n+1}^{-3.85}. n is raised
// until the certified radius (dominated by that window) meets the target.
inline ErrorInterval constant_A(const Real& target_abs_error, u32* n_used = nullptr) {
    if (target_abs_error < Real("1e-11"))
        throw ArgumentError("constant_A: target_abs_error must be >= 1e-11");
    const DirichletCharacter one = CharacterGroup(1).character(0);
    const Real inner = Real("1e-16");
    const ErrorInterval z = riemann_zeta(2, inner) * riemann_zeta(3, inner) *
                            riemann_zeta(4, inner);
    for (u32 n = 31;; n = n + n / 2) {
        if (n > 4096) throw PrecisionError("constant_A: precision not attained");
        const ErrorInterval denom = z * s_n_product(one, n);
        const Real eps = detail::tail_window_eps(n);
        const Real lo_d = denom.real_lo(), hi_d = denom.real_hi();
        if (!(lo_d > 0)) throw PrecisionError("constant_A: degenerate denominator");
        const Real a_hi = ((1 + eps) / lo_d) * (1 + 4 * real_eps());
        const Real a_lo = (1 / (hi_d * (1 + eps))) * (1 - 4 * real_eps());
        ErrorInterval out = ErrorInterval::approx((a_hi + a_lo) / 2,
                                                  (a_hi - a_lo) / 2 + arith_slop(a_hi));
        if (out.rre <= target_abs_error) {
            if (n_used) *n_used = n;
            return out;
        }
    }
}

// B_chi = A L(2,chi) L(3,chi) L(4,chi) S(n) R_1 with the tail window R_1
// applied as a certified multiplicative enclosure. Requires n >= 31 (the
// window bound is only stated from p_n >= 127 on).
inline ErrorInterval b_chi(const DirichletCharacter& chi, u32 n) {
    if (n < 31) throw ArgumentError("b_chi: requires n >= 31 (hence p_n >= 127)");
    const ErrorInterval A = constant_A(Real("1e-11"));
    const Real lt = Real("1e-15");
    const ErrorInterval base = A * l_value(2, chi, lt).value * l_value(3, chi, lt).value *
                               l_value(4, chi, lt).value * s_n_product(chi, n);
    const Real eps = detail::tail_window_eps(n);
    const Real lo = (1 / (1 + eps)) * (1 - 4 * real_eps());
    const Real hi = 1 + eps;
    return base.mul_window(lo, hi);
}

// A_chi = B_chi / prod_{p | d} (1 - 1/(p(p-1))).
inline ErrorInterval a_chi(const DirichletCharacter& chi, u32 n) {
    ErrorInterval b = b_chi(chi, n);
    ErrorInterval corr = ErrorInterval::exact(1);
    for (const auto& t : factorize(chi.modulus()).terms) {
        const i64 p = static_cast<i64>(t.p);
        corr = corr * (ErrorInterval::exact(1) - ErrorInterval::ratio(1, p * (p - 1)));
    }
    return b.div_real(corr);
}

// Direct truncation of the A_chi Euler product over p <= P, used as an
// independent oracle. Per-factor deviation |f_p - 1| <= 2p/((p^2-1)(p-1))
// <= 4/p^2 for p >= 3 (cross-multiplying, p^3 - 2p^2 - 2p + 2 >= 0 there),
// so the discarded tail multiplies the product by e^t with
// t <= sum_{m>P} 4.2/m^2 <= 4.2/P (the 0.2 covers |ln(1+z)| <= |z| + z^2).
inline ErrorInterval naive_a_chi(const DirichletCharacter& chi, u32 P) {
    if (P < 3) throw ArgumentError("naive_a_chi: P must be >= 3");
    if (P > (1u << 27)) throw CapacityError("naive_a_chi: P too large");
    ErrorInterval prod = ErrorInterval::exact(1);
    const ErrorInterval one = ErrorInterval::exact(1);
    for (u32 p : small_primes(P)) {
        const Rot c = chi.eval(p);
        if (c.zero) continue;
        if (c.den == 1) continue;  // chi(p) = 1: factor is exactly 1
        const Real ps = Real(i64(p));
        if (c.den == 2) {
            // chi(p) = -1: 1 - 2p/((p^2+1)(p-1))
            prod = prod * (one - ErrorInterval::ratio_real(2 * ps, (ps * ps + 1) * (ps - 1)));
        } else {
            // complex chi(p): (chi-1) p / ((p^2 - chi)(p - 1))
            const ErrorInterval cv = one.scale_rot(c);
            const ErrorInterval num = (cv - one) * ErrorInterval::ratio_real(ps, 1);
            const ErrorInterval den =
                (ErrorInterval::ratio_real(ps * ps, 1) - cv) * ErrorInterval::ratio_real(ps - 1, 1);
            prod = prod * (one + num / den);
        }
    }
    const Real t = Real("4.2") / P;
    const Real rel = t + t * t;  // e^t - 1 <= t + t^2 for t <= 1/2
    return prod.widened(prod.mag_upper() * rel);
}

}  // namespace orddist
