#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>

#include "orddist/primes.hpp"

namespace orddist {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Inverse of a mod m for gcd(a, m) = 1, by extended Euclid.
inline u64 invmod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        const i64 q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (r != 1) throw ArgumentError("invmod: arguments not coprime");
    return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

inline u64 euler_phi(u64 m) {
    if (m == 0) throw ArgumentError("euler_phi: m must be positive");
    return factorize(m).phi();
}

inline int moebius(u64 m) {
    if (m == 0) throw ArgumentError("moebius: m must be positive");
    const PrimeFactorization f = factorize(m);
    if (!f.squarefree()) return 0;
    return (f.terms.size() % 2 == 0) ? 1 : -1;
}

// Jacobi symbol (a/n) for odd n >= 1. Standard reciprocity ladder.
inline int jacobi(i64 a, u64 n) {
    if (n % 2 == 0) throw ArgumentError("jacobi: modulus must be odd");
    a %= static_cast<i64>(n);
    if (a < 0) a += static_cast<i64>(n);
    u64 u = static_cast<u64>(a), v = n;
    int s = 1;
    while (u != 0) {
        while (u % 2 == 0) {
            u /= 2;
            const u64 r = v % 8;
            if (r == 3 || r == 5) s = -s;
        }
        std::swap(u, v);
        if (u % 4 == 3 && v % 4 == 3) s = -s;
        u %= v;
    }
    return v == 1 ? s : 0;
}

// Squarefree kernel k(d) and its even-modulus variants:
//   k1(d) = k(d) for odd d, 4*k(d) for even d;
//   k2(d) = k(d) for odd d, gcd(4, d/2)*k(d) for even d.
struct Kernels {
    u64 k, k1, k2;
};

inline Kernels kernels(u64 d) {
    if (d == 0) throw ArgumentError("kernels: d must be positive");
    const u64 k = factorize(d).radical();
    if (d % 2 != 0) return {k, k, k};
    return {k, 4 * k, std::gcd<u64>(4, d / 2) * k};
}

// Largest h such that m = r^h for some integer r >= 2 (m >= 2). h = 1 when
// m is not a perfect power.
inline u32 perfect_power_exponent(u64 m) {
    if (m < 2) throw ArgumentError("perfect_power_exponent: m must be >= 2");
    const PrimeFactorization f = factorize(m);
    u32 h = 0;
    for (const auto& t : f.terms) h = h ? std::gcd(h, t.e) : t.e;
    return h;
}

// Membership in the set of integers not of the form g0^h or -g0^h with
// h > 1 and g0 rational. For integer g this is equivalent to |g| not being
// a perfect power: a reduced rational g0 = u/v with g0^h integral forces
// v = 1, and the free sign means only |g| matters.
inline bool is_in_G(i64 g) {
    if (g == -1 || g == 0 || g == 1) throw ArgumentError("is_in_G: g must not be -1, 0, or 1");
    const u64 m = static_cast<u64>(g < 0 ? -g : g);
    return perfect_power_exponent(m) == 1;
}

// Signed squarefree part of a nonzero integer: sign(m) * prod of primes
// with odd exponent.
inline i64 signed_squarefree_part(i64 m) {
    if (m == 0) throw ArgumentError("signed_squarefree_part: m must be nonzero");
    const u64 a = static_cast<u64>(m < 0 ? -m : m);
    i64 s = (m < 0) ? -1 : 1;
    for (const auto& t : factorize(a).terms)
        if (t.e % 2 == 1) s *= static_cast<i64>(t.p);
    return s;
}

// Exact small rational on 64-bit numerator/denominator, reduced, den > 0.
// Intermediate products use 128 bits; overflow of the reduced result throws.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(i64 n) : num_(n), den_(1) {}
    Rat(i64 n, i64 d) { assign(n, d); }

    i64 num() const { return num_; }
    i64 den() const { return den_; }

    static Rat from_i128(i128 n, i128 d) {
        if (d == 0) throw ArgumentError("Rat: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw ArgumentError("Rat: overflow");
        Rat r;
        r.num_ = static_cast<i64>(n);
        r.den_ = static_cast<i64>(d);
        return r;
    }

    Rat operator+(const Rat& o) const {
        return from_i128(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    }
    Rat operator-(const Rat& o) const {
        return from_i128(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
    }
    Rat operator*(const Rat& o) const {
        return from_i128(i128(num_) * o.num_, i128(den_) * o.den_);
    }
    Rat operator/(const Rat& o) const {
        if (o.num_ == 0) throw ArgumentError("Rat: division by zero");
        return from_i128(i128(num_) * o.den_, i128(den_) * o.num_);
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rat& o) const { return !(*this == o); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    void assign(i64 n, i64 d) {
        *this = from_i128(n, d);
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b) {
            const i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    i64 num_, den_;
};

}  // namespace orddist
