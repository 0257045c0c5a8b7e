#pragma once

#include <optional>
#include <string>

#include "orddist/arith.hpp"

namespace orddist {

// The base g as a reduced signed fraction, g not in {-1, 0, 1}.
class RationalBase {
public:
    RationalBase(i64 numerator, i64 denominator = 1) {
        if (denominator == 0) throw ArgumentError("RationalBase: zero denominator");
        if (numerator == 0) throw ArgumentError("RationalBase: g must be nonzero");
        if (denominator < 0) {
            numerator = -numerator;
            denominator = -denominator;
        }
        const i64 g = std::gcd(numerator < 0 ? -numerator : numerator, denominator);
        num_ = numerator / g;
        den_ = denominator / g;
        if (den_ == 1 && (num_ == 1 || num_ == -1))
            throw ArgumentError("RationalBase: g must not be -1, 0, or 1");
    }

    // Accepts "2", "-11", "3/7", "-3/7". The whole string must be consumed.
    static RationalBase parse(const std::string& s) {
        auto to_int = [&](const std::string& part) {
            size_t pos = 0;
            i64 v;
            try {
                v = std::stoll(part, &pos);
            } catch (const std::logic_error&) {
                throw ArgumentError("RationalBase: cannot parse '" + s + "'");
            }
            if (pos != part.size() || part.empty())
                throw ArgumentError("RationalBase: cannot parse '" + s + "'");
            return v;
        };
        const auto slash = s.find('/');
        if (slash == std::string::npos) return RationalBase(to_int(s));
        return RationalBase(to_int(s.substr(0, slash)), to_int(s.substr(slash + 1)));
    }

    i64 num() const { return num_; }
    i64 den() const { return den_; }
    int sign() const { return num_ < 0 ? -1 : 1; }
    bool is_integer() const { return den_ == 1; }
    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Exponent of p in g.
    int nu_p(u64 p) const {
        int v = 0;
        u64 a = static_cast<u64>(num_ < 0 ? -num_ : num_);
        while (a % p == 0) {
            a /= p;
            ++v;
        }
        if (v) return v;
        u64 b = static_cast<u64>(den_);
        while (b % p == 0) {
            b /= p;
            --v;
        }
        return v;
    }

    // Fast census-path test: nu_p(g) != 0 iff p divides num or den.
    bool divides_num_or_den(u64 p) const {
        return static_cast<u64>(num_ < 0 ? -num_ : num_) % p == 0 ||
               static_cast<u64>(den_) % p == 0;
    }

    // g mod p = num * den^{-1} mod p, defined only when nu_p(g) = 0.
    u64 mod_p(u64 p) const {
        if (divides_num_or_den(p))
            throw OrderUndefinedError("g mod p undefined: p divides numerator or denominator");
        i64 n = num_ % static_cast<i64>(p);
        if (n < 0) n += static_cast<i64>(p);
        u64 r = static_cast<u64>(n);
        if (den_ != 1) r = mulmod(r, invmod(static_cast<u64>(den_) % p, p), p);
        return r;
    }

    // Discriminant of Q(sqrt(g)): signed squarefree part s of num*den if
    // s = 1 (mod 4), else 4s. Returns the sentinel 1 when g is a square
    // (callers of the mod-4 closed form must gate on in_G first).
    i64 discriminant() const {
        const i128 prod = i128(num_) * den_;
        if (prod > INT64_MAX || prod < INT64_MIN)
            throw ArgumentError("discriminant: |num*den| out of range");
        const i64 s = signed_squarefree_part(static_cast<i64>(prod));
        if (s == 1) return 1;
        return (((s % 4) + 4) % 4 == 1) ? s : 4 * s;
    }

    // For integer g only: membership in the power-free set.
    bool in_G() const {
        if (den_ != 1) return false;
        return is_in_G(num_);
    }

private:
    i64 num_, den_;
};

// Least k >= 1 with g^k = 1 (mod p), computed by factoring p-1 and dividing
// each prime out of the exponent while the power stays 1. The factorization
// of p-1 may be supplied by the caller (census hot path).
inline u64 multiplicative_order(const RationalBase& g, u64 p,
                                const PrimeFactorization* pm1_fact = nullptr) {
    if (g.divides_num_or_den(p))
        throw OrderUndefinedError("order undefined at p: nu_p(g) != 0");
    const u64 gbar = g.mod_p(p);
    PrimeFactorization local;
    if (!pm1_fact) {
        local = factorize(p - 1);
        pm1_fact = &local;
    }
    u64 k = p - 1;
    for (const auto& t : pm1_fact->terms) {
        for (u32 i = 0; i < t.e; ++i) {
            const u64 k2 = k / t.p;
            if (powmod(gbar, k2, p) == 1)
                k = k2;
            else
                break;
        }
    }
    return k;
}

inline u64 residual_index(const RationalBase& g, u64 p,
                          const PrimeFactorization* pm1_fact = nullptr) {
    return (p - 1) / multiplicative_order(g, p, pm1_fact);
}

// Legendre symbol of g mod p for odd p; throws the skip signal when
// nu_p(g) != 0, matching census semantics.
inline int kronecker_symbol(const RationalBase& g, u64 p) {
    if (p == 2 || p % 2 == 0) throw ArgumentError("kronecker_symbol: p must be an odd prime");
    if (g.divides_num_or_den(p))
        throw OrderUndefinedError("kronecker_symbol: nu_p(g) != 0, skip this prime");
    return jacobi(static_cast<i64>(g.mod_p(p)), p);
}

}  // namespace orddist
