#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "orddist/arith.hpp"

namespace orddist {

// An exact root of unity exp(2*pi*i * num/den), or zero. num/den reduced,
// 0 <= num < den.
struct Rot {
    bool zero = false;
    u64 num = 0;
    u64 den = 1;

    static Rot make_zero() { return Rot{true, 0, 1}; }
    static Rot one() { return Rot{false, 0, 1}; }
    static Rot from_fraction(u64 n, u64 d) {
        n %= d;
        const u64 g = std::gcd(n, d);
        return Rot{false, n / g, d / g};
    }

    Rot operator*(const Rot& o) const {
        if (zero || o.zero) return make_zero();
        const u64 l = std::lcm(den, o.den);
        return from_fraction(num * (l / den) + o.num * (l / o.den), l);
    }

    bool operator==(const Rot& o) const {
        return zero == o.zero && (zero || (num == o.num && den == o.den));
    }

    // Exact integer value when den <= 2, otherwise throws.
    int as_int() const {
        if (zero) return 0;
        if (den == 1) return 1;
        if (den == 2) return -1;
        throw ArgumentError("Rot: not an integer value");
    }

    bool is_real() const { return zero || den <= 2; }

    std::complex<double> to_complex() const {
        if (zero) return {0.0, 0.0};
        const double t = 2.0 * 3.14159265358979323846 * double(num) / double(den);
        return {std::cos(t), std::sin(t)};
    }
};

namespace detail {

// Cyclotomic polynomial coefficients, low degree first, computed by dividing
// x^n - 1 by all lower-order cyclotomic factors. Cached.
inline const std::vector<i64>& cyclotomic_poly(u32 n) {
    static std::map<u32, std::vector<i64>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // exact division of monic integer polynomials, remainder must vanish
    auto divide = [](std::vector<i64> a, const std::vector<i64>& b) {
        std::vector<i64> q(a.size() - b.size() + 1, 0);
        for (size_t i = q.size(); i-- > 0;) {
            const i64 c = a[i + b.size() - 1];
            q[i] = c;
            if (c == 0) continue;
            for (size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
        }
        return q;
    };

    std::function<const std::vector<i64>&(u32)> get = [&](u32 m) -> const std::vector<i64>& {
        auto f = cache.find(m);
        if (f != cache.end()) return f->second;
        std::vector<i64> poly(m + 1, 0);
        poly[0] = -1;
        poly[m] = 1;  // x^m - 1
        for (u32 dd = 1; dd < m; ++dd)
            if (m % dd == 0) poly = divide(std::move(poly), get(dd));
        return cache.emplace(m, std::move(poly)).first->second;
    };
    return get(n);
}

}  // namespace detail

// An element of Z[zeta_n] in the canonical basis 1, zeta, ..., zeta^{phi(n)-1}
// (coefficients reduced modulo the n-th cyclotomic polynomial), so equality
// is plain coefficient comparison.
class CyclotomicInt {
public:
    explicit CyclotomicInt(u32 order, i64 constant = 0)
        : n_(order), c_(detail::cyclotomic_poly(order).size() - 1, 0) {
        if (order == 0) throw ArgumentError("CyclotomicInt: order must be positive");
        if (!c_.empty())
            c_[0] = constant;
        else if (constant != 0)
            throw ArgumentError("CyclotomicInt: impossible order");
    }

    static CyclotomicInt root_power(u32 order, u64 k) {
        CyclotomicInt z(order);
        std::vector<i64> poly(static_cast<size_t>(k % order) + 1, 0);
        poly.back() = 1;
        z.c_ = reduce(order, std::move(poly));
        return z;
    }

    static CyclotomicInt from_rot(u32 order, const Rot& r) {
        if (r.zero) return CyclotomicInt(order);
        if (order % r.den != 0)
            throw ArgumentError("CyclotomicInt: root order does not divide ambient order");
        return root_power(order, r.num * (order / r.den));
    }

    u32 order() const { return n_; }

    CyclotomicInt operator+(const CyclotomicInt& o) const {
        check(o);
        CyclotomicInt r = *this;
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
        return r;
    }
    CyclotomicInt operator-(const CyclotomicInt& o) const {
        check(o);
        CyclotomicInt r = *this;
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
        return r;
    }
    CyclotomicInt operator*(const CyclotomicInt& o) const {
        check(o);
        std::vector<i64> prod(2 * c_.size(), 0);
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (size_t j = 0; j < o.c_.size(); ++j) prod[i + j] += c_[i] * o.c_[j];
        }
        CyclotomicInt r(n_);
        r.c_ = reduce(n_, std::move(prod));
        return r;
    }
    bool operator==(const CyclotomicInt& o) const { return n_ == o.n_ && c_ == o.c_; }
    bool operator!=(const CyclotomicInt& o) const { return !(*this == o); }

    bool is_integer() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    i64 int_value() const {
        if (!is_integer()) throw ArgumentError("CyclotomicInt: not a rational integer");
        return c_.empty() ? 0 : c_[0];
    }

    std::complex<double> to_complex() const {
        std::complex<double> z{0.0, 0.0};
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) z += double(c_[i]) * Rot::from_fraction(i, n_).to_complex();
        return z;
    }

private:
    void check(const CyclotomicInt& o) const {
        if (n_ != o.n_) throw ArgumentError("CyclotomicInt: mixed orders");
    }

    static std::vector<i64> reduce(u32 n, std::vector<i64> poly) {
        const std::vector<i64>& phi = detail::cyclotomic_poly(n);
        const size_t deg = phi.size() - 1;
        for (size_t i = poly.size(); i-- > deg;) {
            const i64 c = poly[i];
            if (c == 0) continue;
            poly[i] = 0;
            for (size_t j = 0; j < deg; ++j) poly[i - deg + j] -= c * phi[j];
        }
        poly.resize(deg);
        return poly;
    }

    u32 n_;
    std::vector<i64> c_;
};

namespace detail {

struct GroupComponent {
    u64 pk;                  // prime power modulus of this CRT factor
    u64 order;               // order of the generator
    std::vector<u32> dlog;   // residue -> exponent, valid for units mod pk
};

struct GroupData {
    u64 modulus;
    u64 size;      // phi(modulus)
    u64 exponent;  // lcm of component orders
    std::vector<GroupComponent> components;
};

inline u64 find_primitive_root(u64 p) {
    const PrimeFactorization f = factorize(p - 1);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (const auto& t : f.terms)
            if (powmod(g, (p - 1) / t.p, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw ArgumentError("find_primitive_root: no root found");
}

inline GroupComponent make_cyclic_component(u64 pk, u64 gen, u64 order) {
    GroupComponent c{pk, order, std::vector<u32>(pk, 0)};
    u64 v = 1;
    for (u64 e = 0; e < order; ++e) {
        c.dlog[v] = static_cast<u32>(e);
        v = mulmod(v, gen, pk);
    }
    return c;
}

inline std::shared_ptr<const GroupData> build_group(u64 d) {
    if (d == 0) throw ArgumentError("CharacterGroup: modulus must be positive");
    if (d > (u64(1) << 20)) throw CapacityError("CharacterGroup: modulus too large");
    auto data = std::make_shared<GroupData>();
    data->modulus = d;
    data->size = 1;
    data->exponent = 1;
    for (const auto& t : factorize(d).terms) {
        u64 pk = 1;
        for (u32 i = 0; i < t.e; ++i) pk *= t.p;
        if (t.p != 2) {
            // odd prime power: cyclic, generator lifted from a primitive root mod p
            u64 g = find_primitive_root(t.p);
            if (t.e > 1 && powmod(g, t.p - 1, t.p * t.p) == 1) g += t.p;
            const u64 order = pk / t.p * (t.p - 1);
            data->components.push_back(make_cyclic_component(pk, g, order));
        } else if (t.e == 2) {
            data->components.push_back(make_cyclic_component(4, 3, 2));
        } else if (t.e >= 3) {
            // (Z/2^k)* = <-1> x <5>; every unit is (-1)^s 5^e for unique (s, e)
            GroupComponent minus{pk, 2, std::vector<u32>(pk, 0)};
            GroupComponent five{pk, pk / 4, std::vector<u32>(pk, 0)};
            u64 v = 1;
            for (u64 e = 0; e < pk / 4; ++e) {
                five.dlog[v] = static_cast<u32>(e);
                five.dlog[pk - v] = static_cast<u32>(e);  // -x has the same 5-exponent
                minus.dlog[v] = 0;
                minus.dlog[pk - v] = 1;
                v = mulmod(v, 5, pk);
            }
            data->components.push_back(std::move(minus));
            data->components.push_back(std::move(five));
        }
        // t.p == 2, t.e == 1: trivial unit group, no component
    }
    for (const auto& c : data->components) {
        data->size *= c.order;
        data->exponent = std::lcm(data->exponent, c.order);
    }
    return data;
}

}  // namespace detail

class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const detail::GroupData> group, std::vector<u32> expo,
                       u64 index)
        : group_(std::move(group)), expo_(std::move(expo)), index_(index) {
        order_ = 1;
        for (size_t i = 0; i < expo_.size(); ++i) {
            const u64 m = group_->components[i].order;
            order_ = std::lcm(order_, m / std::gcd<u64>(expo_[i], m));
        }
    }

    u64 modulus() const { return group_->modulus; }
    u64 order() const { return order_; }
    u64 index() const { return index_; }
    bool is_trivial() const { return order_ == 1; }
    bool is_real() const { return order_ <= 2; }
    const std::vector<u32>& exponents() const { return expo_; }

    // Completely multiplicative, period modulus(), zero off the units.
    Rot eval(i64 m) const {
        const u64 d = group_->modulus;
        i64 r = m % static_cast<i64>(d);
        if (r < 0) r += static_cast<i64>(d);
        const u64 u = static_cast<u64>(r);
        if (std::gcd(u, d) != 1) return Rot::make_zero();
        if (group_->components.empty()) return Rot::one();
        const u64 L = group_->exponent;
        u64 num = 0;
        for (size_t i = 0; i < expo_.size(); ++i) {
            const auto& c = group_->components[i];
            const u64 x = c.dlog[u % c.pk];
            num = (num + u128(expo_[i]) * x % L * (L / c.order)) % L;
        }
        return Rot::from_fraction(num, L);
    }

    std::complex<double> eval_complex(i64 m) const { return eval(m).to_complex(); }

    // chi^k, within the same group.
    DirichletCharacter power(u64 k) const {
        std::vector<u32> e(expo_.size());
        for (size_t i = 0; i < expo_.size(); ++i)
            e[i] = static_cast<u32>(u128(expo_[i]) * k % group_->components[i].order);
        return DirichletCharacter(group_, std::move(e), 0);
    }

private:
    std::shared_ptr<const detail::GroupData> group_;
    std::vector<u32> expo_;
    u64 order_;
    u64 index_;
};

// The full group of Dirichlet characters mod d, trivial character first.
class CharacterGroup {
public:
    explicit CharacterGroup(u64 d) : data_(detail::build_group(d)) {}

    u64 modulus() const { return data_->modulus; }
    u64 size() const { return data_->size; }
    u64 exponent() const { return data_->exponent; }

    // Mixed-radix enumeration of exponent vectors; index 0 is trivial.
    DirichletCharacter character(u64 index) const {
        if (index >= data_->size) throw ArgumentError("CharacterGroup: index out of range");
        std::vector<u32> expo(data_->components.size());
        u64 rest = index;
        for (size_t i = 0; i < expo.size(); ++i) {
            const u64 m = data_->components[i].order;
            expo[i] = static_cast<u32>(rest % m);
            rest /= m;
        }
        return DirichletCharacter(data_, std::move(expo), index);
    }

    std::vector<DirichletCharacter> characters() const {
        std::vector<DirichletCharacter> out;
        out.reserve(data_->size);
        for (u64 i = 0; i < data_->size; ++i) out.push_back(character(i));
        return out;
    }

    // The nontrivial character mod 4 (modulus must be 4).
    static DirichletCharacter psi() { return CharacterGroup(4).character(1); }

private:
    std::shared_ptr<const detail::GroupData> data_;
};

// Dirichlet convolution of chi and the Moebius function:
// h_chi(n) = sum_{v | n} chi(v) mu(n/v), exact in Z[zeta_{o_chi}].
inline CyclotomicInt mu_convolution(const DirichletCharacter& chi, u64 n) {
    if (n == 0) throw ArgumentError("mu_convolution: n must be positive");
    const u32 o = static_cast<u32>(chi.order());
    CyclotomicInt acc(o);
    for (u64 v = 1; v * v <= n; ++v) {
        if (n % v) continue;
        const u64 w = n / v;
        const int m1 = moebius(w);
        if (m1 != 0) acc = acc + CyclotomicInt::from_rot(o, chi.eval(static_cast<i64>(v))) *
                                     CyclotomicInt(o, m1);
        if (v != w) {
            const int m2 = moebius(v);
            if (m2 != 0) acc = acc + CyclotomicInt::from_rot(o, chi.eval(static_cast<i64>(w))) *
                                         CyclotomicInt(o, m2);
        }
    }
    return acc;
}

}  // namespace orddist
