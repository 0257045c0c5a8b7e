#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "orddist/characters.hpp"

namespace orddist {

// Working real type: ~50 significant decimal digits. Center arithmetic runs
// at this precision; radii absorb a generous per-operation rounding bump
// (16 ulp for +-*/ and 64 ulp for transcendental calls, far above the
// documented error of either, and ~35 orders of magnitude below the method
// errors this library certifies).
using Real = boost::multiprecision::cpp_bin_float_50;

inline const Real& real_eps() {
    static const Real e = std::numeric_limits<Real>::epsilon();
    return e;
}
inline Real arith_slop(const Real& magnitude) { return abs(magnitude) * (16 * real_eps()); }
inline Real transcendental_slop(const Real& magnitude) {
    return abs(magnitude) * (64 * real_eps()) + Real("1e-60");
}

inline Real real_pi() { return boost::math::constants::pi<Real>(); }

// A complex (possibly purely real) value with certified componentwise
// absolute-error radii: the true value z satisfies |Re z - re| <= rre and
// |Im z - im| <= rim. All operations only ever widen a true enclosure.
struct ErrorInterval {
    Real re{0}, im{0};
    Real rre{0}, rim{0};

    static ErrorInterval exact(i64 v) {
        ErrorInterval x;
        x.re = v;
        return x;
    }
    static ErrorInterval ratio(i64 num, i64 den) {
        ErrorInterval x;
        x.re = Real(num) / Real(den);
        x.rre = arith_slop(x.re);
        return x;
    }
    // num/den where both are exactly representable Reals (e.g. integer
    // products too wide for i64); one rounded division.
    static ErrorInterval ratio_real(const Real& num, const Real& den) {
        ErrorInterval x;
        x.re = num / den;
        x.rre = arith_slop(x.re);
        return x;
    }
    static ErrorInterval approx(const Real& center, const Real& radius) {
        ErrorInterval x;
        x.re = center;
        x.rre = radius;
        return x;
    }

    bool is_strictly_real() const { return im == 0 && rim == 0; }

    ErrorInterval operator+(const ErrorInterval& o) const {
        ErrorInterval x;
        x.re = re + o.re;
        x.im = im + o.im;
        x.rre = rre + o.rre + arith_slop(x.re);
        x.rim = rim + o.rim + arith_slop(x.im);
        return x;
    }
    ErrorInterval operator-(const ErrorInterval& o) const {
        ErrorInterval x;
        x.re = re - o.re;
        x.im = im - o.im;
        x.rre = rre + o.rre + arith_slop(x.re);
        x.rim = rim + o.rim + arith_slop(x.im);
        return x;
    }
    ErrorInterval operator-() const {
        ErrorInterval x = *this;
        x.re = -x.re;
        x.im = -x.im;
        return x;
    }

    ErrorInterval operator*(const ErrorInterval& o) const {
        ErrorInterval x;
        x.re = re * o.re - im * o.im;
        x.im = re * o.im + im * o.re;
        x.rre = term_rad(re, rre, o.re, o.rre) + term_rad(im, rim, o.im, o.rim) +
                arith_slop(x.re);
        x.rim = term_rad(re, rre, o.im, o.rim) + term_rad(im, rim, o.re, o.rre) +
                arith_slop(x.im);
        return x;
    }

    ErrorInterval conj() const {
        ErrorInterval x = *this;
        x.im = -x.im;
        return x;
    }

    // |z|^2 as a real interval.
    ErrorInterval norm_sq() const {
        ErrorInterval x;
        x.re = re * re + im * im;
        x.rre = term_rad(re, rre, re, rre) + term_rad(im, rim, im, rim) + arith_slop(x.re);
        return x;
    }

    // Division by a real interval whose enclosure excludes zero.
    ErrorInterval div_real(const ErrorInterval& o) const {
        if (!o.is_strictly_real() && o.rim != 0)
            throw ArgumentError("ErrorInterval: div_real needs a real divisor");
        const Real n = o.re, rn = o.rre;
        if (!(abs(n) > rn)) throw PrecisionError("ErrorInterval: divisor interval contains 0");
        ErrorInterval x;
        x.re = re / n;
        x.im = im / n;
        const Real denom = abs(n) * (abs(n) - rn);
        x.rre = (abs(n) * rre + abs(re) * rn) / denom + arith_slop(x.re);
        x.rim = (abs(n) * rim + abs(im) * rn) / denom + arith_slop(x.im);
        return x;
    }

    ErrorInterval operator/(const ErrorInterval& o) const {
        if (o.is_strictly_real() || (o.im == 0 && o.rim == 0)) return div_real(o);
        return (*this * o.conj()).div_real(o.norm_sq());
    }

    // Multiply by an exact root of unity; exact axis rotations when the
    // angle denominator divides 4, cos/sin enclosures otherwise.
    ErrorInterval scale_rot(const Rot& r) const {
        if (r.zero) return ErrorInterval{};
        if (r.den == 1) return *this;
        if (r.den == 2) return -*this;
        if (r.den == 4) {
            ErrorInterval x;
            if (r.num == 1) {  // * i
                x.re = -im;
                x.im = re;
                x.rre = rim;
                x.rim = rre;
            } else {  // * -i
                x.re = im;
                x.im = -re;
                x.rre = rim;
                x.rim = rre;
            }
            return x;
        }
        const Real theta = 2 * real_pi() * Real(r.num) / Real(r.den);
        ErrorInterval z;
        z.re = cos(theta);
        z.im = sin(theta);
        z.rre = transcendental_slop(Real(1));
        z.rim = z.rre;
        return *this * z;
    }

    // Multiply by the exact real window [lo, hi] (e.g. a proven tail factor).
    ErrorInterval mul_window(const Real& lo, const Real& hi) const {
        ErrorInterval w;
        w.re = (lo + hi) / 2;
        w.rre = (hi - lo) / 2 + arith_slop(w.re);
        return *this * w;
    }

    ErrorInterval widened(const Real& extra) const {
        ErrorInterval x = *this;
        x.rre += extra;
        x.rim += extra;
        return x;
    }

    // Upper bound for |z| over the enclosure.
    Real mag_upper() const {
        const Real a = abs(re) + rre, b = abs(im) + rim;
        return sqrt(a * a + b * b) * (1 + 4 * real_eps());
    }

    Real real_lo() const { return re - rre; }
    Real real_hi() const { return re + rre; }
    Real radius_upper() const { return rre + rim; }

    bool contains(const Real& v_re, const Real& v_im = Real(0)) const {
        return abs(re - v_re) <= rre && abs(im - v_im) <= rim;
    }

    double center_double() const { return static_cast<double>(re); }
    double radius_double() const {
        // outward: rounding a radius must not shrink it
        return static_cast<double>(rre + rim) * (1 + 1e-15);
    }

private:
    static Real term_rad(const Real& a, const Real& ra, const Real& b, const Real& rb) {
        return abs(a) * rb + abs(b) * ra + ra * rb;
    }
};

}  // namespace orddist
