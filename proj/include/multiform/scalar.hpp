// Exact Gaussian-rational scalars: the coefficient field Q(i).
//
// Everything in the engine is exact; there is no floating point anywhere.
// Rationals are arbitrary precision (boost::multiprecision), so fraction-free
// elimination and long derivative chains cannot overflow.

#ifndef MULTIFORM_SCALAR_HPP
#define MULTIFORM_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace multiform {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// a + b*i with exact rational a, b
struct Scalar {
    Rational re;
    Rational im;

    Scalar() : re(0), im(0) {}
    Scalar(long v) : re(v), im(0) {}
    Scalar(const Rational& r) : re(r), im(0) {}
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar iunit() { return Scalar(Rational(0), Rational(1)); }
    static Scalar ratio(long num, long den) {
        if (den == 0) throw std::domain_error("Scalar: zero denominator");
        return Scalar(Rational(num) / den);
    }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }

    Scalar operator-() const { return Scalar(-re, -im); }
    Scalar& operator+=(const Scalar& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw std::domain_error("Scalar: division by zero");
        return Scalar((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
    }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar conj() const { return Scalar(re, -im); }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    friend bool operator<(const Scalar& a, const Scalar& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    if (s.im == 0) return os << s.re;
    if (s.re == 0) return os << s.im << "*i";
    return os << "(" << s.re << (s.im < 0 ? "" : "+") << s.im << "*i)";
}

} // namespace multiform

#endif
