#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <utility>

namespace sympsurf {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Complex number over an arbitrary ordered field. std::complex is only
// specified for floating-point types, so exact-mode code (Rational
// coefficients end-to-end) shares this template with the double path.
template <class T>
struct Cx {
  T re{};
  T im{};

  Cx() = default;
  Cx(T r) : re(std::move(r)) {}
  Cx(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  Cx conj() const { return Cx(re, -im); }

  friend Cx operator+(const Cx& x, const Cx& y) { return Cx(x.re + y.re, x.im + y.im); }
  friend Cx operator-(const Cx& x, const Cx& y) { return Cx(x.re - y.re, x.im - y.im); }
  friend Cx operator-(const Cx& x) { return Cx(-x.re, -x.im); }
  friend Cx operator*(const Cx& x, const Cx& y) {
    return Cx(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re);
  }
  friend Cx operator*(const T& s, const Cx& x) { return Cx(s * x.re, s * x.im); }
  friend Cx operator*(const Cx& x, const T& s) { return Cx(x.re * s, x.im * s); }
  friend bool operator==(const Cx& x, const Cx& y) { return x.re == y.re && x.im == y.im; }
  friend bool operator!=(const Cx& x, const Cx& y) { return !(x == y); }
};

template <class T>
T abs2(const Cx<T>& z) {
  return z.re * z.re + z.im * z.im;
}

template <class T>
Cx<T> conj(const Cx<T>& z) {
  return z.conj();
}

template <class T>
Cx<T> operator/(const Cx<T>& n, const T& s) {
  return Cx<T>(n.re / s, n.im / s);
}

template <class T>
Cx<T> operator/(const Cx<T>& n, const Cx<T>& d) {
  return (n * d.conj()) / abs2(d);
}

inline std::complex<double> to_std(const Cx<double>& z) { return {z.re, z.im}; }
inline Cx<double> from_std(const std::complex<double>& z) { return {z.real(), z.imag()}; }

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <class T>
Cx<double> to_double_cx(const Cx<T>& z) {
  return {to_double(z.re), to_double(z.im)};
}

}  // namespace sympsurf
