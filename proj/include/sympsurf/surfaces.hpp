#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sympsurf/errors.hpp"

namespace sympsurf {

using Complex = std::complex<double>;

namespace detail {

// Central-difference Wirtinger derivatives of a C -> C evaluator.
template <class F>
Complex fd_dx_dy(const F& f, Complex z, double h, Complex& dx, Complex& dy) {
  dx = (f(z + Complex(h, 0)) - f(z - Complex(h, 0))) / (2.0 * h);
  dy = (f(z + Complex(0, h)) - f(z - Complex(0, h))) / (2.0 * h);
  return dx;
}

template <class F>
Complex fd_dz(const F& f, Complex z, double h) {
  Complex dx, dy;
  fd_dx_dy(f, z, h, dx, dy);
  return 0.5 * (dx - Complex(0, 1) * dy);
}

template <class F>
Complex fd_dzbar(const F& f, Complex z, double h) {
  Complex dx, dy;
  fd_dx_dy(f, z, h, dx, dy);
  return 0.5 * (dx + Complex(0, 1) * dy);
}

}  // namespace detail

// Correction term R(z) of a local graph, vanishing to second order at the
// origin: R(0) = 0, |R| <= C|z|^2, |dR/dz| <= C|z|, |dR/dzbar| <= C|z| for
// the certified constant stored alongside the surface.
//
// Polynomial form (R = sum_k c_k z^{k+2}) has closed derivatives and is the
// serializable case; arbitrary closures may be attached programmatically,
// with optional closed-form derivatives (finite differences otherwise).
struct Residual {
  std::vector<Complex> coeffs;                      // polynomial case
  std::function<Complex(Complex)> value_fn;         // custom case
  std::function<Complex(Complex)> dz_fn, dzbar_fn;  // optional closed forms

  static constexpr double fd_step = 1e-6;

  static Residual none() { return {}; }

  static Residual poly(std::vector<Complex> c) {
    Residual r;
    r.coeffs = std::move(c);
    return r;
  }

  static Residual custom(std::function<Complex(Complex)> value,
                         std::function<Complex(Complex)> dz = {},
                         std::function<Complex(Complex)> dzbar = {}) {
    Residual r;
    r.value_fn = std::move(value);
    r.dz_fn = std::move(dz);
    r.dzbar_fn = std::move(dzbar);
    return r;
  }

  bool is_zero() const { return coeffs.empty() && !value_fn; }
  bool is_poly() const { return !value_fn; }

  Complex value(Complex z) const {
    if (value_fn) return value_fn(z);
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      acc = acc * z + *it;
    return acc * z * z;
  }

  Complex dz(Complex z) const {
    if (value_fn)
      return dz_fn ? dz_fn(z) : detail::fd_dz(value_fn, z, fd_step);
    Complex acc = 0.0;
    for (std::size_t n = coeffs.size(); n-- > 0;)
      acc = acc * z + static_cast<double>(n + 2) * coeffs[n];
    return acc * z;
  }

  Complex dzbar(Complex z) const {
    if (value_fn)
      return dzbar_fn ? dzbar_fn(z) : detail::fd_dzbar(value_fn, z, fd_step);
    return 0.0;
  }
};

// Surface given as a graph w = a z + b zbar + R(z) over the disc
// |z| <= chart_radius, with |R| <= bound_C |z|^2 (and the matching
// first-derivative bounds) certified by the producer.
struct LocalGraphSurface {
  Complex a{};
  Complex b{};
  Residual residual = Residual::none();
  double bound_C = 0.0;
  double chart_radius = 1.0;

  Complex value(Complex z) const {
    return a * z + b * std::conj(z) + residual.value(z);
  }
  Complex dz(Complex z) const { return a + residual.dz(z); }
  Complex dzbar(Complex z) const { return b + residual.dzbar(z); }
};

// Ordered family of graph surfaces over a shared chart.  The vertical plane
// {z = 0} acts as the implicit reference member of every family.
struct Arrangement {
  std::vector<LocalGraphSurface> surfaces;
  double chart_radius = 1.0;
};

struct ArrangementConstants {
  double residual_C = 0.0;  // largest certified residual constant
  double slope_M = 0.0;     // max over surfaces of max(|a|, |b|)
  // min of 1, the margins |a_j|^2 - |b_j|^2 + 1 against the vertical plane,
  // and the pairwise margins |a_j - a_k| - |b_j - b_k|.
  double eps0 = 1.0;
};

// Computes (C, M, eps0) and rejects families whose margins are not all
// strictly positive.
inline ArrangementConstants arrangement_constants(const Arrangement& arr) {
  ArrangementConstants k;
  const auto& ss = arr.surfaces;
  for (std::size_t j = 0; j < ss.size(); ++j) {
    k.residual_C = std::max(k.residual_C, ss[j].bound_C);
    k.slope_M = std::max({k.slope_M, std::abs(ss[j].a), std::abs(ss[j].b)});
    const double e = std::norm(ss[j].a) - std::norm(ss[j].b) + 1.0;
    if (e <= 0.0)
      throw InvalidArrangement("surface " + std::to_string(j) +
                               " is not positively transverse to the "
                               "vertical plane (margin " +
                               std::to_string(e) + ")");
    k.eps0 = std::min(k.eps0, e);
  }
  for (std::size_t j = 0; j < ss.size(); ++j) {
    for (std::size_t m = j + 1; m < ss.size(); ++m) {
      const double g =
          std::abs(ss[j].a - ss[m].a) - std::abs(ss[j].b - ss[m].b);
      if (g <= 0.0)
        throw InvalidArrangement(
            "surfaces " + std::to_string(j) + " and " + std::to_string(m) +
            " fail the pairwise slope margin (" + std::to_string(g) + ")");
      k.eps0 = std::min(k.eps0, g);
    }
  }
  return k;
}

// Graph surface with arbitrary evaluator (and optional closed-form Wirtinger
// derivatives); the general currency of the perturbation pipeline.
struct GraphSurface {
  std::function<Complex(Complex)> w;
  std::function<Complex(Complex)> dz;     // optional
  std::function<Complex(Complex)> dzbar;  // optional
  double chart_radius = 1.0;

  Complex value(Complex z) const { return w(z); }

  Complex deriv_z(Complex z, double h) const {
    return dz ? dz(z) : detail::fd_dz(w, z, h);
  }
  Complex deriv_zbar(Complex z, double h) const {
    return dzbar ? dzbar(z) : detail::fd_dzbar(w, z, h);
  }

  static GraphSurface affine(Complex slope, Complex offset, double radius) {
    GraphSurface s;
    s.w = [slope, offset](Complex z) { return slope * z + offset; };
    s.dz = [slope](Complex) { return slope; };
    s.dzbar = [](Complex) { return Complex{}; };
    s.chart_radius = radius;
    return s;
  }

  static GraphSurface of_local(const LocalGraphSurface& s) {
    GraphSurface g;
    g.w = [s](Complex z) { return s.value(z); };
    g.dz = [s](Complex z) { return s.dz(z); };
    g.dzbar = [s](Complex z) { return s.dzbar(z); };
    g.chart_radius = s.chart_radius;
    return g;
  }
};

// Sampling and verification parameters for grid sweeps.
struct GridSpec {
  int resolution = 128;                   // samples per unit length
  double refinement_tolerance = 1e-12;    // root-polishing target
  double symplectic_margin_floor = 1e-9;  // demanded margin on verified stages
};

// Worst observed ratio of |R| (and scaled first derivatives) against the
// certified bound_C |z|^2 envelope over a radial sample sweep; values above
// 1 refute the certificate.
inline double residual_bound_audit(const LocalGraphSurface& s,
                                   const GridSpec& grid) {
  if (s.residual.is_zero() || s.bound_C <= 0.0)
    return s.residual.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
  double worst = 0.0;
  const int nr = std::max(grid.resolution, 16);
  const int na = 24;
  for (int ir = 1; ir <= nr; ++ir) {
    const double r = s.chart_radius * ir / nr;
    for (int ia = 0; ia < na; ++ia) {
      const double th = 2.0 * M_PI * ia / na;
      const Complex z = std::polar(r, th);
      const double v = std::abs(s.residual.value(z)) / (s.bound_C * r * r);
      const double d1 = std::abs(s.residual.dz(z)) / (s.bound_C * r);
      const double d2 = std::abs(s.residual.dzbar(z)) / (s.bound_C * r);
      worst = std::max({worst, v, d1, d2});
    }
  }
  return worst;
}

}  // namespace sympsurf
