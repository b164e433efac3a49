#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sympsurf/parallel.hpp"
#include "sympsurf/plane_algebra.hpp"
#include "sympsurf/surfaces.hpp"

namespace sympsurf {

namespace detail {

// Cartesian sample ladder over [-r, r] honouring "samples per unit length".
inline int axis_samples(double r, int resolution) {
  const int n = static_cast<int>(std::ceil(2.0 * r * resolution)) + 1;
  return std::max(n, 9);
}

}  // namespace detail

// Minimum over a Cartesian grid on the chart disc of the graph margin
//   1 + |dw/dz|^2 - |dw/dzbar|^2,
// with the Wirtinger derivatives taken by central finite differences of the
// value evaluator.  Closed-form derivative closures, if present, are
// deliberately ignored here so the sweep independently audits them.
inline double verify_symplectic_grid(const GraphSurface& s,
                                     const GridSpec& grid) {
  const double r = s.chart_radius;
  const double h = std::min(1.0, r) / grid.resolution;
  const int n = detail::axis_samples(r, grid.resolution);
  const double step = 2.0 * r / (n - 1);

  const auto margin_at = [&](std::size_t idx) {
    const int iy = static_cast<int>(idx) / n;
    const int ix = static_cast<int>(idx) % n;
    const Complex z(-r + step * ix, -r + step * iy);
    if (std::abs(z) > r) return std::numeric_limits<double>::infinity();
    Complex dx, dy;
    detail::fd_dx_dy(s.w, z, h, dx, dy);
    const Complex du = 0.5 * (dx - Complex(0, 1) * dy);
    const Complex dv = 0.5 * (dx + Complex(0, 1) * dy);
    return 1.0 + std::norm(du) - std::norm(dv);
  };
  return parallel_min(static_cast<std::size_t>(n) * n, margin_at);
}

inline double verify_symplectic_grid(const Arrangement& arr,
                                     const GridSpec& grid) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : arr.surfaces)
    m = std::min(m, verify_symplectic_grid(GraphSurface::of_local(s), grid));
  return m;
}

// Wirtinger gradient of an implicit function f(z, w), for surfaces given as
// zero sets rather than graphs.
struct WirtingerDerivs {
  Complex fz, fw, fzbar, fwbar;
};

// Positivity margin of a regular zero set at a point:
//   |(f_z, f_w)| - |(f_zbar, f_wbar)|.
// Positive margin certifies a symplectic, positively oriented tangent plane.
inline double implicit_margin(const WirtingerDerivs& d) {
  return std::sqrt(std::norm(d.fz) + std::norm(d.fw)) -
         std::sqrt(std::norm(d.fzbar) + std::norm(d.fwbar));
}

// Implicit-surface variant of the grid sweep: minimum positivity margin over
// a supplied sample of the zero set, with the Wirtinger gradient provided by
// the caller's evaluator.
template <class DerivsFn>
double verify_symplectic_implicit(
    const DerivsFn& derivs_at,
    const std::vector<std::pair<Complex, Complex>>& locus) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [z, w] : locus)
    m = std::min(m, implicit_margin(derivs_at(z, w)));
  return m;
}

// One transverse crossing of two graph surfaces.
struct IntersectionPoint {
  Complex z{};
  Complex w{};
  bool transverse = false;
  bool positive = false;
  double margin = 0.0;    // |a1-a2|^2 - |b1-b2|^2 of the tangent graphs
  double residual = 0.0;  // |w1(z) - w2(z)| after refinement
};

// Locates the zeros of D(z) = w1(z) - w2(z) on the common chart disc:
// a Cartesian sweep marks local minima of |D| as candidates, each candidate
// is polished by a damped Newton iteration on the real Jacobian of D, and
// converged roots are deduplicated.  Throws NonConvergent when a candidate
// basin refuses to settle below the refinement tolerance.
inline std::vector<IntersectionPoint> locate_intersections(
    const GraphSurface& s1, const GraphSurface& s2, const GridSpec& grid) {
  const double r = std::min(s1.chart_radius, s2.chart_radius);
  const double h = std::min(1.0, r) / grid.resolution;
  const int n = detail::axis_samples(r, grid.resolution);
  const double step = 2.0 * r / (n - 1);

  const auto diff = [&](Complex z) { return s1.w(z) - s2.w(z); };

  std::vector<double> absd(static_cast<std::size_t>(n) * n,
                           std::numeric_limits<double>::infinity());
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const Complex z(-r + step * ix, -r + step * iy);
      if (std::abs(z) > r) continue;
      absd[static_cast<std::size_t>(iy) * n + ix] = std::abs(diff(z));
    }
  }

  const auto at = [&](int ix, int iy) {
    if (ix < 0 || iy < 0 || ix >= n || iy >= n)
      return std::numeric_limits<double>::infinity();
    return absd[static_cast<std::size_t>(iy) * n + ix];
  };

  std::vector<Complex> seeds;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double v = at(ix, iy);
      if (!std::isfinite(v)) continue;
      bool is_min = true;
      for (int dy = -1; dy <= 1 && is_min; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (at(ix + dx, iy + dy) < v) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;
      const Complex z(-r + step * ix, -r + step * iy);
      // Keep only minima small enough to be zero candidates for a function
      // with the locally observed variation.
      const double lip =
          std::abs(detail::fd_dz(diff, z, h)) +
          std::abs(detail::fd_dzbar(diff, z, h));
      if (v <= 4.0 * step * (lip + 1.0)) seeds.push_back(z);
    }
  }

  std::vector<IntersectionPoint> found;
  const double scale = 1.0 + std::abs(s1.w(Complex{})) + std::abs(s2.w(Complex{}));
  for (Complex z : seeds) {
    bool converged = false;
    double fv = std::abs(diff(z));
    for (int it = 0; it < 60; ++it) {
      if (fv <= grid.refinement_tolerance * scale) {
        converged = true;
        break;
      }
      const Complex dzv = detail::fd_dz(diff, z, h);
      const Complex dbv = detail::fd_dzbar(diff, z, h);
      // Real 2x2 system for D(z + delta) = 0 with
      // D' = dzv * delta + dbv * conj(delta).
      const double a11 = dzv.real() + dbv.real();
      const double a12 = -dzv.imag() + dbv.imag();
      const double a21 = dzv.imag() + dbv.imag();
      const double a22 = dzv.real() - dbv.real();
      const double det = a11 * a22 - a12 * a21;
      if (std::abs(det) < 1e-300) break;
      const Complex f = diff(z);
      Complex delta((-a22 * f.real() + a12 * f.imag()) / det,
                    (a21 * f.real() - a11 * f.imag()) / det);
      // Damping: halve the step until the residual decreases.
      double t = 1.0;
      Complex zn = z + delta;
      double fn = std::abs(diff(zn));
      int halv = 0;
      while (fn >= fv && halv < 20) {
        t *= 0.5;
        zn = z + t * delta;
        fn = std::abs(diff(zn));
        ++halv;
      }
      if (fn >= fv) break;
      z = zn;
      fv = fn;
    }
    if (!converged) {
      if (fv <= grid.refinement_tolerance * scale) {
        converged = true;
      } else if (fv <= 1e-6 * scale) {
        throw NonConvergent(
            "intersection refinement stalled at residual " +
            std::to_string(fv));
      } else {
        continue;  // shallow dip, not a zero
      }
    }
    if (std::abs(z) > r * (1.0 + 1e-9)) continue;

    bool dup = false;
    for (const auto& p : found)
      if (std::abs(p.z - z) <
          std::max(1e-7 * std::max(r, 1.0), 10.0 * grid.refinement_tolerance)) {
        dup = true;
        break;
      }
    if (dup) continue;

    IntersectionPoint p;
    p.z = z;
    p.w = 0.5 * (s1.w(z) + s2.w(z));
    p.residual = fv;
    const Complex a1 = s1.deriv_z(z, h), b1 = s1.deriv_zbar(z, h);
    const Complex a2 = s2.deriv_z(z, h), b2 = s2.deriv_zbar(z, h);
    p.margin = std::norm(a1 - a2) - std::norm(b1 - b2);
    p.transverse = p.margin != 0.0;
    p.positive = p.margin > 0.0;
    found.push_back(p);
  }

  std::sort(found.begin(), found.end(),
            [](const IntersectionPoint& a, const IntersectionPoint& b) {
              if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
              return a.z.imag() < b.z.imag();
            });
  return found;
}

}  // namespace sympsurf
