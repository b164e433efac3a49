#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sympsurf/cutoff.hpp"
#include "sympsurf/errors.hpp"
#include "sympsurf/grid_checks.hpp"
#include "sympsurf/surfaces.hpp"

namespace sympsurf {

namespace detail {

// Largest t with 4 t^2 + (2 M t + 4 C t^2)^2 < min(r0, r0^2); the left side
// is strictly increasing in t, so bisection applies.
inline double chart_fit_lambda(double M, double C, double r0) {
  const double bound = std::min(r0, r0 * r0);
  if (bound <= 0.0) return 0.0;
  const auto lhs = [&](double t) {
    const double q = 2.0 * M * t + 4.0 * C * t * t;
    return 4.0 * t * t + q * q;
  };
  double hi = 0.5 * std::sqrt(bound) + 1e-9;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lhs(mid) < bound ? lo : hi) = mid;
  }
  return lo;
}

// Pointwise sum of two residual terms.
inline Residual residual_sum(const Residual& r1, const Residual& r2) {
  if (r1.is_zero()) return r2;
  if (r2.is_zero()) return r1;
  return Residual::custom(
      [r1, r2](Complex z) { return r1.value(z) + r2.value(z); },
      [r1, r2](Complex z) { return r1.dz(z) + r2.dz(z); },
      [r1, r2](Complex z) { return r1.dzbar(z) + r2.dzbar(z); });
}

// Residual multiplied by the radial rise cutoff rho(|z| / lam): identically
// zero on |z| <= lam, untouched on |z| >= 2 lam.
inline LocalGraphSurface cutoff_residual_surface(const LocalGraphSurface& s,
                                                 double lam) {
  if (s.residual.is_zero()) return s;
  LocalGraphSurface out;
  out.a = s.a;
  out.b = s.b;
  out.chart_radius = s.chart_radius;
  out.bound_C = 3.0 * s.bound_C;
  const Residual base = s.residual;
  const CutoffProfile rise = CutoffProfile::rise();
  out.residual = Residual::custom(
      [base, rise, lam](Complex z) -> Complex {
        const double t = std::abs(z) / lam;
        if (t <= 1.0) return {};
        return rise(t) * base.value(z);
      },
      [base, rise, lam](Complex z) -> Complex {
        const double az = std::abs(z);
        const double t = az / lam;
        if (t <= 1.0) return {};
        return rise(t) * base.dz(z) +
               rise.deriv(t) * std::conj(z) / (2.0 * az * lam) * base.value(z);
      },
      [base, rise, lam](Complex z) -> Complex {
        const double az = std::abs(z);
        const double t = az / lam;
        if (t <= 1.0) return {};
        return rise(t) * base.dzbar(z) +
               rise.deriv(t) * z / (2.0 * az * lam) * base.value(z);
      });
  return out;
}

// Antiholomorphic slope b folded into a logarithmic-scale cutoff tail
// b zbar rho(lam log|z| + mu): the output is the holomorphic line {w = a z}
// near the origin and the original plane for lam log|z| + mu >= 2.
inline LocalGraphSurface antiholo_cutoff_surface(const LocalGraphSurface& s,
                                                 double lam, double mu) {
  LocalGraphSurface out;
  out.a = s.a;
  out.b = Complex{};
  out.chart_radius = s.chart_radius;
  if (s.b == Complex{}) {
    out.residual = Residual::none();
    out.bound_C = 0.0;
    return out;
  }
  out.bound_C = std::abs(s.b) * (1.0 + lam) * std::exp((mu - 1.0) / lam);
  const Complex b = s.b;
  const CutoffProfile rise = CutoffProfile::rise();
  out.residual = Residual::custom(
      [b, rise, lam, mu](Complex z) -> Complex {
        const double az = std::abs(z);
        if (az <= 0.0) return {};
        const double t = lam * std::log(az) + mu;
        if (t <= 1.0) return {};
        return b * std::conj(z) * rise(t);
      },
      [b, rise, lam, mu](Complex z) -> Complex {
        const double az = std::abs(z);
        if (az <= 0.0) return {};
        const double t = lam * std::log(az) + mu;
        if (t <= 1.0) return {};
        const Complex zb = std::conj(z);
        return b * rise.deriv(t) * lam * zb * zb / (2.0 * az * az);
      },
      [b, rise, lam, mu](Complex z) -> Complex {
        const double az = std::abs(z);
        if (az <= 0.0) return {};
        const double t = lam * std::log(az) + mu;
        if (t <= 1.0) return {};
        return b * (rise(t) + 0.5 * lam * rise.deriv(t));
      });
  return out;
}

// Deformation term -eps z rho(|z| / alpha0) carrying a slope change eps at
// the origin out to the untouched zone |z| >= 2 alpha0.
inline Residual slope_shift_term(Complex eps, double alpha0) {
  const CutoffProfile rise = CutoffProfile::rise();
  return Residual::custom(
      [eps, rise, alpha0](Complex z) -> Complex {
        const double t = std::abs(z) / alpha0;
        if (t <= 1.0) return {};
        return -eps * z * rise(t);
      },
      [eps, rise, alpha0](Complex z) -> Complex {
        const double t = std::abs(z) / alpha0;
        if (t <= 1.0) return {};
        return -eps * (rise(t) + 0.5 * t * rise.deriv(t));
      },
      [eps, rise, alpha0](Complex z) -> Complex {
        const double az = std::abs(z);
        const double t = az / alpha0;
        if (t <= 1.0) return {};
        return -eps * rise.deriv(t) * z * z / (2.0 * az * alpha0);
      });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Stage one: restrict curvature to a collar.

struct LinearizeResult {
  Arrangement arrangement;
  double lambda = 0.0;      // inner radius of exact linearity
  double min_margin = 0.0;  // grid-verified graph margin over all surfaces
  int halvings = 0;
};

// Multiplies every residual by the rise cutoff in |z| / lambda, so each
// surface agrees with its tangent graph a z + b zbar on |z| <= lambda and is
// bit-identical to the input on |z| >= 2 lambda.  lambda starts at 0.9 times
// the least of the chart-fit bound and the margin-preservation thresholds
// eps0 / (8 C) and eps0 / (C (9 + 24 M)), then halves (at most 40 times)
// until the grid margin clears the floor.
inline LinearizeResult linearize_step(const Arrangement& arr,
                                      const GridSpec& grid) {
  const ArrangementConstants k = arrangement_constants(arr);
  const double fit =
      detail::chart_fit_lambda(k.slope_M, k.residual_C, arr.chart_radius);
  if (fit <= 0.0)
    throw ChartTooSmall("no positive collar width fits the chart");
  double lam = fit;
  if (k.residual_C > 0.0)
    lam = std::min({fit, k.eps0 / (8.0 * k.residual_C),
                    k.eps0 / (k.residual_C * (9.0 + 24.0 * k.slope_M))});
  lam *= 0.9;

  LinearizeResult res;
  for (int attempt = 0; attempt < 40; ++attempt, lam *= 0.5) {
    Arrangement out;
    out.chart_radius = arr.chart_radius;
    out.surfaces.reserve(arr.surfaces.size());
    for (const auto& s : arr.surfaces)
      out.surfaces.push_back(detail::cutoff_residual_surface(s, lam));
    const double m = verify_symplectic_grid(out, grid);
    if (m >= grid.symplectic_margin_floor) {
      res.arrangement = std::move(out);
      res.lambda = lam;
      res.min_margin = m;
      res.halvings = attempt;
      return res;
    }
  }
  throw NoAdmissibleEps(
      "collar restriction failed the margin floor after 40 halvings");
}

// ---------------------------------------------------------------------------
// Stage two: remove the antiholomorphic slope.

struct AntiholoResult {
  Arrangement arrangement;
  double lambda = 0.0;
  double mu = 2.0;
  double flat_radius = 0.0;  // surfaces are exact holomorphic lines inside
  double min_margin = 0.0;
  int halvings = 0;
};

// Replaces each linear graph a z + b zbar by a z + b zbar rho(lam log|z| + mu),
// which is the holomorphic line {w = a z} on |z| <= exp((1 - mu)/lam) and the
// original plane outside |z| = exp((2 - mu)/lam).  Requires linear input
// (run linearize_step first); lam starts at 0.9 min(1, eps0 / (6 M^2)) and mu
// is the least value >= 2 that keeps the active zone inside the chart.
inline AntiholoResult remove_antiholomorphic_step(const Arrangement& arr,
                                                  const GridSpec& grid) {
  for (std::size_t j = 0; j < arr.surfaces.size(); ++j)
    if (!arr.surfaces[j].residual.is_zero())
      throw InvalidArrangement(
          "surface " + std::to_string(j) +
          " still carries a nonlinear term; restrict to the collar first");
  const ArrangementConstants k = arrangement_constants(arr);

  const double r0 = arr.chart_radius;
  const double cap = std::min(r0, r0 * r0);
  if (cap <= 0.0) throw ChartTooSmall("empty chart");
  const double active_cap =
      0.9 * std::sqrt(cap / (1.0 + 4.0 * k.slope_M * k.slope_M));

  double lam = 0.9;
  if (k.slope_M > 0.0)
    lam = 0.9 * std::min(1.0, k.eps0 / (6.0 * k.slope_M * k.slope_M));

  for (int attempt = 0; attempt < 40; ++attempt, lam *= 0.5) {
    const double mu =
        std::max(2.0, 2.0 - lam * std::log(std::min(active_cap, 1.0)));
    Arrangement out;
    out.chart_radius = arr.chart_radius;
    out.surfaces.reserve(arr.surfaces.size());
    for (const auto& s : arr.surfaces)
      out.surfaces.push_back(detail::antiholo_cutoff_surface(s, lam, mu));
    const double m = verify_symplectic_grid(out, grid);
    if (m >= grid.symplectic_margin_floor) {
      AntiholoResult res;
      res.arrangement = std::move(out);
      res.lambda = lam;
      res.mu = mu;
      res.flat_radius = std::exp((1.0 - mu) / lam);
      res.min_margin = m;
      res.halvings = attempt;
      return res;
    }
  }
  throw NoAdmissibleEps(
      "antiholomorphic removal failed the margin floor after 40 halvings");
}

// ---------------------------------------------------------------------------
// Slope shift.

struct ShiftResult {
  Arrangement arrangement;
  double alpha0 = 0.0;  // cutoff scale; surface untouched on |z| >= 2 alpha0
  Complex eps{};
};

// Deforms surface `index` so its slope at the origin becomes a + eps while
// leaving it bit-identical outside |z| = 2 alpha0.  Demands |eps| at most
// half the arrangement margin and rejects shifts that land on another
// surface's slope.
inline ShiftResult shift_slope(const Arrangement& arr, std::size_t index,
                               Complex eps) {
  if (index >= arr.surfaces.size())
    throw InvalidQuery("slope shift: surface index out of range");
  const ArrangementConstants k = arrangement_constants(arr);
  if (std::abs(eps) > 0.5 * k.eps0)
    throw EpsTooLarge("slope shift " + std::to_string(std::abs(eps)) +
                      " exceeds half the arrangement margin " +
                      std::to_string(k.eps0));
  ShiftResult res;
  res.eps = eps;
  if (eps == Complex{}) {
    res.arrangement = arr;
    return res;
  }

  const Complex new_a = arr.surfaces[index].a + eps;
  for (std::size_t j = 0; j < arr.surfaces.size(); ++j) {
    if (j == index) continue;
    if (std::abs(new_a - arr.surfaces[j].a) <=
        1e-14 * (1.0 + std::abs(new_a)))
      throw SlopeCollision("shifted slope of surface " +
                           std::to_string(index) +
                           " collides with surface " + std::to_string(j));
  }

  const double r0 = arr.chart_radius;
  const double cap = std::min(r0, r0 * r0);
  const double reach = 2.0 * k.slope_M + 1.0;
  res.alpha0 = 0.45 * std::sqrt(cap / (1.0 + reach * reach));

  Arrangement out = arr;
  auto& s = out.surfaces[index];
  s.a = new_a;
  s.residual =
      detail::residual_sum(s.residual, detail::slope_shift_term(eps, res.alpha0));
  s.bound_C += 3.0 * std::abs(eps) / res.alpha0;
  arrangement_constants(out);  // margins must survive the shift
  res.arrangement = std::move(out);
  return res;
}

// ---------------------------------------------------------------------------
// Separating a multiple point.

struct SeparationResult {
  GraphSurface surface;           // last line pushed off by eps near 0
  std::vector<Complex> points;    // crossing with line i at z = eps/(s_i - s_l)
  std::vector<Complex> points_w;  // matching w values on line i
  double eps = 0.0;
  double lambda0 = 0.0;
  double min_margin = 0.0;
};

// Given holomorphic lines {w = slopes[i] z} all meeting at the origin,
// replaces the last one by w = slopes[l] z + eps fall(|z| / lambda0): an
// affine line w = slopes[l] z + eps on |z| <= lambda0 and the original line
// on |z| >= 2 lambda0.  The multiple point splits into l simple crossings
// z_i = eps / (slopes[i] - slopes[l]), all inside |z| < lambda0.
inline SeparationResult separate_multiple_point(
    const std::vector<Complex>& slopes, double eps, double lambda0,
    double chart_radius = 1.0, const GridSpec& grid = {}) {
  if (slopes.size() < 2)
    throw InvalidArrangement("separation needs at least two lines");
  if (!(lambda0 > 0.0))
    throw ChartTooSmall("separation scale must be positive");
  const std::size_t l = slopes.size() - 1;

  double amax = 0.0;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    amax = std::max(amax, std::abs(slopes[i]));
    for (std::size_t j = i + 1; j < slopes.size(); ++j)
      if (slopes[i] == slopes[j])
        throw InvalidArrangement("lines " + std::to_string(i) + " and " +
                                 std::to_string(j) + " coincide");
  }
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < l; ++i)
    dmin = std::min(dmin, std::abs(slopes[i] - slopes[l]));

  if (eps < 0.0) throw EpsTooLarge("separation offset must be nonnegative");
  if (eps >= dmin * lambda0)
    throw EpsTooLarge("offset " + std::to_string(eps) +
                      " reaches the cutoff zone (limit " +
                      std::to_string(dmin * lambda0) + ")");
  const double cap = std::min(chart_radius, chart_radius * chart_radius);
  const double dz2 = 2.0 * lambda0;
  const double dw = amax * dz2 + eps;
  if (dz2 * dz2 + dw * dw >= cap)
    throw ChartTooSmall("separation zone of width " + std::to_string(dz2) +
                        " does not fit the chart");

  SeparationResult res;
  res.eps = eps;
  res.lambda0 = lambda0;

  const Complex al = slopes[l];
  const CutoffProfile fall = CutoffProfile::fall();
  GraphSurface g;
  g.chart_radius = chart_radius;
  g.w = [al, eps, fall, lambda0](Complex z) {
    return al * z + eps * fall(std::abs(z) / lambda0);
  };
  g.dz = [al, eps, fall, lambda0](Complex z) -> Complex {
    const double az = std::abs(z);
    if (az <= 0.0) return al;
    const double d = fall.deriv(az / lambda0);
    return al + eps * d * std::conj(z) / (2.0 * az * lambda0);
  };
  g.dzbar = [eps, fall, lambda0](Complex z) -> Complex {
    const double az = std::abs(z);
    if (az <= 0.0) return {};
    const double d = fall.deriv(az / lambda0);
    return eps * d * z / (2.0 * az * lambda0);
  };
  res.surface = g;

  for (std::size_t i = 0; i < l; ++i) {
    const Complex zi = eps / (slopes[i] - al);
    res.points.push_back(zi);
    res.points_w.push_back(slopes[i] * zi);
  }
  res.min_margin = verify_symplectic_grid(g, grid);
  return res;
}

// ---------------------------------------------------------------------------
// Orthogonalizing a double point.

struct OrthogonalizeResult {
  LocalGraphSurface surface;  // {w = 0} near 0, {w = a z} outside
  double lambda = 0.0;
  double mu = 2.0;
  double inner_radius = 0.0;   // exact {w = 0} inside
  double active_radius = 0.0;  // exact {w = a z} outside
  double min_margin = 0.0;
};

// Flattens the line {w = a z} onto the horizontal plane {w = 0} near the
// origin via w = a z rho(lam log|z| + mu), turning a transverse crossing with
// {z = 0} into an orthogonal one.  The graph margin satisfies
// 1 + |a|^2 rho^2 + |a|^2 lam rho rho' >= 1 for every lam > 0, so no retry
// loop is needed; lam defaults to 0.9 min(1, t) with 3 |a|^2 t (t + 1) = 1.
inline OrthogonalizeResult orthogonalize_double_point(
    Complex a, const GridSpec& grid, double chart_radius = 1.0,
    std::optional<double> lambda_override = {}) {
  OrthogonalizeResult res;
  if (a == Complex{}) {
    res.surface.chart_radius = chart_radius;
    res.inner_radius = chart_radius;
    res.active_radius = chart_radius;
    res.min_margin = 1.0;
    res.lambda = lambda_override.value_or(1.0);
    return res;
  }

  double lam;
  if (lambda_override) {
    lam = *lambda_override;
    if (!(lam > 0.0)) throw InvalidQuery("cutoff rate must be positive");
  } else {
    const double n = std::norm(a);
    const double t = (-3.0 * n + std::sqrt(9.0 * n * n + 12.0 * n)) / (6.0 * n);
    lam = 0.9 * std::min(1.0, t);
  }

  const double active_cap =
      0.9 * chart_radius / std::sqrt(1.0 + std::norm(a));
  const double mu =
      std::max(2.0, 2.0 - lam * std::log(std::min(active_cap, 1.0)));

  LocalGraphSurface s;
  s.chart_radius = chart_radius;
  s.bound_C = std::abs(a) * (1.0 + lam) * std::exp((mu - 1.0) / lam);
  const CutoffProfile rise = CutoffProfile::rise();
  s.residual = Residual::custom(
      [a, rise, lam, mu](Complex z) -> Complex {
        const double az = std::abs(z);
        if (az <= 0.0) return {};
        const double t = lam * std::log(az) + mu;
        if (t <= 1.0) return {};
        return a * z * rise(t);
      },
      [a, rise, lam, mu](Complex z) -> Complex {
        const double az = std::abs(z);
        if (az <= 0.0) return {};
        const double t = lam * std::log(az) + mu;
        if (t <= 1.0) return {};
        return a * (rise(t) + 0.5 * lam * rise.deriv(t));
      },
      [a, rise, lam, mu](Complex z) -> Complex {
        const double az = std::abs(z);
        if (az <= 0.0) return {};
        const double t = lam * std::log(az) + mu;
        if (t <= 1.0) return {};
        return a * rise.deriv(t) * lam * z * z / (2.0 * az * az);
      });

  res.surface = s;
  res.lambda = lam;
  res.mu = mu;
  res.inner_radius = std::exp((1.0 - mu) / lam);
  res.active_radius = std::exp((2.0 - mu) / lam);
  res.min_margin =
      verify_symplectic_grid(GraphSurface::of_local(s), grid);
  return res;
}

}  // namespace sympsurf
