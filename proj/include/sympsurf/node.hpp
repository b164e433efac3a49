#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sympsurf/cutoff.hpp"
#include "sympsurf/errors.hpp"
#include "sympsurf/grid_checks.hpp"

namespace sympsurf {

// Requested smoothing of the node {z w = 0}.
struct NodeResolution {
  Complex epsilon{};
  double lambda0 = 0.25;
};

// Wirtinger gradient of f(z, w) = z w - eps * fall(r / lambda0), r = |(z, w)|.
// The zero set of f is the local node {z w = 0} outside r = 2 lambda0 and the
// smoothed branch {z w = eps} inside r = lambda0.
inline WirtingerDerivs node_derivs(Complex eps, double lambda0, Complex z,
                                   Complex w) {
  WirtingerDerivs d;
  const double r = std::sqrt(std::norm(z) + std::norm(w));
  if (r <= 0.0) {
    d.fz = w;
    d.fw = z;
    return d;
  }
  const CutoffProfile fall = CutoffProfile::fall();
  const Complex factor = eps * fall.deriv(r / lambda0) / (2.0 * r * lambda0);
  d.fz = w - factor * std::conj(z);
  d.fw = z - factor * std::conj(w);
  d.fzbar = -factor * z;
  d.fwbar = -factor * w;
  return d;
}

inline Complex node_value(Complex eps, double lambda0, Complex z, Complex w) {
  const double r = std::sqrt(std::norm(z) + std::norm(w));
  return z * w - eps * CutoffProfile::fall()(r / lambda0);
}

// Minimum singular value of the real 2x4 Jacobian of (Re f, Im f) in the
// coordinates (x1, y1, x2, y2).
inline double node_sigma_min(const WirtingerDerivs& d) {
  const Complex i(0.0, 1.0);
  const Complex cx1 = d.fz + d.fzbar;
  const Complex cy1 = i * (d.fz - d.fzbar);
  const Complex cx2 = d.fw + d.fwbar;
  const Complex cy2 = i * (d.fw - d.fwbar);
  Eigen::Matrix<double, 2, 4> J;
  J << cx1.real(), cy1.real(), cx2.real(), cy2.real(),
       cx1.imag(), cy1.imag(), cx2.imag(), cy2.imag();
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(J);
  return svd.singularValues().minCoeff();
}

// Verified data for one smoothing f = z w - eps * fall(r / lambda0).
struct NodeReport {
  Complex requested_eps{};
  Complex accepted_eps{};
  int halvings = 0;
  double lambda0 = 0.0;

  double sigma_min = 0.0;   // min singular value over the verified locus
  double margin_min = 0.0;  // min implicit positivity margin there

  double inner_defect = 0.0;  // max deviation of {z w = eps} from the locus
  double outer_defect = 0.0;  // max deviation of the axes from the locus

  double c1_value_dist = 0.0;  // sup |f_eps - z w|
  double c1_deriv_dist = 0.0;  // sup gradient distance

  int components = 1;
  int boundary_circles = 2;
  int euler_characteristic = 0;
  double max_param_jump = 0.0;  // radial continuity of the locus section
  bool connected = false;
};

namespace detail {

// The locus of f in the cone direction (cos phi, sin phi) sits at the radius
// q solving q^2 sin(2 phi) / 2 = |eps| * fall(q / lambda0); the left side
// increases and the right side decreases in q, so the root is unique.
inline double node_locus_radius(double m, double lambda0, double phi) {
  const CutoffProfile fall = CutoffProfile::fall();
  const double s2 = std::sin(2.0 * phi);
  const auto H = [&](double q) {
    return 0.5 * q * q * s2 - m * fall(q / lambda0);
  };
  double lo = 0.0;
  double hi = std::max(2.0 * lambda0, std::sqrt(2.0 * m / s2) + lambda0);
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (H(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct NodeSweep {
  double sigma_min = std::numeric_limits<double>::infinity();
  double margin_min = std::numeric_limits<double>::infinity();
  double max_param_jump = 0.0;
  double symmetry_defect = 0.0;
  bool section_valid = false;
};

// Two sweeps of the locus inside the ball of radius 2 lambda0:
//
//  * an angular sweep solving the radius q(phi) of the unique locus point in
//    each cone direction; q is a continuous section, symmetric about the
//    diagonal and unimodal (decreasing to the diagonal, then increasing),
//    because q depends on phi only through sin(2 phi); checking those two
//    facts certifies the locus is a single annular strip with two boundary
//    circles;
//
//  * a radial sweep solving the direction phi(q) for every radius in
//    [lambda0, 2 lambda0], which guarantees coverage of the whole annulus for
//    the smoothness and positivity minima even when q(phi) crosses it only
//    on a tiny parameter range.
inline NodeSweep node_annulus_sweep(Complex eps, double lambda0,
                                    const GridSpec& grid) {
  NodeSweep sw;
  const double m = std::abs(eps);
  const double psi = std::arg(eps);
  const int nphi = std::max(grid.resolution, 64);
  const double thetas[] = {0.0, 2.399963229728653};  // orbit spot checks

  const auto probe = [&](double q, double phi) {
    const double s = q * std::cos(phi);
    const double t = q * std::sin(phi);
    for (double th : thetas) {
      const Complex z = std::polar(s, th);
      const Complex w = std::polar(t, psi - th);
      const WirtingerDerivs d = node_derivs(eps, lambda0, z, w);
      sw.sigma_min = std::min(sw.sigma_min, node_sigma_min(d));
      sw.margin_min = std::min(sw.margin_min, implicit_margin(d));
    }
  };

  std::vector<double> q_of_phi(nphi);
  for (int i = 0; i < nphi; ++i) {
    const double phi = (i + 0.5) / nphi * (0.5 * M_PI);
    q_of_phi[i] = node_locus_radius(m, lambda0, phi);
    if (i > 0)
      sw.max_param_jump =
          std::max(sw.max_param_jump, std::abs(q_of_phi[i] - q_of_phi[i - 1]));
    if (q_of_phi[i] >= lambda0 && q_of_phi[i] <= 2.0 * lambda0)
      probe(q_of_phi[i], phi);
  }

  bool unimodal = true;
  const double slack = 1e-12 * lambda0;
  for (int i = 1; i < nphi; ++i) {
    const bool first_half = (i + 0.5) <= 0.5 * nphi;
    const double step = q_of_phi[i] - q_of_phi[i - 1];
    if (first_half ? step > slack : step < -slack) unimodal = false;
  }
  for (int i = 0; i < nphi / 2; ++i)
    sw.symmetry_defect = std::max(
        sw.symmetry_defect, std::abs(q_of_phi[i] - q_of_phi[nphi - 1 - i]));
  sw.section_valid = unimodal && sw.symmetry_defect <= 1e-9 * lambda0;

  const int nq = std::max(grid.resolution, 64);
  for (int i = 0; i <= nq; ++i) {
    const double q = lambda0 * (1.0 + double(i) / nq);
    const double s2 = 2.0 * m * CutoffProfile::fall()(q / lambda0) / (q * q);
    if (s2 > 1.0) continue;  // the locus does not reach this radius
    const double phi = 0.5 * std::asin(s2);
    probe(q, phi);
    probe(q, 0.5 * M_PI - phi);
  }
  return sw;
}

}  // namespace detail

// Evaluates one smoothing offset without the retry loop.
inline NodeReport evaluate_node_smoothing(Complex eps, double lambda0,
                                          const GridSpec& grid,
                                          double chart_radius = 1.0) {
  if (!(lambda0 > 0.0) || 2.0 * lambda0 > chart_radius)
    throw ChartTooSmall("smoothing zone 2 x " + std::to_string(lambda0) +
                        " does not fit the chart");
  if (eps == Complex{})
    throw InvalidQuery("smoothing offset must be nonzero");

  NodeReport rep;
  rep.requested_eps = eps;
  rep.accepted_eps = eps;
  rep.lambda0 = lambda0;

  const double m = std::abs(eps);
  const double psi = std::arg(eps);

  const detail::NodeSweep sw = detail::node_annulus_sweep(eps, lambda0, grid);
  rep.sigma_min = sw.sigma_min;
  rep.margin_min = sw.margin_min;
  rep.max_param_jump = sw.max_param_jump;
  rep.components = 1;
  rep.connected = sw.section_valid;
  rep.boundary_circles = sw.section_valid ? 2 : 0;
  rep.euler_characteristic = sw.section_valid ? 0 : 1;

  // Inner branch: on r <= lambda0 the cutoff is exactly 1, so {z w = eps}
  // solves f = 0 identically; measure the defect on a hyperbola sample and
  // fold its smoothness and positivity minima into the totals (the waist
  // |z| = |w| = sqrt(m), where both pinch to sqrt(2 m), sits mid-sample).
  if (2.0 * m <= lambda0 * lambda0) {
    const double disc =
        std::sqrt(lambda0 * lambda0 * lambda0 * lambda0 - 4.0 * m * m);
    const double s_lo = std::sqrt(0.5 * (lambda0 * lambda0 - disc));
    const double s_hi = std::sqrt(0.5 * (lambda0 * lambda0 + disc));
    const int ns = 32;
    const CutoffProfile fall = CutoffProfile::fall();
    for (int i = 0; i <= ns; ++i) {
      const double s = s_lo * std::pow(s_hi / s_lo, double(i) / ns);
      const Complex z = std::polar(s, 0.7);
      const Complex w = std::polar(m / s, psi - 0.7);
      const double r = std::sqrt(std::norm(z) + std::norm(w));
      rep.inner_defect = std::max(
          {rep.inner_defect, std::abs(node_value(eps, lambda0, z, w)),
           m * std::abs(fall(r / lambda0) - 1.0)});
      const WirtingerDerivs d = node_derivs(eps, lambda0, z, w);
      rep.sigma_min = std::min(rep.sigma_min, node_sigma_min(d));
      rep.margin_min = std::min(rep.margin_min, implicit_margin(d));
    }
  }

  // Outer branch: beyond r = 2 lambda0 the cutoff is exactly 0 and the locus
  // is the pair of axes.
  {
    const double r_hi = std::min(2.5 * lambda0, chart_radius);
    const int ns = 16;
    for (int i = 0; i <= ns; ++i) {
      const double r = 2.0 * lambda0 + (r_hi - 2.0 * lambda0) * i / ns;
      rep.outer_defect = std::max(
          {rep.outer_defect,
           std::abs(node_value(eps, lambda0, std::polar(r, 0.3), Complex{})),
           std::abs(node_value(eps, lambda0, Complex{}, std::polar(r, 1.1)))});
    }
  }

  // C^1 distance to the unperturbed node function z w.  Both the value gap
  // |eps| fall(r / lambda0) and the gradient gap depend on r alone.
  {
    const CutoffProfile fall = CutoffProfile::fall();
    const int ns = std::max(grid.resolution, 64);
    for (int i = 0; i <= ns; ++i) {
      const double r = 2.2 * lambda0 * i / ns;
      rep.c1_value_dist = std::max(rep.c1_value_dist, m * fall(r / lambda0));
      rep.c1_deriv_dist =
          std::max(rep.c1_deriv_dist, m * std::abs(fall.deriv(r / lambda0)) *
                                          std::sqrt(2.0) / (2.0 * lambda0));
    }
  }
  return rep;
}

// Smooths the node {z w = 0} into the zero set of
// f = z w - eps * fall(r / lambda0).  The offset is accepted once the locus
// (inner hyperbola branch and transition annulus) is verifiably smooth
// (positive minimum singular value), positively symplectic above the margin
// floor, and a single strip with two boundary circles; otherwise |eps|
// halves, at most 40 times, before NoAdmissibleEps.
inline NodeReport resolve_node(Complex eps, double lambda0,
                               const GridSpec& grid,
                               double chart_radius = 1.0) {
  Complex cur = eps;
  for (int attempt = 0; attempt < 40; ++attempt, cur *= 0.5) {
    NodeReport rep = evaluate_node_smoothing(cur, lambda0, grid, chart_radius);
    rep.requested_eps = eps;
    rep.halvings = attempt;
    if (rep.sigma_min > 0.0 &&
        rep.margin_min > grid.symplectic_margin_floor && rep.connected)
      return rep;
  }
  throw NoAdmissibleEps(
      "no smoothing offset passed verification after 40 halvings");
}

inline NodeReport resolve_node(const NodeResolution& res, const GridSpec& grid,
                               double chart_radius = 1.0) {
  return resolve_node(res.epsilon, res.lambda0, grid, chart_radius);
}

// ---------------------------------------------------------------------------
// Retraction of a neighbourhood of the node onto the union of the axes.

struct RetractionChart {
  double eta = 0.5;  // gluing scale; domain is |z w| <= eta^2
};

// Piecewise retraction onto {w = 0} union {z = 0}: collapses the hyperbola
// leaves radially, is the identity-like tube projection (z, 0) for
// |z| >= 2 eta and (0, w) for |w| >= 2 eta, and sends the diagonal
// |z| = |w| to the node point.  Continuous across all seams.
inline std::pair<Complex, Complex> node_retraction(const RetractionChart& chart,
                                                   Complex z, Complex w) {
  const double eta = chart.eta;
  if (!(eta > 0.0)) throw InvalidQuery("gluing scale must be positive");
  const double az = std::abs(z);
  const double aw = std::abs(w);
  if (az * aw > eta * eta * (1.0 + 1e-12))
    throw OutOfDomain("point with |z w| = " + std::to_string(az * aw) +
                      " lies outside the retraction domain " +
                      std::to_string(eta * eta));
  if (az >= 2.0 * eta) return {z, Complex{}};
  if (aw >= 2.0 * eta) return {Complex{}, w};
  const double root = std::sqrt(az * aw);
  if (aw <= az) {
    const double den = 2.0 * eta - std::sqrt(2.0 * eta * aw);
    return {(az - root) / den * z, Complex{}};
  }
  const double den = 2.0 * eta - std::sqrt(2.0 * eta * az);
  return {Complex{}, (aw - root) / den * w};
}

}  // namespace sympsurf
