#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sympsurf/cutoff.hpp"
#include "sympsurf/errors.hpp"
#include "sympsurf/plane_algebra.hpp"
#include "sympsurf/surfaces.hpp"

namespace sympsurf {

// Trivialized line-bundle chart carrying a fiber metric h(z) dw.dwbar and a
// base area density; the associated radial function is r^2 = h(z) |w|^2.
// Derivatives of h fall back to central differences at fd_step when no
// closed-form evaluators are supplied.
struct MetricChart {
  std::function<double(Complex)> h;
  double chart_radius = 1.0;
  double fd_step = 1e-3;

  std::function<Complex(Complex)> h_z;      // optional: d/dz h
  std::function<Complex(Complex)> h_zbar;   // optional: d/dzbar h
  std::function<double(Complex)> h_zzbar;   // optional: d^2/dz dzbar h
  std::function<double(Complex)> base_coeff;  // base form density; default 1

  double value(Complex z) const { return h(z); }
  double base(Complex z) const { return base_coeff ? base_coeff(z) : 1.0; }

  Complex dz(Complex z) const {
    if (h_z) return h_z(z);
    const double s = fd_step;
    const double dx = (h(z + s) - h(z - s)) / (2.0 * s);
    const double dy = (h(z + Complex(0, s)) - h(z - Complex(0, s))) / (2.0 * s);
    return 0.5 * Complex(dx, -dy);
  }
  Complex dzbar(Complex z) const {
    if (h_zbar) return h_zbar(z);
    return std::conj(dz(z));  // h is real-valued
  }
  double dzzbar(Complex z) const {
    if (h_zzbar) return h_zzbar(z);
    const double s = fd_step;
    const double lap = (h(z + s) + h(z - s) + h(z + Complex(0, s)) +
                        h(z - Complex(0, s)) - 4.0 * h(z)) /
                       (s * s);
    return 0.25 * lap;
  }

  static MetricChart constant(double value = 1.0, double radius = 1.0) {
    if (!(value > 0.0))
      throw InvalidQuery("fiber metric coefficient must be positive");
    MetricChart m;
    m.h = [value](Complex) { return value; };
    m.h_z = [](Complex) { return Complex{}; };
    m.h_zbar = [](Complex) { return Complex{}; };
    m.h_zzbar = [](Complex) { return 0.0; };
    m.chart_radius = radius;
    return m;
  }

  // h = exp(alpha |z|^2).
  static MetricChart exp_norm2(double alpha = 1.0, double radius = 1.0) {
    MetricChart m;
    m.h = [alpha](Complex z) { return std::exp(alpha * std::norm(z)); };
    m.h_z = [alpha](Complex z) {
      return alpha * std::conj(z) * std::exp(alpha * std::norm(z));
    };
    m.h_zbar = [alpha](Complex z) {
      return alpha * z * std::exp(alpha * std::norm(z));
    };
    m.h_zzbar = [alpha](Complex z) {
      return alpha * (1.0 + alpha * std::norm(z)) *
             std::exp(alpha * std::norm(z));
    };
    m.chart_radius = radius;
    return m;
  }

  // h = sum_k coeffs[k] |z|^{2k}; must stay positive on the chart.
  static MetricChart poly(std::vector<double> coeffs, double radius = 1.0) {
    if (coeffs.empty()) throw InvalidQuery("empty metric coefficient list");
    const auto eval = [coeffs](double n2) {
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * n2 + coeffs[k];
      return acc;
    };
    for (int i = 0; i <= 32; ++i) {
      const double r = radius * i / 32.0;
      if (!(eval(r * r) > 0.0))
        throw InvalidQuery("metric coefficient vanishes near |z| = " +
                           std::to_string(r));
    }
    MetricChart m;
    m.h = [eval](Complex z) { return eval(std::norm(z)); };
    m.h_z = [coeffs](Complex z) {
      const double n2 = std::norm(z);
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 1;)
        acc = acc * n2 + double(k) * coeffs[k];
      return acc * std::conj(z);
    };
    m.h_zbar = [m_z = m.h_z](Complex z) { return std::conj(m_z(z)); };
    m.h_zzbar = [coeffs](Complex z) {
      const double n2 = std::norm(z);
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 1;)
        acc = acc * n2 + double(k) * double(k) * coeffs[k];
      return acc;
    };
    m.chart_radius = radius;
    return m;
  }
};

// A real (1,1)-form at one point, expanded in the complex coframe
// {dz^dzbar, dw^dwbar, dzbar^dw, dz^dwbar, dz^dw}.
struct FormCoefficients {
  Complex z{}, w{};
  Complex c_zzbar{};
  Complex c_wwbar{};
  Complex c_zbarw{};
  Complex c_zwbar{};
  Complex c_zw{};

  bool is_one_one() const { return c_zw == Complex{}; }

  // Distance from being a real form: the diagonal coefficients must be
  // purely imaginary, the cross terms conjugate to each other, and the
  // (2,0) part absent.
  double realness_defect() const {
    return std::max({std::abs(c_zzbar.real()), std::abs(c_wwbar.real()),
                     std::abs(c_zwbar - std::conj(c_zbarw)), std::abs(c_zw)});
  }
};

namespace detail {

inline FormCoefficients omega_L_unchecked(const MetricChart& m, Complex z,
                                          Complex w) {
  const Complex half_i(0.0, 0.5);
  FormCoefficients fc;
  fc.z = z;
  fc.w = w;
  fc.c_zzbar = half_i * (m.base(z) + std::norm(w) * m.dzzbar(z));
  fc.c_wwbar = half_i * m.value(z);
  fc.c_zbarw = -half_i * std::conj(w) * m.dzbar(z);
  fc.c_zwbar = half_i * w * m.dz(z);
  return fc;
}

}  // namespace detail

// Local neighborhood form on the chart: the base form plus the fiberwise
// -1/4 d J d(h |w|^2) correction,
//   base + (i/2)|w|^2 h_zzbar dz^dzbar + (i/2) h dw^dwbar
//        - (i/2) wbar h_zbar dzbar^dw + (i/2) w h_z dz^dwbar,
// with no dz^dw component, so it is (1,1) by construction.
inline FormCoefficients omega_L_local(const MetricChart& m, Complex z,
                                      Complex w) {
  if (std::abs(z) > m.chart_radius || std::abs(w) > m.chart_radius)
    throw OutOfChart("evaluation point leaves the chart of radius " +
                     std::to_string(m.chart_radius));
  return detail::omega_L_unchecked(m, z, w);
}

// The form as a real antisymmetric matrix in the frame (x1, y1, x2, y2),
// z = x1 + i y1, w = x2 + i y2.
inline std::array<std::array<double, 4>, 4> omega_real_matrix(
    const FormCoefficients& fc) {
  const Complex i(0.0, 1.0);
  const std::array<Complex, 4> dz{1.0, i, 0.0, 0.0};
  const std::array<Complex, 4> dzb{1.0, -i, 0.0, 0.0};
  const std::array<Complex, 4> dw{0.0, 0.0, 1.0, i};
  const std::array<Complex, 4> dwb{0.0, 0.0, 1.0, -i};
  struct Term {
    Complex c;
    const std::array<Complex, 4>* a;
    const std::array<Complex, 4>* b;
  };
  const Term terms[] = {{fc.c_zzbar, &dz, &dzb},
                        {fc.c_wwbar, &dw, &dwb},
                        {fc.c_zbarw, &dzb, &dw},
                        {fc.c_zwbar, &dz, &dwb},
                        {fc.c_zw, &dz, &dw}};
  std::array<std::array<double, 4>, 4> out{};
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      Complex acc{};
      for (const Term& t : terms)
        acc += t.c * ((*t.a)[j] * (*t.b)[k] - (*t.a)[k] * (*t.b)[j]);
      out[j][k] = acc.real();
    }
  return out;
}

// Smallest eigenvalue of the symmetrized taming form omega(., J .) at one
// point; positive iff the form tames the standard complex structure there.
inline double taming_min_eigenvalue(const FormCoefficients& fc) {
  const auto om = omega_real_matrix(fc);
  Eigen::Matrix4d O;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) O(j, k) = om[j][k];
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(0, 1) = -1.0;
  J(1, 0) = 1.0;
  J(2, 3) = -1.0;
  J(3, 2) = 1.0;
  const Eigen::Matrix4d G = O * J;
  const Eigen::Matrix4d S = 0.5 * (G + G.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(S);
  return eig.eigenvalues().minCoeff();
}

namespace detail {

// Largest magnitude among the four components of the finite-difference
// exterior derivative of omega_L at one point, all stencil points supplied
// by the caller within the chart.
inline double exterior_derivative_at(const MetricChart& m, Complex z,
                                     Complex w, double fd_step) {
  std::array<std::array<std::array<double, 4>, 4>, 4> D;
  for (int d = 0; d < 4; ++d) {
    const Complex dzs = d == 0   ? Complex(fd_step, 0)
                        : d == 1 ? Complex(0, fd_step)
                                 : Complex{};
    const Complex dws = d == 2   ? Complex(fd_step, 0)
                        : d == 3 ? Complex(0, fd_step)
                                 : Complex{};
    const auto plus = omega_real_matrix(omega_L_unchecked(m, z + dzs, w + dws));
    const auto minus =
        omega_real_matrix(omega_L_unchecked(m, z - dzs, w - dws));
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        D[d][j][k] = (plus[j][k] - minus[j][k]) / (2.0 * fd_step);
  }
  const int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  double worst = 0.0;
  for (const auto& t : triples) {
    const int j = t[0], k = t[1], l = t[2];
    worst = std::max(worst,
                     std::abs(D[j][k][l] - D[k][j][l] + D[l][j][k]));
  }
  return worst;
}

}  // namespace detail

// Max over a chart grid of the finite-difference exterior derivative of the
// neighborhood form; a closedness audit, second-order accurate in fd_step.
inline double exterior_derivative_max(const MetricChart& m,
                                      const GridSpec& grid, double fd_step) {
  if (!(fd_step > 0.0)) throw InvalidQuery("difference step must be positive");
  const double r = m.chart_radius;
  const double reach = std::max(r - 2.0 * fd_step, 0.5 * r);
  const int n = std::max(9, grid.resolution / 8 + 1) | 1;
  const double wr[] = {0.0, reach / 3.0, 2.0 * reach / 3.0, reach};
  const double wphase[] = {0.9, 3.3};

  double worst = 0.0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const Complex z(-reach + 2.0 * reach * ix / (n - 1),
                      -reach + 2.0 * reach * iy / (n - 1));
      if (std::abs(z) > reach) continue;
      for (double rho : wr) {
        if (rho == 0.0) {
          worst = std::max(worst,
                           detail::exterior_derivative_at(m, z, {}, fd_step));
          continue;
        }
        for (double ph : wphase)
          worst = std::max(worst, detail::exterior_derivative_at(
                                      m, z, std::polar(rho, ph), fd_step));
      }
    }
  return worst;
}

struct TamingReport {
  std::vector<double> radii;            // tested fiber radii |w|
  std::vector<double> min_eigenvalue;   // min taming eigenvalue per radius
  std::vector<double> max_exterior_derivative;  // closedness audit per radius
  double tamed_radius = 0.0;  // largest radius with all rows positive so far
};

// Scans fiber radii 0..chart_radius: for each |w|, the minimum taming
// eigenvalue over sampled (z, arg w), plus a coarse closedness audit on the
// same circle.  tamed_radius is the largest tested radius such that every
// tested radius up to it is strictly positive.
inline TamingReport taming_radius(const MetricChart& m, const GridSpec& grid) {
  TamingReport rep;
  const double r = m.chart_radius;
  const double fd = m.fd_step;
  const int nr = std::max(9, grid.resolution / 8 + 1);
  const int nz = std::max(9, grid.resolution / 8 + 1) | 1;
  const double zreach = std::max(r - 2.0 * fd, 0.5 * r);
  const double phases[] = {0.0, 2.1, 4.2};

  bool prefix_positive = true;
  for (int i = 0; i < nr; ++i) {
    const double radius = r * i / (nr - 1);
    const double weval = std::min(radius, std::max(r - 2.0 * fd, 0.5 * r));
    double mineig = std::numeric_limits<double>::infinity();
    for (int ix = 0; ix < nz; ++ix)
      for (int iy = 0; iy < nz; ++iy) {
        const Complex z(-zreach + 2.0 * zreach * ix / (nz - 1),
                        -zreach + 2.0 * zreach * iy / (nz - 1));
        if (std::abs(z) > zreach) continue;
        for (double ph : phases) {
          const Complex w = std::polar(weval, ph);
          mineig = std::min(
              mineig, taming_min_eigenvalue(detail::omega_L_unchecked(m, z, w)));
        }
      }
    double dmax = 0.0;
    for (int s = 0; s < 5; ++s) {
      const Complex z = std::polar(0.5 * zreach * s / 4.0, 0.8 * s);
      dmax = std::max(dmax, detail::exterior_derivative_at(
                                m, z, std::polar(weval, 0.9), fd));
    }
    rep.radii.push_back(radius);
    rep.min_eigenvalue.push_back(mineig);
    rep.max_exterior_derivative.push_back(dmax);
    if (prefix_positive && mineig > 0.0)
      rep.tamed_radius = radius;
    else
      prefix_positive = false;
  }
  return rep;
}

// Interpolates a base area density towards the flat one: the result equals 1
// (the flat density) inside |z| = inner, the input outside |z| = outer, and
// the profile-weighted convex combination in between, hence stays positive
// whenever the input density is.
inline std::function<double(Complex)> flatten_surface_form(
    std::function<double(Complex)> omega_coeff, CutoffProfile profile,
    double inner, double outer) {
  if (!(0.0 < inner && inner < outer))
    throw std::logic_error("collar radii must satisfy 0 < inner < outer");
  return [omega_coeff = std::move(omega_coeff), profile, inner,
          outer](Complex z) {
    const double rho = profile(1.0 + (std::abs(z) - inner) / (outer - inner));
    return rho * omega_coeff(z) + (1.0 - rho) * 1.0;
  };
}

struct GluingReport {
  double omega_deviation = 0.0;  // pullback of the flat form vs itself
  double complex_structure_deviation = 0.0;  // commutation with J
  double unitary_defect = 0.0;
  bool swap_move = false;
  bool compatible = false;
};

namespace detail {

inline GluingReport gluing_check(const std::array<std::array<double, 4>, 4>& R,
                                 double unitary_defect, bool swap_move) {
  Eigen::Matrix4d M;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) M(j, k) = R[j][k];
  Eigen::Matrix4d O = Eigen::Matrix4d::Zero();
  O(0, 1) = 1.0;
  O(1, 0) = -1.0;
  O(2, 3) = 1.0;
  O(3, 2) = -1.0;
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(0, 1) = -1.0;
  J(1, 0) = 1.0;
  J(2, 3) = -1.0;
  J(3, 2) = 1.0;

  GluingReport rep;
  rep.swap_move = swap_move;
  rep.unitary_defect = unitary_defect;
  rep.omega_deviation =
      (M.transpose() * O * M - O).cwiseAbs().maxCoeff();
  rep.complex_structure_deviation = (M * J - J * M).cwiseAbs().maxCoeff();
  const double worst = std::max(
      {rep.omega_deviation, rep.complex_structure_deviation, unitary_defect});
  if (worst > 1e-12)
    throw NotCompatible("gluing move deviates from the flat structures by " +
                        std::to_string(worst));
  rep.compatible = true;
  return rep;
}

}  // namespace detail

// Verifies that a complex-linear chart transition preserves the flat product
// form and the standard complex structure (to 1e-12) and reports its
// unitarity defect.  Composite transitions are checked by composing moves
// before the call.
inline GluingReport gluing_compatibility(const UnitaryMove& mv) {
  std::array<std::array<double, 4>, 4> R{};
  for (int bj = 0; bj < 2; ++bj)
    for (int bk = 0; bk < 2; ++bk) {
      const auto c = to_std(mv.m[bj][bk]);
      R[2 * bj][2 * bk] = c.real();
      R[2 * bj][2 * bk + 1] = -c.imag();
      R[2 * bj + 1][2 * bk] = c.imag();
      R[2 * bj + 1][2 * bk + 1] = c.real();
    }
  return detail::gluing_check(R, mv.unitary_defect(), false);
}

// The axis swap R(z, w) = (w, z): complex-linear with determinant -1, so it
// sits outside the special unitary moves but still preserves the flat
// product structure exactly.
inline GluingReport gluing_compatibility_swap() {
  std::array<std::array<double, 4>, 4> R{};
  R[0][2] = R[1][3] = R[2][0] = R[3][1] = 1.0;
  return detail::gluing_check(R, 0.0, true);
}

}  // namespace sympsurf
