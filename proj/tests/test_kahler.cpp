#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "sympsurf/kahler_models.hpp"
#include "sympsurf/rng.hpp"

using namespace sympsurf;
using Catch::Approx;

TEST_CASE("neighborhood form: unit metric gives the exact product form") {
  const MetricChart m = MetricChart::constant(1.0, 1.0);
  Rng rng(311);
  for (int i = 0; i < 100; ++i) {
    const Complex z(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
    const Complex w(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
    const FormCoefficients fc = omega_L_local(m, z, w);
    REQUIRE(fc.c_zzbar == Complex(0, 0.5));
    REQUIRE(fc.c_wwbar == Complex(0, 0.5));
    REQUIRE(fc.c_zbarw == Complex{});
    REQUIRE(fc.c_zwbar == Complex{});
    REQUIRE(fc.is_one_one());
    REQUIRE(fc.realness_defect() == 0.0);
    REQUIRE(taming_min_eigenvalue(fc) == Approx(1.0).margin(1e-14));
  }
  REQUIRE(exterior_derivative_max(m, GridSpec{}, 1e-3) == 0.0);
}

TEST_CASE("neighborhood form: zero section and origin specializations") {
  const MetricChart m = MetricChart::exp_norm2(1.0, 1.0);
  Rng rng(313);
  for (int i = 0; i < 50; ++i) {
    const Complex z(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
    // On w = 0 the curvature and cross terms drop out exactly.
    const FormCoefficients fc = omega_L_local(m, z, Complex{});
    REQUIRE(fc.c_zzbar == Complex(0, 0.5));
    REQUIRE(fc.c_wwbar == Complex(0, 0.5 * m.value(z)));
    REQUIRE(fc.c_zbarw == Complex{});
    REQUIRE(fc.c_zwbar == Complex{});
  }
  // At the chart origin the cross terms vanish for any metric.
  const FormCoefficients at0 = omega_L_local(m, Complex{}, Complex(0.3, 0.1));
  REQUIRE(at0.c_zbarw == Complex{});
  REQUIRE(at0.c_zwbar == Complex{});
  REQUIRE(at0.c_zzbar ==
          Complex(0, 0.5 * (1.0 + std::norm(Complex(0.3, 0.1)))));

  REQUIRE_THROWS_AS(omega_L_local(m, Complex(1.2, 0), Complex{}), OutOfChart);
  REQUIRE_THROWS_AS(omega_L_local(m, Complex{}, Complex(0, 1.2)), OutOfChart);
}

TEST_CASE("neighborhood form: (1,1) type and realness at random points") {
  const MetricChart charts[] = {MetricChart::exp_norm2(-2.0, 1.0),
                                MetricChart::poly({1.0, 0.5, 0.25}, 1.0)};
  Rng rng(317);
  for (const auto& m : charts) {
    for (int i = 0; i < 200; ++i) {
      const Complex z(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
      const Complex w(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
      const FormCoefficients fc = omega_L_local(m, z, w);
      REQUIRE(fc.is_one_one());
      REQUIRE(fc.realness_defect() < 1e-12);
      // The real matrix is antisymmetric.
      const auto om = omega_real_matrix(fc);
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          REQUIRE(om[j][k] == Approx(-om[k][j]).margin(1e-12));
    }
  }
}

TEST_CASE("neighborhood form: default finite-difference derivatives agree") {
  // Same metric, one chart with closed forms and one with the fallback.
  const MetricChart closed = MetricChart::exp_norm2(1.0, 0.5);
  MetricChart fd;
  fd.h = [](Complex z) { return std::exp(std::norm(z)); };
  fd.chart_radius = 0.5;
  fd.fd_step = 1e-4;
  Rng rng(331);
  for (int i = 0; i < 50; ++i) {
    const Complex z(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
    REQUIRE(std::abs(fd.dz(z) - closed.dz(z)) < 1e-7);
    REQUIRE(std::abs(fd.dzbar(z) - closed.dzbar(z)) < 1e-7);
    REQUIRE(fd.dzzbar(z) == Approx(closed.dzzbar(z)).margin(1e-6));
  }
}

TEST_CASE("closedness audit: second-order convergence on the exp metric") {
  const MetricChart m = MetricChart::exp_norm2(1.0, 0.25);
  GridSpec grid;
  grid.resolution = 128;
  const double e1 = exterior_derivative_max(m, grid, 1e-3);
  const double e2 = exterior_derivative_max(m, grid, 5e-4);
  REQUIRE(e1 < 1e-6);
  REQUIRE(e1 / e2 > 3.5);
  REQUIRE(e1 / e2 < 4.5);
}

TEST_CASE("closedness audit: quadratic metrics differentiate exactly") {
  // Every form entry of h = 1 + |z|^2 is quadratic in the real coordinates,
  // so central differences are exact and only rounding noise remains (in
  // particular no second-order shrink is observable here).
  const MetricChart m = MetricChart::poly({1.0, 1.0}, 1.0);
  GridSpec grid;
  grid.resolution = 64;
  REQUIRE(exterior_derivative_max(m, grid, 1e-3) < 1e-9);
  REQUIRE(exterior_derivative_max(m, grid, 5e-4) < 1e-9);
}

TEST_CASE("taming scan: flat metric is positive at every radius") {
  const TamingReport rep =
      taming_radius(MetricChart::constant(1.0, 1.0), GridSpec{});
  REQUIRE(rep.tamed_radius == rep.radii.back());
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    REQUIRE(rep.min_eigenvalue[i] == Approx(1.0).margin(1e-12));
    REQUIRE(rep.max_exterior_derivative[i] == 0.0);
  }
}

TEST_CASE("taming scan: negatively curved metric fails beyond a threshold") {
  GridSpec grid;
  grid.resolution = 128;
  const TamingReport rep =
      taming_radius(MetricChart::exp_norm2(-5.0, 1.0), grid);
  // Zero-section row is strictly positive for any positive metric.
  REQUIRE(rep.radii.front() == 0.0);
  REQUIRE(rep.min_eigenvalue.front() > 0.0);
  // At z = 0 the top-left block of the taming form is 1 - 5 |w|^2, so the
  // sign flips at |w| = 1/sqrt(5) ~ 0.447: the 1/16-spaced scan stops at
  // 7/16.
  REQUIRE(rep.tamed_radius == Approx(0.4375));
  bool saw_negative = false;
  for (double e : rep.min_eigenvalue) saw_negative = saw_negative || e < 0.0;
  REQUIRE(saw_negative);
}

TEST_CASE("taming scan: zero-section positivity for a fixture family") {
  const MetricChart fixtures[] = {
      MetricChart::constant(1.0, 1.0), MetricChart::constant(2.5, 1.0),
      MetricChart::exp_norm2(1.0, 1.0), MetricChart::exp_norm2(-5.0, 1.0),
      MetricChart::poly({1.0, 0.5, 0.25}, 1.0)};
  for (const auto& m : fixtures) {
    const TamingReport rep = taming_radius(m, GridSpec{});
    REQUIRE(rep.min_eigenvalue.front() > 0.0);
  }
}

TEST_CASE("metric chart factories validate their parameters") {
  REQUIRE_THROWS_AS(MetricChart::constant(0.0, 1.0), InvalidQuery);
  REQUIRE_THROWS_AS(MetricChart::constant(-1.0, 1.0), InvalidQuery);
  REQUIRE_THROWS_AS(MetricChart::poly({}, 1.0), InvalidQuery);
  // 1 - 2 |z|^2 vanishes inside the unit chart.
  REQUIRE_THROWS_AS(MetricChart::poly({1.0, -2.0}, 1.0), InvalidQuery);
  REQUIRE_NOTHROW(MetricChart::poly({1.0, -0.5}, 1.0));
}

TEST_CASE("surface form flattening: exact zones and midpoint mixing") {
  const auto bumpy = [](Complex z) { return 1.5 + 0.25 * std::sin(3.0 * z.real()); };
  const auto flat = flatten_surface_form(bumpy, CutoffProfile::rise(), 0.2, 0.4);

  // Inside the inner disc the density is exactly the flat one.
  REQUIRE(flat(Complex(0.1, 0.05)) == 1.0);
  REQUIRE(flat(Complex{}) == 1.0);
  // Outside the outer disc the input passes through unchanged.
  REQUIRE(flat(Complex(0.5, 0.2)) == bumpy(Complex(0.5, 0.2)));
  // Collar midpoint: the even mixture.
  const Complex mid(0.3, 0.0);
  REQUIRE(flat(mid) == Approx(0.5 * bumpy(mid) + 0.5));

  // Identity on an already-flat density.
  const auto idle = flatten_surface_form([](Complex) { return 1.0; },
                                         CutoffProfile::rise(), 0.2, 0.4);
  Rng rng(337);
  for (int i = 0; i < 100; ++i) {
    const Complex z(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
    REQUIRE(idle(z) == Approx(1.0).margin(1e-15));
    // Positivity of the mixture for a positive input.
    const auto mixed = flat(z);
    REQUIRE(mixed > 0.0);
  }
}

TEST_CASE("gluing moves: swap and slope isometries preserve the flat model") {
  const GluingReport swap = gluing_compatibility_swap();
  REQUIRE(swap.compatible);
  REQUIRE(swap.swap_move);
  REQUIRE(swap.omega_deviation == 0.0);
  REQUIRE(swap.complex_structure_deviation == 0.0);
  REQUIRE(swap.unitary_defect == 0.0);

  const GluingReport slope1 =
      gluing_compatibility(normalize_slope(Cx<double>(1.0)));
  REQUIRE(slope1.compatible);
  REQUIRE(slope1.omega_deviation <= 1e-12);
  REQUIRE(slope1.complex_structure_deviation <= 1e-12);

  // Composite transition between the slope-1 and slope-i charts.
  const UnitaryMove composite =
      normalize_slope(Cx<double>(0.0, 1.0))
          .compose(normalize_slope(Cx<double>(1.0)).adjoint());
  const GluingReport comp = gluing_compatibility(composite);
  REQUIRE(comp.compatible);
  REQUIRE(comp.unitary_defect <= 1e-12);

  UnitaryMove shear = UnitaryMove::identity();
  shear.m[0][1] = Cx<double>(0.1);
  REQUIRE_THROWS_AS(gluing_compatibility(shear), NotCompatible);
}
