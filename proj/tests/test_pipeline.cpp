#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "sympsurf/nice_pipeline.hpp"

using namespace sympsurf;
using Catch::Approx;

namespace {

// Three planes through the origin with curvature and antiholomorphic tilt;
// second-derivative certificates are honest for |c| <= 1/2 quadratics.
Arrangement curved_triple() {
  Arrangement arr;
  arr.chart_radius = 1.0;
  arr.surfaces.push_back(
      {Complex(1, 0), Complex(0.3, 0), Residual::poly({Complex(0.5, 0)}), 1.0, 1.0});
  arr.surfaces.push_back(
      {Complex(-1, 0), Complex(0.3, 0), Residual::poly({Complex(0, 0.25)}), 1.0, 1.0});
  arr.surfaces.push_back(
      {Complex(0, 1), Complex(0.3, 0), Residual::poly({Complex(-0.3, 0)}), 1.0, 1.0});
  return arr;
}

const NicePointReport& point_of(const NicePipelineResult& res, std::size_t i,
                                std::size_t j) {
  for (const auto& rep : res.points)
    if (rep.i == i && rep.j == j) return rep;
  FAIL("missing pair report");
  return res.points.front();
}

}  // namespace

TEST_CASE("pipeline: empty arrangement is trivially nice") {
  const NicePipelineResult res = nice_pipeline(Arrangement{}, GridSpec{});
  REQUIRE(res.nice);
  REQUIRE(res.expected_points == 0);
  REQUIRE(res.points.empty());
  REQUIRE(res.surfaces.empty());
}

TEST_CASE("pipeline: one flat plane is left exactly horizontal") {
  Arrangement arr;
  arr.surfaces.push_back({Complex{}, Complex{}, Residual::none(), 0.0, 1.0});
  const NicePipelineResult res = nice_pipeline(arr, GridSpec{});

  REQUIRE(res.nice);
  REQUIRE(res.expected_points == 1);
  REQUIRE(res.points.size() == 1);
  REQUIRE(res.points[0].already_orthogonal);
  REQUIRE(res.points[0].pair_margin == 1.0);
  REQUIRE(res.min_margin == 1.0);
  REQUIRE(res.surfaces.size() == 1);
  REQUIRE(res.surfaces[0].w(Complex(1e-5, 2e-5)) == Complex{});
  REQUIRE(res.shifted.empty());
}

TEST_CASE("pipeline: one sloped plane gets an orthogonal model at the origin") {
  Arrangement arr;
  arr.surfaces.push_back({Complex(1, 0), Complex{}, Residual::none(), 0.0, 1.0});
  GridSpec grid;
  grid.resolution = 128;
  const NicePipelineResult res = nice_pipeline(arr, grid);

  REQUIRE(res.nice);
  REQUIRE(res.expected_points == 1);
  const NicePointReport& rep = res.points.at(0);
  REQUIRE(rep.found);
  REQUIRE(rep.matched);
  REQUIRE_FALSE(rep.already_orthogonal);
  REQUIRE(rep.model_slope == Complex(1, 0));
  REQUIRE(rep.pair_margin == 2.0);
  REQUIRE(rep.ortho_margin > 0.5);
  REQUIRE(res.work_slopes ==
          std::vector<Complex>{Complex{}, Complex(1, 0)});
  // Near the origin the reshaped surface coincides with {w = 0}.
  const GraphSurface& s = res.surfaces.at(0);
  const double inner = 0.5 * std::exp((1.0 - rep.ortho_mu) / rep.ortho_lambda);
  REQUIRE(s.w(Complex(inner, 0)) == Complex{});
}

TEST_CASE("pipeline: curved triple becomes a nice configuration") {
  GridSpec grid;
  grid.resolution = 128;
  const NicePipelineResult res = nice_pipeline(curved_triple(), grid);

  // Collar scale comes from the margin-preservation branch of stage one.
  REQUIRE(res.lambda1 == Approx(0.9 / 33.0));
  REQUIRE(res.step1_margin > 0.0);
  REQUIRE(res.step2_margin > 0.0);
  REQUIRE(res.flat_radius ==
          Approx(std::exp((1.0 - res.mu2) / res.lambda2)));
  REQUIRE(res.shifted.empty());

  REQUIRE(res.chart.swapped);
  REQUIRE(res.chart.scale > 0.0);
  REQUIRE(res.work_slopes.size() == 4);
  REQUIRE(res.work_slopes[0] == Complex{});
  REQUIRE(res.work_slopes[1] == Complex(1, 0));
  REQUIRE(res.work_slopes[2] == Complex(-1, 0));
  REQUIRE(std::abs(res.work_slopes[3] - Complex(0, -1)) < 1e-15);

  REQUIRE(res.stages.size() == 2);
  REQUIRE(res.stages[0].index == 3);
  REQUIRE(res.stages[1].index == 2);
  REQUIRE(res.stages[0].points.size() == 3);
  REQUIRE(res.stages[1].points.size() == 2);
  for (const auto& st : res.stages) {
    REQUIRE(st.eps == Approx(0.9 * st.lambda0));  // dmin is 1 at both stages
    REQUIRE(st.min_margin > 0.0);
    for (Complex p : st.points) REQUIRE(std::abs(p) < st.lambda0);
  }

  REQUIRE(res.expected_points == 6);
  REQUIRE(res.points.size() == 6);
  for (const auto& rep : res.points) {
    REQUIRE(rep.found);
    REQUIRE(rep.matched);
    REQUIRE(rep.transverse);
    REQUIRE(rep.positive);
    REQUIRE(rep.locate_distance <= 1e-8);
    REQUIRE(rep.support_radius > 0.0);
    REQUIRE(rep.model_fit_residual < 1e-6);
    REQUIRE(rep.pair_margin > 0.5);
  }
  REQUIRE(res.min_point_gap > 0.01);
  REQUIRE(res.min_margin > 0.1);
  REQUIRE(res.nice);

  // Hand-checked local models: the work-slope pair (1, -1) is orthogonal,
  // the pair (0, 1) is not and its model slope is -1.
  REQUIRE(point_of(res, 1, 2).already_orthogonal);
  REQUIRE(point_of(res, 0, 1).model_slope == Complex(-1, 0));
  REQUIRE_FALSE(point_of(res, 0, 1).already_orthogonal);
  REQUIRE(point_of(res, 0, 1).ortho_margin > 0.0);

  // The unitary model move really is unitary and sends the i-direction
  // tangent (1, s_i) to the vertical axis.
  for (const auto& rep : res.points) {
    REQUIRE(rep.to_model.unitary_defect() < 1e-12);
    const Complex si = res.work_slopes[rep.i];
    const auto [u, v] = rep.to_model.apply(from_std(Complex(1, 0)),
                                           from_std(si));
    REQUIRE(std::abs(to_std(u)) < 1e-12);
    REQUIRE(std::abs(to_std(v)) > 0.9);
  }
}

TEST_CASE("pipeline: vanishing slope is pushed off zero before the swap") {
  Arrangement arr;
  arr.surfaces.push_back({Complex{}, Complex{}, Residual::none(), 0.0, 1.0});
  arr.surfaces.push_back({Complex(1, 0), Complex{}, Residual::none(), 0.0, 1.0});
  GridSpec grid;
  grid.resolution = 96;
  const NicePipelineResult res = nice_pipeline(arr, grid);

  REQUIRE(res.shifted == std::vector<std::size_t>{0});
  REQUIRE(res.shift_eps.size() == 1);
  REQUIRE(res.shift_eps[0] == Complex(0.25, 0));
  REQUIRE(res.work_slopes.size() == 3);
  REQUIRE(res.work_slopes[1] == Complex(4, 0));
  REQUIRE(res.work_slopes[2] == Complex(1, 0));
  REQUIRE(res.expected_points == 3);
  REQUIRE(res.nice);
  for (const auto& rep : res.points) {
    REQUIRE(rep.found);
    REQUIRE(rep.matched);
    REQUIRE(rep.positive);
  }
}

TEST_CASE("pipeline: identical runs give identical reports") {
  GridSpec grid;
  grid.resolution = 96;
  const NicePipelineResult r1 = nice_pipeline(curved_triple(), grid);
  const NicePipelineResult r2 = nice_pipeline(curved_triple(), grid);

  REQUIRE(r1.lambda1 == r2.lambda1);
  REQUIRE(r1.step1_margin == r2.step1_margin);
  REQUIRE(r1.lambda2 == r2.lambda2);
  REQUIRE(r1.step2_margin == r2.step2_margin);
  REQUIRE(r1.chart.scale == r2.chart.scale);
  REQUIRE(r1.min_margin == r2.min_margin);
  REQUIRE(r1.min_point_gap == r2.min_point_gap);
  REQUIRE(r1.points.size() == r2.points.size());
  for (std::size_t k = 0; k < r1.points.size(); ++k) {
    REQUIRE(r1.points[k].z == r2.points[k].z);
    REQUIRE(r1.points[k].w == r2.points[k].w);
    REQUIRE(r1.points[k].pair_margin == r2.points[k].pair_margin);
    REQUIRE(r1.points[k].model_fit_residual == r2.points[k].model_fit_residual);
  }
}
