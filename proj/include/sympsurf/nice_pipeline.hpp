#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sympsurf/perturb.hpp"
#include "sympsurf/plane_algebra.hpp"

namespace sympsurf {

// Working coordinates used after the slopes are all nonzero: the roles of
// the two complex axes are exchanged and rescaled, (z~, w~) = (w, z) / scale,
// so the old vertical reference becomes the horizontal graph {w~ = 0} and
// each line {w = a z} the graph {w~ = (1/a) z~} over the unit disc.
struct SwapChart {
  double scale = 1.0;
  bool swapped = false;

  std::pair<Complex, Complex> to_work(Complex z, Complex w) const {
    if (!swapped) return {z, w};
    return {w / scale, z / scale};
  }
  std::pair<Complex, Complex> to_ambient(Complex zt, Complex wt) const {
    if (!swapped) return {zt, wt};
    return {wt * scale, zt * scale};
  }
};

struct SeparationStage {
  std::size_t index = 0;  // surface pushed off the common point at this stage
  double lambda0 = 0.0;
  double eps = 0.0;
  double min_margin = 0.0;
  std::vector<Complex> points;  // new crossings with surfaces 0..index-1
};

// One verified double point of the final configuration.
struct NicePointReport {
  std::size_t i = 0, j = 0;  // pair of surfaces (0 = reference)
  Complex z{}, w{};          // working-chart position
  bool found = false;        // located as exactly one crossing
  bool matched = false;      // within 1e-8 of the predicted position
  bool transverse = false;
  bool positive = false;
  double pair_margin = 0.0;
  double locate_distance = 0.0;  // |located - predicted|

  UnitaryMove to_model;  // rotation sending surface i's direction to {z = 0}
  Complex model_slope{};
  bool already_orthogonal = false;
  double ortho_lambda = 0.0;
  double ortho_mu = 2.0;
  double ortho_margin = 0.0;
  double support_radius = 0.0;      // local-model ball, clear of all seams
  double model_fit_residual = 0.0;  // defect from exact affine form there
};

struct NicePipelineResult {
  double lambda1 = 0.0, step1_margin = 0.0;
  double lambda2 = 0.0, mu2 = 2.0, step2_margin = 0.0, flat_radius = 0.0;

  std::vector<std::size_t> shifted;  // surfaces whose slope was pushed off 0
  std::vector<Complex> shift_eps;

  SwapChart chart;
  std::vector<Complex> work_slopes;    // index 0 = reference surface
  std::vector<GraphSurface> surfaces;  // final graphs in the working chart
  std::vector<SeparationStage> stages;

  std::vector<NicePointReport> points;
  std::size_t expected_points = 0;
  double min_point_gap = 0.0;
  double min_margin = 0.0;
  bool nice = false;
};

namespace detail {

// Orthogonal local model of the pair (slope_i, slope_j) at a common point:
// the rotation [[0,-1],[1,0]] composed with the adjoint of the slope
// normalizer takes surface i to the vertical plane; surface j then has
// slope -(1 + conj(s_i) s_j) / (s_j - s_i), zero exactly when the pair is
// already orthogonal.
struct PairModel {
  UnitaryMove to_model;
  Complex model_slope{};
};

inline PairModel pair_model(Complex si, Complex sj) {
  PairModel pm;
  UnitaryMove rot;
  rot.m[0][0] = Cx<double>(0.0);
  rot.m[0][1] = Cx<double>(-1.0);
  rot.m[1][0] = Cx<double>(1.0);
  rot.m[1][1] = Cx<double>(0.0);
  pm.to_model = rot.compose(normalize_slope(from_std(si)).adjoint());
  pm.model_slope = -(1.0 + std::conj(si) * sj) / (sj - si);
  return pm;
}

}  // namespace detail

// Full run of the perturbation programme on an arrangement through one
// multiple point: flatten curvature, remove the antiholomorphic slopes,
// push the surfaces apart one by one, then orthogonalize every remaining
// double point.  The report carries the verified data of each stage and of
// every final crossing.
inline NicePipelineResult nice_pipeline(const Arrangement& arr,
                                        const GridSpec& grid) {
  NicePipelineResult out;
  const std::size_t l = arr.surfaces.size();
  if (l == 0) {
    out.nice = true;
    return out;
  }

  // --- flatten curvature, then restrict to the exactly linear zone.
  LinearizeResult lin = linearize_step(arr, grid);
  out.lambda1 = lin.lambda;
  out.step1_margin = lin.min_margin;

  Arrangement flat;
  flat.chart_radius = lin.lambda;
  for (const auto& s : lin.arrangement.surfaces)
    flat.surfaces.push_back({s.a, s.b, Residual::none(), 0.0, lin.lambda});

  // --- remove the antiholomorphic slopes, restrict to the line zone.
  AntiholoResult ah = remove_antiholomorphic_step(flat, grid);
  out.lambda2 = ah.lambda;
  out.mu2 = ah.mu;
  out.step2_margin = ah.min_margin;
  out.flat_radius = ah.flat_radius;

  Arrangement lines;
  lines.chart_radius = ah.flat_radius;
  for (const auto& s : ah.arrangement.surfaces)
    lines.surfaces.push_back(
        {s.a, Complex{}, Residual::none(), 0.0, ah.flat_radius});

  // --- single surface: the lone double point sits at the origin; push the
  // line flat against the horizontal plane right there.
  if (l == 1) {
    const Complex a1 = lines.surfaces[0].a;
    out.work_slopes = {Complex{}, a1};
    out.expected_points = 1;

    NicePointReport rep;
    rep.i = 0;
    rep.j = 1;
    rep.found = true;
    rep.matched = true;
    rep.pair_margin = 1.0 + std::norm(a1);
    rep.transverse = true;
    rep.positive = true;
    rep.to_model = UnitaryMove::identity();
    rep.model_slope = a1;
    rep.already_orthogonal = a1 == Complex{};
    rep.support_radius = ah.flat_radius;

    OrthogonalizeResult ortho =
        orthogonalize_double_point(a1, grid, ah.flat_radius);
    rep.ortho_lambda = ortho.lambda;
    rep.ortho_mu = ortho.mu;
    rep.ortho_margin = ortho.min_margin;
    out.surfaces = {GraphSurface::of_local(ortho.surface)};
    out.min_margin = rep.already_orthogonal ? 1.0 : ortho.min_margin;
    out.points = {rep};
    out.min_point_gap = std::numeric_limits<double>::infinity();
    out.nice = out.min_margin >= grid.symplectic_margin_floor;
    return out;
  }

  // --- push any vanishing slope off zero so the axis swap keeps graphs.
  double r_line = ah.flat_radius;
  for (std::size_t j = 0; j < l; ++j) {
    if (std::abs(lines.surfaces[j].a) > 1e-9) continue;
    const ArrangementConstants kc = arrangement_constants(lines);
    bool done = false;
    for (int dir = 0; dir < 8 && !done; ++dir) {
      const Complex eps =
          std::polar(0.25 * kc.eps0, 2.0 * M_PI * dir / 8.0);
      const Complex cand = lines.surfaces[j].a + eps;
      bool clear = std::abs(cand) > kc.eps0 / 8.0;
      for (std::size_t k = 0; k < l && clear; ++k)
        if (k != j && std::abs(cand - lines.surfaces[k].a) <= kc.eps0 / 8.0)
          clear = false;
      if (!clear) continue;
      ShiftResult sh = shift_slope(lines, j, eps);
      lines = std::move(sh.arrangement);
      r_line = std::min(r_line, sh.alpha0);
      out.shifted.push_back(j);
      out.shift_eps.push_back(eps);
      done = true;
    }
    if (!done)
      throw SlopeCollision("no direction clears slope " + std::to_string(j) +
                           " from zero");
  }
  // Inside |z| <= r_line every shift cutoff vanishes identically, so the
  // surfaces are exact lines with the post-shift slopes.
  std::vector<Complex> a(l);
  for (std::size_t j = 0; j < l; ++j) a[j] = lines.surfaces[j].a;

  // --- swap and rescale to the unit working chart.
  double amin = std::numeric_limits<double>::infinity();
  double bmax = 0.0;
  out.work_slopes.assign(l + 1, Complex{});
  for (std::size_t j = 0; j < l; ++j) {
    amin = std::min(amin, std::abs(a[j]));
    out.work_slopes[j + 1] = 1.0 / a[j];
    bmax = std::max(bmax, std::abs(out.work_slopes[j + 1]));
  }
  out.chart.swapped = true;
  out.chart.scale = 0.9 * r_line * std::min(1.0 / (bmax + 1.0), amin);
  const std::vector<Complex>& beta = out.work_slopes;

  // --- iterated separation, index l down to 2.
  out.surfaces.assign(l + 1, GraphSurface{});
  out.surfaces[0] = GraphSurface::affine(beta[0], Complex{}, 1.0);
  out.surfaces[1] = GraphSurface::affine(beta[1], Complex{}, 1.0);

  double dall = std::numeric_limits<double>::infinity();
  double Dmax = 0.0;
  for (std::size_t i = 0; i <= l; ++i)
    for (std::size_t j = i + 1; j <= l; ++j) {
      dall = std::min(dall, std::abs(beta[i] - beta[j]));
      Dmax = std::max(Dmax, std::abs(beta[i] - beta[j]));
    }
  const double q = 2.0 * bmax + Dmax;
  const double lam_fit = 0.9 / std::sqrt(4.0 + q * q);

  std::vector<Complex> existing;  // points already placed (working z)
  for (std::size_t k = l; k >= 2; --k) {
    double dmin_k = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i)
      dmin_k = std::min(dmin_k, std::abs(beta[k] - beta[i]));

    double lam = lam_fit;
    for (Complex p : existing) lam = std::min(lam, 0.45 * std::abs(p));
    for (const auto& st : out.stages)
      lam = std::min(lam, 0.9 * st.eps /
                              (2.0 * std::abs(beta[k] - beta[st.index]) +
                               0.9 * dmin_k));
    double eps = 0.9 * dmin_k * lam;

    const std::vector<Complex> prefix(beta.begin(), beta.begin() + k + 1);
    bool placed = false;
    for (int attempt = 0; attempt < 40 && !placed; ++attempt, eps *= 0.5) {
      SeparationResult sep =
          separate_multiple_point(prefix, eps, lam, 1.0, grid);
      if (sep.min_margin < grid.symplectic_margin_floor) continue;
      SeparationStage st;
      st.index = k;
      st.lambda0 = lam;
      st.eps = eps;
      st.min_margin = sep.min_margin;
      st.points = sep.points;
      out.surfaces[k] = sep.surface;
      existing.insert(existing.end(), sep.points.begin(), sep.points.end());
      out.stages.push_back(std::move(st));
      placed = true;
    }
    if (!placed)
      throw NoAdmissibleEps("separation of surface " + std::to_string(k) +
                            " failed the margin floor after 40 halvings");
  }

  out.expected_points = (l + 1) * l / 2;

  // --- locate and classify every pairwise crossing in the working chart.
  const auto stage_of = [&](std::size_t j) -> const SeparationStage* {
    for (const auto& st : out.stages)
      if (st.index == j) return &st;
    return nullptr;
  };

  std::vector<std::pair<Complex, Complex>> final_points;
  for (std::size_t i = 0; i <= l; ++i) {
    for (std::size_t j = i + 1; j <= l; ++j) {
      NicePointReport rep;
      rep.i = i;
      rep.j = j;
      const Complex predicted =
          j >= 2 ? stage_of(j)->points[i] : Complex{};
      auto located = locate_intersections(out.surfaces[i], out.surfaces[j], grid);
      rep.found = located.size() == 1;
      if (rep.found) {
        rep.z = located[0].z;
        rep.w = located[0].w;
        rep.locate_distance = std::abs(located[0].z - predicted);
        rep.matched = rep.locate_distance <= 1e-8;
        rep.transverse = located[0].transverse;
        rep.positive = located[0].positive;
        rep.pair_margin = located[0].margin;
        final_points.emplace_back(rep.z, rep.w);
      }
      out.points.push_back(rep);
    }
  }

  out.min_point_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < final_points.size(); ++i)
    for (std::size_t j = i + 1; j < final_points.size(); ++j) {
      const double g = std::sqrt(
          std::norm(final_points[i].first - final_points[j].first) +
          std::norm(final_points[i].second - final_points[j].second));
      out.min_point_gap = std::min(out.min_point_gap, g);
    }

  // --- orthogonal local model at every crossing.
  for (auto& rep : out.points) {
    if (!rep.found) continue;
    const Complex si = beta[rep.i], sj = beta[rep.j];

    double support = 1.0 - std::abs(rep.z);
    if (const auto* st = stage_of(rep.j))
      support = std::min(support, st->lambda0 - std::abs(rep.z));
    if (const auto* st = stage_of(rep.i))
      support = std::min(support, std::abs(rep.z) - 2.0 * st->lambda0);
    for (const auto& [pz, pw] : final_points) {
      const double g =
          std::sqrt(std::norm(pz - rep.z) + std::norm(pw - rep.w));
      if (g > 1e-12) support = std::min(support, g);
    }
    rep.support_radius = 0.5 * std::max(support, 0.0);

    const detail::PairModel pm = detail::pair_model(si, sj);
    rep.to_model = pm.to_model;
    rep.model_slope = pm.model_slope;
    rep.already_orthogonal = std::abs(pm.model_slope) <= 1e-12;
    if (!rep.already_orthogonal && rep.support_radius > 0.0) {
      OrthogonalizeResult ortho = orthogonalize_double_point(
          pm.model_slope, grid, rep.support_radius);
      rep.ortho_lambda = ortho.lambda;
      rep.ortho_mu = ortho.mu;
      rep.ortho_margin = ortho.min_margin;
    } else {
      rep.ortho_margin = 1.0;
    }

    // Exact-affineness audit on a ring inside the support ball.
    if (rep.support_radius > 0.0) {
      const double rr = 0.5 * rep.support_radius;
      double defect =
          std::abs(out.surfaces[rep.i].w(rep.z) - out.surfaces[rep.j].w(rep.z));
      for (int t = 0; t < 16; ++t) {
        const Complex d = std::polar(rr, 2.0 * M_PI * t / 16.0);
        const Complex zi = rep.z + d;
        defect = std::max(
            {defect,
             std::abs(out.surfaces[rep.i].w(zi) -
                      (out.surfaces[rep.i].w(rep.z) + si * d)),
             std::abs(out.surfaces[rep.j].w(zi) -
                      (out.surfaces[rep.j].w(rep.z) + sj * d))});
      }
      rep.model_fit_residual = defect;
    }
  }

  out.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : out.surfaces)
    out.min_margin = std::min(out.min_margin, verify_symplectic_grid(s, grid));

  bool ok = out.points.size() == out.expected_points &&
            out.min_margin >= grid.symplectic_margin_floor &&
            out.min_point_gap > 0.0;
  for (const auto& rep : out.points)
    ok = ok && rep.found && rep.matched && rep.transverse && rep.positive &&
         rep.support_radius > 0.0 && rep.model_fit_residual < 1e-6;
  out.nice = ok;
  return out;
}

}  // namespace sympsurf
