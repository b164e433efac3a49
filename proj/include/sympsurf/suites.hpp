#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sympsurf/complex.hpp"
#include "sympsurf/divisor_calculus.hpp"
#include "sympsurf/errors.hpp"
#include "sympsurf/grid_checks.hpp"
#include "sympsurf/kahler_models.hpp"
#include "sympsurf/nice_pipeline.hpp"
#include "sympsurf/node.hpp"
#include "sympsurf/perturb.hpp"
#include "sympsurf/plane_algebra.hpp"
#include "sympsurf/report.hpp"
#include "sympsurf/surfaces.hpp"

// Bundled verification batteries.  Each battery exercises one module family
// end to end and appends pass/fail records to a Report; run_suite groups them
// under the names exposed by the command-line tool.  Every battery is
// deterministic for a fixed seed, so two runs of the same suite render
// byte-identical reports; wall-clock time is deliberately never recorded
// here (callers who care about runtime measure around the call).

namespace sympsurf {
namespace suites {

// Three quadratic graphs with pairwise-transverse slopes meeting only at the
// origin: the stock input for the perturbation batteries.
inline Arrangement bundled_triple_arrangement() {
  Arrangement arr;
  arr.chart_radius = 1.0;
  const Complex slopes[3] = {Complex(1, 0), Complex(-1, 0), Complex(0, 1)};
  const Complex curls[3] = {Complex(0.5, 0), Complex(0, 0.25),
                            Complex(-0.3, 0)};
  for (int j = 0; j < 3; ++j)
    arr.surfaces.push_back({slopes[j], Complex(0.3, 0.0),
                            Residual::poly({curls[j]}), 1.0, 1.0});
  return arr;
}

// Metric charts of every supported shape, each expected to tame the standard
// complex structure on a neighbourhood of the zero section.
inline std::vector<std::pair<std::string, MetricChart>> bundled_metric_charts() {
  std::vector<std::pair<std::string, MetricChart>> out;
  out.emplace_back("constant 1", MetricChart::constant(1.0, 1.0));
  out.emplace_back("exp(+|z|^2) radius 0.25", MetricChart::exp_norm2(1.0, 0.25));
  out.emplace_back("exp(-2|z|^2) radius 0.5", MetricChart::exp_norm2(-2.0, 0.5));
  out.emplace_back("poly 1 + 0.5|z|^2 + 0.25|z|^4 radius 0.6",
                   MetricChart::poly({1.0, 0.5, 0.25}, 0.6));
  out.emplace_back("exp(-5|z|^2) radius 0.5", MetricChart::exp_norm2(-5.0, 0.5));
  return out;
}

// --------------------------------------------------------------------------
// Plane predicates.

// Seeded sweep pitting every closed-form predicate against the determinant
// oracle.  Draws whose deciding margin sits within `1e-9` of a sign change
// are skipped: that is the hypothesis under which the predicates claim
// exactness, and the count of skipped draws is itself reported.
inline void plane_oracle_battery(Report& rep, std::uint64_t seed, int draws) {
  constexpr double kFloor = 1e-9;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto draw = [&] {
    return GraphOverZ<double>{Cx<double>(u(rng), u(rng)),
                              Cx<double>(u(rng), u(rng))};
  };
  const auto b0 = horizontal_basis<double>();
  const auto bv = vertical_basis<double>();

  long long checked_z = 0, z_bad = 0, w_bad = 0, orient_bad = 0;
  long long checked_pair = 0, pair_bad = 0;
  long long checked_triple = 0, triple_bad = 0;
  GraphOverZ<double> prev{};
  bool have_prev = false;
  for (int it = 0; it < draws; ++it) {
    const auto g = draw();
    const auto cf = classify_z_graph(g);
    const double d = cf.transverse_margin;
    if (std::abs(d) >= kFloor && std::abs(d + 1.0) >= kFloor) {
      ++checked_z;
      const auto oc = oracle_classify(b0, basis_of_z_graph(g));
      if (oc.symplectic != cf.symplectic ||
          oc.transverse_to_reference != cf.transverse_to_reference ||
          oc.positive != cf.positive)
        ++z_bad;
      if (graph_oriented_positive(g) != (oc.transverse_margin > 0))
        ++orient_bad;
      const auto cw = classify_w_graph(convert_graph(g));
      if (cw.symplectic != oc.symplectic || cw.positive != oc.positive ||
          !cw.transverse_to_reference)
        ++w_bad;
    }
    if (have_prev) {
      const double pm = pair_margin(prev, g);
      if (std::abs(pm) >= kFloor) {
        ++checked_pair;
        const double joint =
            omega0_sq(basis_of_z_graph(prev), basis_of_z_graph(g));
        if (pair_positive(prev, g) != (joint > 0)) ++pair_bad;

        const auto cp = classify_z_graph(prev);
        if (std::abs(cp.symplectic_margin) >= kFloor &&
            std::abs(cf.symplectic_margin) >= kFloor) {
          ++checked_triple;
          const bool via_oracle =
              oracle_classify(bv, basis_of_z_graph(prev)).positive &&
              oracle_classify(bv, basis_of_z_graph(g)).positive && joint > 0;
          if (triple_positive(prev, g) != via_oracle) ++triple_bad;
        }
      }
    }
    prev = g;
    have_prev = true;
  }

  rep.add(CheckRecord::ge("z-graph draws past the margin floor",
                          double(checked_z), 0.9 * draws));
  rep.add(CheckRecord::eq_int("z-graph oracle disagreements", z_bad, 0));
  rep.add(CheckRecord::eq_int("w-graph-via-convert oracle disagreements",
                              w_bad, 0));
  rep.add(CheckRecord::eq_int("orientation-sign oracle disagreements",
                              orient_bad, 0));
  rep.add(CheckRecord::ge("pair draws past the margin floor",
                          double(checked_pair), 0.9 * (draws - 1)));
  rep.add(CheckRecord::eq_int("pair oracle disagreements", pair_bad, 0));
  rep.add(CheckRecord::ge("triple draws past the margin floor",
                          double(checked_triple), 0.9 * (draws - 1)));
  rep.add(CheckRecord::eq_int("triple oracle disagreements", triple_bad, 0));
}

// Exact-arithmetic half: the graph conversion identity
//   |alpha|^2 - |beta|^2 + 1 = (1 + |a|^2 - |b|^2) / (|a|^2 - |b|^2)
// and its roundtrip, over random rational coefficients, compared with ==.
inline void conversion_identity_battery(Report& rep, std::uint64_t seed,
                                        int draws) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 6);
  const auto draw = [&] {
    const Rational re = Rational(num(rng)) / den(rng);
    const Rational im = Rational(num(rng)) / den(rng);
    return Cx<Rational>(re, im);
  };

  long long checked = 0, identity_bad = 0, roundtrip_bad = 0;
  for (int it = 0; it < draws; ++it) {
    const GraphOverZ<Rational> g{draw(), draw()};
    const Rational d = abs2(g.a) - abs2(g.b);
    if (d == 0) continue;
    ++checked;
    const auto wg = convert_graph(g);
    const Rational lhs = abs2(wg.alpha) - abs2(wg.beta) + 1;
    const Rational rhs = (Rational(1) + d) / d;
    if (lhs != rhs) ++identity_bad;
    const auto back = convert_graph(wg);
    if (back.a != g.a || back.b != g.b) ++roundtrip_bad;
  }

  rep.add(CheckRecord::ge("transverse rational draws", double(checked),
                          0.9 * draws));
  rep.add(CheckRecord::eq_int("conversion identity failures", identity_bad, 0));
  rep.add(CheckRecord::eq_int("conversion roundtrip failures", roundtrip_bad, 0));
}

// --------------------------------------------------------------------------
// Perturbation stages.

namespace detail {

// Counts sample points where two arrangements disagree in a single bit.
inline long long bit_mismatches(const Arrangement& x, const Arrangement& y,
                                const std::vector<double>& radii) {
  long long bad = 0;
  for (std::size_t j = 0; j < x.surfaces.size(); ++j)
    for (const double r : radii)
      for (int p = 0; p < 16; ++p) {
        const Complex z = std::polar(r, 3.14159265358979323846 * p / 8.0);
        const Complex v1 = x.surfaces[j].value(z);
        const Complex v2 = y.surfaces[j].value(z);
        if (std::memcmp(&v1, &v2, sizeof v1) != 0) ++bad;
      }
  return bad;
}

inline std::vector<double> span_radii(double inner, double outer) {
  if (!(inner < outer)) return {};
  return {inner + 0.05 * (outer - inner), inner + 0.5 * (outer - inner),
          inner + 0.95 * (outer - inner)};
}

// Crossing audit: every pair of surfaces must meet in exactly one point,
// at the origin up to the locator tolerance.
inline void crossing_records(Report& rep, const std::string& stage,
                             const Arrangement& arr, const GridSpec& grid) {
  long long miscounts = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < arr.surfaces.size(); ++i)
    for (std::size_t j = i + 1; j < arr.surfaces.size(); ++j) {
      const auto pts =
          locate_intersections(GraphSurface::of_local(arr.surfaces[i]),
                               GraphSurface::of_local(arr.surfaces[j]), grid);
      if (pts.size() != 1) ++miscounts;
      for (const auto& p : pts) worst = std::max(worst, std::abs(p.z));
    }
  rep.add(CheckRecord::eq_int(stage + " pairwise crossing miscounts",
                              miscounts, 0));
  rep.add(CheckRecord::le(stage + " crossing distance from origin", worst,
                          1e-8));
}

}  // namespace detail

// Runs the two perturbation stages on an arrangement and audits the collar
// widths against their closed-form ceilings, the grid margins, bit-identity
// away from the active zones, and the crossing sets.
inline void perturb_steps_battery(Report& rep, const Arrangement& arr,
                                  const GridSpec& grid) {
  const ArrangementConstants k = arrangement_constants(arr);
  rep.add(CheckRecord::gt("input grid margin",
                          verify_symplectic_grid(arr, grid), 0.0));

  // Stage one: curvature cutoff.
  const LinearizeResult lin = linearize_step(arr, grid);
  rep.add(CheckRecord::gt("stage-1 collar width", lin.lambda, 0.0));
  rep.add(CheckRecord::gt("stage-1 grid margin", lin.min_margin, 0.0));
  if (k.residual_C > 0.0) {
    rep.add(CheckRecord::le("stage-1 width against eps0 / (8 C)", lin.lambda,
                            0.9 * (k.eps0 / (8.0 * k.residual_C))));
    rep.add(CheckRecord::le(
        "stage-1 width against eps0 / (C (9 + 24 M))", lin.lambda,
        0.9 * (k.eps0 / (k.residual_C * (9.0 + 24.0 * k.slope_M)))));
  }
  const auto radii1 = detail::span_radii(2.0 * lin.lambda, arr.chart_radius);
  if (!radii1.empty())
    rep.add(CheckRecord::eq_int(
        "stage-1 bit mismatches outside the active zone",
        detail::bit_mismatches(lin.arrangement, arr, radii1), 0));
  detail::crossing_records(rep, "stage-1", lin.arrangement, grid);

  // Restrict to the exactly linear collar, as the pipeline does.
  Arrangement flat;
  flat.chart_radius = lin.lambda;
  for (const auto& s : lin.arrangement.surfaces)
    flat.surfaces.push_back({s.a, s.b, Residual::none(), 0.0, lin.lambda});

  // Stage two: antiholomorphic cutoff.
  const AntiholoResult ah = remove_antiholomorphic_step(flat, grid);
  rep.add(CheckRecord::gt("stage-2 grid margin", ah.min_margin, 0.0));
  rep.add(CheckRecord::gt("stage-2 holomorphic core radius", ah.flat_radius,
                          0.0));
  const ArrangementConstants k2 = arrangement_constants(flat);
  if (k2.slope_M > 0.0)
    rep.add(CheckRecord::le(
        "stage-2 width against eps0 / (6 M^2)", ah.lambda,
        0.9 * std::min(1.0, k2.eps0 / (6.0 * k2.slope_M * k2.slope_M))));
  const double active_outer = std::exp((2.0 - ah.mu) / ah.lambda);
  const auto radii2 = detail::span_radii(active_outer, flat.chart_radius);
  if (!radii2.empty())
    rep.add(CheckRecord::eq_int(
        "stage-2 bit mismatches outside the active zone",
        detail::bit_mismatches(ah.arrangement, flat, radii2), 0));
  detail::crossing_records(rep, "stage-2", ah.arrangement, grid);
}

// Full normalization run: every pairwise crossing must be located, matched
// to its predicted position, transverse, positive, and covered by a clean
// orthogonal local model.
inline void pipeline_battery(Report& rep, const Arrangement& arr,
                             const GridSpec& grid) {
  const NicePipelineResult res = nice_pipeline(arr, grid);

  long long found = 0, matched = 0, transverse = 0, positive = 0;
  double worst_locate = 0.0, worst_fit = 0.0;
  double min_pair_margin = std::numeric_limits<double>::infinity();
  double min_support = std::numeric_limits<double>::infinity();
  for (const auto& p : res.points) {
    found += p.found;
    matched += p.matched;
    transverse += p.transverse;
    positive += p.positive;
    worst_locate = std::max(worst_locate, p.locate_distance);
    worst_fit = std::max(worst_fit, p.model_fit_residual);
    min_pair_margin = std::min(min_pair_margin, p.pair_margin);
    min_support = std::min(min_support, p.support_radius);
  }
  const long long expected = static_cast<long long>(res.expected_points);

  rep.add(CheckRecord::eq_int("crossings reported", res.points.size(),
                              expected));
  rep.add(CheckRecord::eq_int("crossings located as single points", found,
                              expected));
  rep.add(CheckRecord::eq_int("crossings matching their predicted position",
                              matched, expected));
  rep.add(CheckRecord::le("max |located - predicted|", worst_locate, 1e-8));
  rep.add(CheckRecord::eq_int("transverse crossings", transverse, expected));
  rep.add(CheckRecord::eq_int("positive crossings", positive, expected));
  rep.add(CheckRecord::gt("min crossing pair margin", min_pair_margin, 0.0));
  rep.add(CheckRecord::le("max orthogonal-model residual", worst_fit, 1e-6));
  rep.add(CheckRecord::gt("min model support radius", min_support, 0.0));
  rep.add(CheckRecord::gt("min crossing separation", res.min_point_gap, 0.0));
  rep.add(CheckRecord::gt("final grid margin", res.min_margin, 0.0));
  rep.add(CheckRecord::flag("configuration reported nice", res.nice));
}

// Node smoothing: the accepted offset must give a verifiably smooth,
// positively symplectic, connected annulus, and the C^1 distance to the
// model cone must scale linearly across four halvings of the offset.
inline void node_battery(Report& rep, Complex eps, double lambda0,
                         const GridSpec& grid) {
  const NodeReport first = resolve_node(eps, lambda0, grid);
  rep.add(CheckRecord::gt("accepted offset magnitude",
                          std::abs(first.accepted_eps), 0.0));
  rep.add(CheckRecord::gt("min singular value on the locus", first.sigma_min,
                          0.0));
  rep.add(CheckRecord::gt("min symplectic margin on the locus",
                          first.margin_min, 0.0));
  rep.add(CheckRecord::flag("smoothed locus is connected", first.connected));
  rep.add(CheckRecord::eq_int("locus components", first.components, 1));
  rep.add(CheckRecord::eq_int("locus boundary circles", first.boundary_circles,
                              2));

  NodeReport prev = first;
  for (int h = 1; h <= 4; ++h) {
    const NodeReport cur = evaluate_node_smoothing(
        prev.accepted_eps * 0.5, lambda0, grid);
    const std::string tag = "halving " + std::to_string(h);
    rep.add(CheckRecord::near(tag + ": value-distance ratio",
                              prev.c1_value_dist / cur.c1_value_dist, 2.0,
                              0.2));
    rep.add(CheckRecord::near(tag + ": derivative-distance ratio",
                              prev.c1_deriv_dist / cur.c1_deriv_dist, 2.0,
                              0.2));
    prev = cur;
  }
}

// --------------------------------------------------------------------------
// Neighbourhood forms.

// Constant fiber metric: the local form must equal the flat product form
// with zero error at every sampled point.
inline void kahler_flat_battery(Report& rep, const GridSpec& grid) {
  const MetricChart m = MetricChart::constant(1.0, 1.0);
  const double r = m.chart_radius;
  const Complex half_i(0.0, 0.5);
  const int n = std::max(9, grid.resolution / 8 + 1) | 1;
  const double wr[] = {0.0, r / 3.0, 2.0 * r / 3.0, r};
  const double wphase[] = {0.9, 3.3};

  double worst = 0.0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const Complex z(-r + 2.0 * r * ix / (n - 1),
                      -r + 2.0 * r * iy / (n - 1));
      if (std::abs(z) > r) continue;
      for (const double rho : wr)
        for (const double ph : wphase) {
          const Complex w = std::polar(rho, ph);
          const FormCoefficients fc = omega_L_local(m, z, w);
          worst = std::max({worst, std::abs(fc.c_zzbar - half_i),
                            std::abs(fc.c_wwbar - half_i),
                            std::abs(fc.c_zbarw), std::abs(fc.c_zwbar),
                            std::abs(fc.c_zw)});
          if (rho == 0.0) break;
        }
    }
  rep.add(CheckRecord::le("constant-metric deviation from the product form",
                          worst, 0.0));
}

// Curved fiber metric: the finite-difference closedness defect must be small
// and shrink at the second-order rate when the step is halved.
inline void kahler_closedness_battery(Report& rep, const GridSpec& grid) {
  const MetricChart m = MetricChart::exp_norm2(1.0, 0.25);
  const double d1 = exterior_derivative_max(m, grid, 1e-3);
  const double d2 = exterior_derivative_max(m, grid, 5e-4);
  rep.add(CheckRecord::le("exp-metric closedness defect at step 1e-3", d1,
                          1e-6));
  rep.add(CheckRecord::ge("closedness defect shrink factor under halving",
                          d1 / d2, 3.5));
}

// Every bundled metric chart must tame the standard complex structure on the
// zero section and out to a strictly positive fiber radius.
inline void kahler_taming_battery(Report& rep, const GridSpec& grid) {
  for (const auto& [label, m] : bundled_metric_charts()) {
    const TamingReport tr = taming_radius(m, grid);
    const double at_zero =
        tr.min_eigenvalue.empty() ? 0.0 : tr.min_eigenvalue.front();
    rep.add(CheckRecord::gt("zero-section taming eigenvalue, " + label,
                            at_zero, 0.0));
    rep.add(CheckRecord::gt("tamed fiber radius, " + label, tr.tamed_radius,
                            0.0));
  }
}

// --------------------------------------------------------------------------
// Homology arithmetic.

namespace detail {

// Genus of the n-fold multiple via the step-by-step recursion, kept separate
// from the closed form it validates.
inline long long recursive_multiple_genus(long long k, long long g,
                                          long long n) {
  long long acc = g;
  for (long long m = 2; m <= n; ++m) acc = acc + g + (m - 1) * k - 1;
  return acc;
}

inline std::string joined_labels(const IntersectionLattice& lat,
                                 const std::vector<std::size_t>& idx) {
  std::string out;
  for (const std::size_t i : idx) {
    if (!out.empty()) out += ", ";
    out += lat.labels[i];
  }
  return out;
}

}  // namespace detail

// Divisor arithmetic on the bundled lattices plus randomized cross-checks of
// the multiple-curve genus formula.
inline void homology_battery(Report& rep, std::uint64_t seed) {
  // The 3 D + 2 T class on the torus/sphere lattice.
  {
    const IntersectionLattice lat = torus_sphere_lattice();
    const SymplecticDivisor t1 = torus_sphere_divisor();
    const RealizabilityReport rr = realizability(lat, t1);
    rep.add(CheckRecord::flag("T1 is effective", rr.effective));
    rep.add(CheckRecord::flag("T1 is realizable", rr.realizable));
    rep.add(CheckRecord::eq_int("T1 self-intersection", pair(lat, t1, t1), 18));
    rep.add(CheckRecord::eq_int("T1 genus", rr.genus ? *rr.genus : -1, 10));
    rep.add(CheckRecord::eq_text("T1 disjoint from",
                                 detail::joined_labels(lat, rr.disjoint_from),
                                 "D"));
    const LatticeSignature sig = signature(lat);
    rep.add(CheckRecord::flag("torus/sphere lattice signature is (1, 1, 0)",
                              sig == LatticeSignature{1, 1, 0}));
  }

  // Multiples of T1: closed form against the recursion, fixed family first.
  {
    long long fixed_bad = 0;
    for (long long n = 1; n <= 10; ++n) {
      const MultipleCurveInvariants inv =
          multiple_curve_invariants({18, 10, n});
      if (inv.self_intersection != 18 * n * n) ++fixed_bad;
      if (inv.genus != 9 * n * n + 1) ++fixed_bad;
      rep.note("T" + std::to_string(n) + ": self-intersection " +
               std::to_string(inv.self_intersection) + ", genus " +
               std::to_string(inv.genus));
    }
    rep.add(CheckRecord::eq_int(
        "multiples of T1 off the closed form (n = 1..10)", fixed_bad, 0));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> dk(1, 20), dg(0, 12), dn(1, 12);
    long long random_bad = 0;
    for (int it = 0; it < 50; ++it) {
      const long long k = dk(rng), g = dg(rng), n = dn(rng);
      const MultipleCurveInvariants inv = multiple_curve_invariants({k, g, n});
      if (inv.self_intersection != n * n * k) ++random_bad;
      if (inv.genus != detail::recursive_multiple_genus(k, g, n)) ++random_bad;
    }
    rep.add(CheckRecord::eq_int(
        "random multiples against the genus recursion (50 draws)", random_bad,
        0));
  }

  // The fiber-chain class 2 F + 9 E1 + sum (9 - i)(C_i + C_i').
  {
    const IntersectionLattice lat = fiber_chain_lattice();
    const SymplecticDivisor a = fiber_chain_divisor();
    const RealizabilityReport rr = realizability(lat, a);
    rep.add(CheckRecord::flag("chain class is realizable", rr.realizable));
    rep.add(CheckRecord::eq_int("chain class pairing with F", rr.pairings[0],
                                9));
    rep.add(CheckRecord::eq_int("chain class genus", rr.genus ? *rr.genus : -1,
                                10));
    rep.add(CheckRecord::eq_int("curves met by the chain class",
                                static_cast<long long>(lat.rank()) -
                                    static_cast<long long>(
                                        rr.disjoint_from.size()),
                                1));
    long long not_minus_two = 0;
    for (std::size_t i = 1; i < lat.rank(); ++i)
      if (lat.Q[i][i] != -2) ++not_minus_two;
    rep.add(CheckRecord::eq_int("chain members off self-intersection -2",
                                not_minus_two, 0));
    const LatticeSignature sig = signature(lat);
    rep.add(CheckRecord::flag("chain lattice signature is (1, 17, 0)",
                              sig == LatticeSignature{1, 17, 0}));
  }
}

// Isotropy-family groups: the N = 1 group printed in closed form, the N = 2
// block exponents, and rejection of inputs violating the coprimality and
// prime-size constraints.
inline void family_battery(Report& rep) {
  {
    std::map<std::pair<long long, long long>, long long> primes;
    primes[{1, 1}] = 5;
    const AbelianGroupDescriptor g = isotropy_family_group(1, primes);
    rep.add(CheckRecord::eq_text("family group at N = 1, p = 5", to_string(g),
                                 "Z^2 + Z_5^20 + Z_25^20 + Z_125^20"));
  }

  {
    std::map<std::pair<long long, long long>, long long> primes;
    primes[{1, 1}] = 5;
    primes[{1, 2}] = 7;
    primes[{2, 1}] = 11;
    primes[{2, 2}] = 13;
    const AbelianGroupDescriptor g = isotropy_family_group(2, primes);

    AbelianGroupDescriptor expected;
    expected.rank = 2;
    const auto block = [](long long p, long long e, long long count) {
      long long order = 1;
      for (long long i = 0; i < e; ++i) order *= p;
      return AbelianGroupDescriptor::TorsionBlock{order, p, e, count};
    };
    const auto counts = [](long long n, long long m) {
      return std::array<long long, 3>{18 * n * n + 2, 18 * m * m + 2, 20};
    };
    for (const auto& [nm, p] : primes) {
      const auto c = counts(nm.first, nm.second);
      expected.torsion.push_back(block(p, 1, c[0]));
      expected.torsion.push_back(block(p, 2, c[1]));
      expected.torsion.push_back(block(p, 3, c[2]));
    }
    std::sort(expected.torsion.begin(), expected.torsion.end(),
              [](const auto& x, const auto& y) {
                return std::make_pair(x.prime, x.exponent) <
                       std::make_pair(y.prime, y.exponent);
              });
    rep.add(CheckRecord::flag(
        "family group at N = 2 matches the per-pair closed form",
        g == expected));
  }

  // Adjacent multiples sharing a factor must be rejected by name.
  {
    SeifertInput in;
    in.b2X = 2;
    in.data = {{6, 1}, {4, 1}};
    in.adjacency = {{false, true}, {true, false}};
    bool named = false, caught = false;
    try {
      seifert_h2(in);
    } catch (const GcdViolation& e) {
      caught = true;
      const std::string what = e.what();
      named = what.find("0 and 1") != std::string::npos &&
              what.find("2") != std::string::npos;
    }
    rep.add(CheckRecord::flag("shared-factor multiples rejected", caught));
    rep.add(CheckRecord::flag("rejection names the offending pair", named));
  }

  // A prime at or below max(3, n, m) must be rejected.
  {
    bool rejected = false;
    std::map<std::pair<long long, long long>, long long> primes;
    primes[{1, 1}] = 3;
    try {
      isotropy_family_group(1, primes);
    } catch (const PrimeConstraintViolated&) {
      rejected = true;
    }
    rep.add(CheckRecord::flag("undersized prime rejected", rejected));
  }
}

// --------------------------------------------------------------------------
// Suite runner.

inline void lemmas_suite(Report& rep, std::uint64_t seed) {
  plane_oracle_battery(rep, seed, 100000);
  conversion_identity_battery(rep, seed + 1, 10000);
}

inline void pipelines_suite(Report& rep, const GridSpec& grid) {
  const Arrangement arr = bundled_triple_arrangement();
  perturb_steps_battery(rep, arr, grid);
  pipeline_battery(rep, arr, grid);
  node_battery(rep, Complex(0.01, 0.0), 0.25, grid);
}

inline void kahler_suite(Report& rep, const GridSpec& grid) {
  kahler_flat_battery(rep, grid);
  kahler_closedness_battery(rep, grid);
  kahler_taming_battery(rep, grid);
}

inline void homology_suite(Report& rep, std::uint64_t seed) {
  homology_battery(rep, seed);
  family_battery(rep);
}

inline Report run_suite(const std::string& name, std::uint64_t seed,
                        int resolution, double tolerance) {
  GridSpec grid;
  grid.resolution = resolution;
  grid.symplectic_margin_floor = tolerance;

  Report rep;
  rep.kind = "suite";
  rep.name = name;
  rep.seed = seed;
  rep.resolution = resolution;
  rep.tolerance = tolerance;

  if (name == "lemmas") {
    rep.headline = "plane predicates against the determinant oracle";
    lemmas_suite(rep, seed);
  } else if (name == "pipelines") {
    rep.headline = "perturbation stages, crossing normalization, node smoothing";
    pipelines_suite(rep, grid);
  } else if (name == "kahler") {
    rep.headline = "neighbourhood forms: product case, closedness, taming";
    kahler_suite(rep, grid);
  } else if (name == "homology") {
    rep.headline = "divisor arithmetic and isotropy-family groups";
    homology_suite(rep, seed);
  } else if (name == "all") {
    rep.headline = "full verification battery";
    rep.prefix = "lemmas/";
    lemmas_suite(rep, seed);
    rep.prefix = "pipelines/";
    pipelines_suite(rep, grid);
    rep.prefix = "kahler/";
    kahler_suite(rep, grid);
    rep.prefix = "homology/";
    homology_suite(rep, seed);
    rep.prefix.clear();
  } else {
    throw SchemaError("unknown suite '" + name +
                      "'; expected lemmas, pipelines, kahler, homology, or all");
  }
  return rep;
}

}  // namespace suites
}  // namespace sympsurf
