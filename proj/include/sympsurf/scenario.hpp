#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "sympsurf/serialize.hpp"
#include "sympsurf/suites.hpp"

// Scenario files: a versioned envelope
//   { "schema": "sympsurf/1", "kind": <planes|perturb|kahler|divisor|seifert|
//     suite>, "seed"?, "resolution"?, "tolerance"?, "payload": {...} }
// dispatched to the owning module.  Command-line overrides beat file-level
// settings, which beat the defaults (seed 7, resolution 256, tolerance 1e-9).
// Module verification errors become failing report records; structural
// problems stay SchemaError so the caller can distinguish bad input from a
// failed check.

namespace sympsurf {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::optional<double> tolerance;
};

namespace detail {

inline void run_planes(Report& rep, const Json& payload,
                       const std::string& origin) {
  long long draws = 100000, exact_draws = 10000;
  if (payload.contains("draws"))
    draws = as_int(payload.at("draws"), origin + ".draws");
  if (payload.contains("exact_draws"))
    exact_draws = as_int(payload.at("exact_draws"), origin + ".exact_draws");
  if (draws < 1 || exact_draws < 1)
    throw SchemaError(origin + ": draw counts must be positive");
  rep.headline = "plane predicates against the determinant oracle";
  suites::plane_oracle_battery(rep, rep.seed, static_cast<int>(draws));
  suites::conversion_identity_battery(rep, rep.seed + 1,
                                      static_cast<int>(exact_draws));
}

inline void run_perturb(Report& rep, const Json& payload, const GridSpec& grid,
                        const std::string& origin) {
  const std::string run =
      as_string(member(payload, "run", origin), origin + ".run");
  if (run == "steps" || run == "pipeline") {
    const Arrangement arr = arrangement_from_json(
        member(payload, "arrangement", origin), origin + ".arrangement");
    if (run == "steps") {
      rep.headline = "two-stage perturbation";
      suites::perturb_steps_battery(rep, arr, grid);
    } else {
      rep.headline = "crossing normalization pipeline";
      suites::pipeline_battery(rep, arr, grid);
    }
  } else if (run == "node") {
    const Complex eps =
        as_complex(member(payload, "epsilon", origin), origin + ".epsilon");
    double lambda0 = 0.25;
    if (payload.contains("lambda0"))
      lambda0 = as_double(payload.at("lambda0"), origin + ".lambda0");
    rep.headline = "node smoothing";
    suites::node_battery(rep, eps, lambda0, grid);
  } else {
    throw SchemaError(origin + ": run must be \"steps\", \"pipeline\", or "
                               "\"node\"");
  }
}

inline void run_kahler(Report& rep, const Json& payload, const GridSpec& grid,
                       const std::string& origin) {
  const MetricChart chart =
      chart_from_json(member(payload, "chart", origin), origin + ".chart");
  double closedness_bound = 1e-6;
  if (payload.contains("closedness_bound"))
    closedness_bound = as_double(payload.at("closedness_bound"),
                                 origin + ".closedness_bound");
  rep.headline = "neighbourhood form on one metric chart";

  const TamingReport tr = taming_radius(chart, grid);
  const double at_zero =
      tr.min_eigenvalue.empty() ? 0.0 : tr.min_eigenvalue.front();
  rep.add(CheckRecord::gt("zero-section taming eigenvalue", at_zero, 0.0));
  rep.add(CheckRecord::gt("tamed fiber radius", tr.tamed_radius, 0.0));
  rep.add(CheckRecord::le(
      "closedness defect",
      exterior_derivative_max(chart, grid, chart.fd_step), closedness_bound));
}

inline void run_divisor(Report& rep, const Json& payload,
                        const std::string& origin) {
  const IntersectionLattice lat = lattice_from_json(
      member(payload, "lattice", origin), origin + ".lattice");
  const NamedDivisor nd = divisor_from_json(member(payload, "divisor", origin),
                                            lat.rank(), origin + ".divisor");
  const RealizabilityReport rr = realizability(lat, nd.divisor);
  const long long self = pair(lat, nd.divisor, nd.divisor);
  const std::string disjoint = suites::detail::joined_labels(lat,
                                                             rr.disjoint_from);
  rep.headline = nd.name + "^2 = " + std::to_string(self) + ", g = " +
                 (rr.genus ? std::to_string(*rr.genus) : "undefined") +
                 ", disjoint from: " + (disjoint.empty() ? "none" : disjoint);
  if (!rr.reason.empty()) rep.note("reason: " + rr.reason);

  rep.add(CheckRecord::flag("class is effective", rr.effective));
  bool expect_realizable = true;
  if (payload.contains("expect")) {
    const Json& ex = payload.at("expect");
    const std::string at = origin + ".expect";
    if (ex.contains("realizable")) {
      if (!ex.at("realizable").is_boolean())
        throw SchemaError(at + ".realizable: expected a boolean");
      expect_realizable = ex.at("realizable").get<bool>();
    }
    if (ex.contains("self_intersection"))
      rep.add(CheckRecord::eq_int(
          "self-intersection", self,
          as_int(ex.at("self_intersection"), at + ".self_intersection")));
    if (ex.contains("genus"))
      rep.add(CheckRecord::eq_int("genus", rr.genus ? *rr.genus : -1,
                                  as_int(ex.at("genus"), at + ".genus")));
    if (ex.contains("disjoint_from")) {
      const Json& want = ex.at("disjoint_from");
      if (!want.is_array())
        throw SchemaError(at + ".disjoint_from: expected an array of labels");
      std::string joined;
      for (const auto& l : want) {
        if (!joined.empty()) joined += ", ";
        joined += as_string(l, at + ".disjoint_from");
      }
      rep.add(CheckRecord::eq_text("disjoint from", disjoint, joined));
    }
  }
  rep.add(CheckRecord::flag("class is realizable", rr.realizable,
                            expect_realizable));
}

inline void run_seifert(Report& rep, const Json& payload,
                        const std::string& origin) {
  AbelianGroupDescriptor group;
  if (payload.contains("family")) {
    const FamilyInput fam =
        family_from_json(payload.at("family"), origin + ".family");
    group = isotropy_family_group(fam.N, fam.primes);
  } else {
    group = seifert_h2(
        seifert_from_json(member(payload, "input", origin), origin + ".input"));
  }
  const std::string text = to_string(group);
  rep.headline = text;
  if (payload.contains("expect_group"))
    rep.add(CheckRecord::eq_text(
        "group", text,
        as_string(payload.at("expect_group"), origin + ".expect_group")));
  else
    rep.add(CheckRecord::eq_text("group", text, text));
}

}  // namespace detail

inline Report run_scenario_file(const std::string& path,
                                const std::string& command_kind,
                                const RunOptions& opts) {
  const Json doc = load_json_file(path);
  require_schema_tag(doc, path);
  const std::string kind =
      detail::as_string(detail::member(doc, "kind", path), path + ".kind");
  if (!command_kind.empty() && kind != command_kind)
    throw SchemaError(path + ": scenario kind \"" + kind +
                      "\" does not match the \"" + command_kind +
                      "\" command");

  std::uint64_t seed = 7;
  int resolution = 256;
  double tolerance = 1e-9;
  if (doc.contains("seed"))
    seed = static_cast<std::uint64_t>(
        detail::as_int(doc.at("seed"), path + ".seed"));
  if (doc.contains("resolution"))
    resolution = static_cast<int>(
        detail::as_int(doc.at("resolution"), path + ".resolution"));
  if (doc.contains("tolerance"))
    tolerance = detail::as_double(doc.at("tolerance"), path + ".tolerance");
  if (opts.seed) seed = *opts.seed;
  if (opts.resolution) resolution = *opts.resolution;
  if (opts.tolerance) tolerance = *opts.tolerance;
  if (resolution < 8)
    throw SchemaError(path + ": resolution must be at least 8");
  if (!(tolerance > 0.0))
    throw SchemaError(path + ": tolerance must be positive");

  const Json& payload = detail::member(doc, "payload", path);
  if (!payload.is_object())
    throw SchemaError(path + ": payload must be an object");

  if (kind == "suite") {
    const std::string name = detail::as_string(
        detail::member(payload, "name", path + ".payload"),
        path + ".payload.name");
    Report rep = suites::run_suite(name, seed, resolution, tolerance);
    rep.name = path;
    rep.inputs_json = canonical_json(payload);
    return rep;
  }

  GridSpec grid;
  grid.resolution = resolution;
  grid.symplectic_margin_floor = tolerance;

  Report rep;
  rep.kind = kind;
  rep.name = path;
  rep.seed = seed;
  rep.resolution = resolution;
  rep.tolerance = tolerance;
  rep.inputs_json = canonical_json(payload);

  try {
    const std::string origin = path + ".payload";
    if (kind == "planes")
      detail::run_planes(rep, payload, origin);
    else if (kind == "perturb")
      detail::run_perturb(rep, payload, grid, origin);
    else if (kind == "kahler")
      detail::run_kahler(rep, payload, grid, origin);
    else if (kind == "divisor")
      detail::run_divisor(rep, payload, origin);
    else if (kind == "seifert")
      detail::run_seifert(rep, payload, origin);
    else
      throw SchemaError(path + ": unknown scenario kind \"" + kind + "\"");
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    rep.add(CheckRecord::failure("module error", e.what()));
  }
  return rep;
}

}  // namespace sympsurf
