#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sympsurf/complex.hpp"
#include "sympsurf/divisor_calculus.hpp"
#include "sympsurf/errors.hpp"
#include "sympsurf/kahler_models.hpp"
#include "sympsurf/report.hpp"
#include "sympsurf/surfaces.hpp"

// JSON input parsing for scenario files and the canonical re-emission used
// when reports echo their inputs. All structural problems raise SchemaError
// with the offending location named; nothing here touches module logic.

namespace sympsurf {

using Json = nlohmann::json;

inline Json parse_json_text(const std::string& text,
                            const std::string& origin) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw SchemaError(origin + ": not valid JSON");
  return j;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ": cannot read file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

namespace detail {

inline const Json& member(const Json& j, const std::string& key,
                          const std::string& origin) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(origin + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline double as_double(const Json& j, const std::string& origin) {
  if (!j.is_number()) throw SchemaError(origin + ": expected a number");
  return j.get<double>();
}

inline long long as_int(const Json& j, const std::string& origin) {
  if (!j.is_number_integer())
    throw SchemaError(origin + ": expected an integer");
  return j.get<long long>();
}

inline std::string as_string(const Json& j, const std::string& origin) {
  if (!j.is_string()) throw SchemaError(origin + ": expected a string");
  return j.get<std::string>();
}

inline Complex as_complex(const Json& j, const std::string& origin) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2)
    throw SchemaError(origin + ": expected [re, im]");
  return Complex(as_double(j[0], origin), as_double(j[1], origin));
}

}  // namespace detail

// Validates the envelope every input file must carry.
inline void require_schema_tag(const Json& j, const std::string& origin) {
  if (!j.is_object()) throw SchemaError(origin + ": expected a JSON object");
  if (!j.contains("schema") || !j.at("schema").is_string() ||
      j.at("schema").get<std::string>() != "sympsurf/1")
    throw SchemaError(origin + ": missing or unsupported \"schema\" tag "
                               "(expected \"sympsurf/1\")");
}

// --- domain types ----------------------------------------------------------

inline IntersectionLattice lattice_from_json(const Json& j,
                                             const std::string& origin) {
  IntersectionLattice lat;
  const Json& labels = detail::member(j, "labels", origin);
  if (!labels.is_array()) throw SchemaError(origin + ": labels must be an array");
  for (const auto& l : labels)
    lat.labels.push_back(detail::as_string(l, origin + ".labels"));

  const Json& q = detail::member(j, "Q", origin);
  if (!q.is_array() || q.size() != lat.labels.size())
    throw SchemaError(origin + ": Q must be a square matrix over the labels");
  for (const auto& row : q) {
    if (!row.is_array() || row.size() != lat.labels.size())
      throw SchemaError(origin + ": Q must be a square matrix over the labels");
    std::vector<long long> r;
    for (const auto& e : row) r.push_back(detail::as_int(e, origin + ".Q"));
    lat.Q.push_back(std::move(r));
  }

  const Json& k = detail::member(j, "K", origin);
  if (!k.is_array() || k.size() != lat.labels.size())
    throw SchemaError(origin + ": K must match the label count");
  for (const auto& e : k) lat.K.push_back(detail::as_int(e, origin + ".K"));

  for (std::size_t i = 0; i < lat.rank(); ++i)
    for (std::size_t j2 = i + 1; j2 < lat.rank(); ++j2)
      if (lat.Q[i][j2] != lat.Q[j2][i])
        throw SchemaError(origin + ": Q is not symmetric");
  return lat;
}

struct NamedDivisor {
  std::string name = "divisor";
  SymplecticDivisor divisor;
};

// Dense coefficient vector aligned with the lattice labels.
inline NamedDivisor divisor_from_json(const Json& j, std::size_t rank,
                                      const std::string& origin) {
  NamedDivisor out;
  if (j.contains("name")) out.name = detail::as_string(j.at("name"), origin);
  const Json& coeffs = detail::member(j, "coeffs", origin);
  if (!coeffs.is_array() || coeffs.size() != rank)
    throw SchemaError(origin + ": coeffs must list one integer per curve");
  for (std::size_t i = 0; i < rank; ++i) {
    const long long c = detail::as_int(coeffs[i], origin + ".coeffs");
    if (c != 0) out.divisor.terms.push_back({i, c});
  }
  return out;
}

inline SeifertInput seifert_from_json(const Json& j,
                                      const std::string& origin) {
  SeifertInput in;
  in.b2X = detail::as_int(detail::member(j, "b2X", origin), origin + ".b2X");
  const Json& surfaces = detail::member(j, "surfaces", origin);
  if (!surfaces.is_array())
    throw SchemaError(origin + ": surfaces must be an array");
  for (const auto& s : surfaces) {
    SeifertInput::Isotropy iso;
    iso.multiplicity = detail::as_int(
        detail::member(s, "multiplicity", origin + ".surfaces"), origin);
    iso.genus =
        detail::as_int(detail::member(s, "genus", origin + ".surfaces"), origin);
    in.data.push_back(iso);
  }
  if (j.contains("adjacency")) {
    const Json& adj = j.at("adjacency");
    if (!adj.is_array())
      throw SchemaError(origin + ": adjacency must be a matrix");
    for (const auto& row : adj) {
      if (!row.is_array())
        throw SchemaError(origin + ": adjacency must be a matrix");
      std::vector<bool> r;
      for (const auto& e : row) {
        if (!e.is_boolean())
          throw SchemaError(origin + ": adjacency entries must be booleans");
        r.push_back(e.get<bool>());
      }
      in.adjacency.push_back(std::move(r));
    }
  }
  return in;
}

struct FamilyInput {
  long long N = 1;
  std::map<std::pair<long long, long long>, long long> primes;
};

inline FamilyInput family_from_json(const Json& j, const std::string& origin) {
  FamilyInput fam;
  fam.N = detail::as_int(detail::member(j, "N", origin), origin + ".N");
  const Json& primes = detail::member(j, "primes", origin);
  if (!primes.is_array())
    throw SchemaError(origin + ": primes must be an array of {n, m, p}");
  for (const auto& e : primes) {
    const long long n = detail::as_int(detail::member(e, "n", origin), origin);
    const long long m = detail::as_int(detail::member(e, "m", origin), origin);
    const long long p = detail::as_int(detail::member(e, "p", origin), origin);
    fam.primes[{n, m}] = p;
  }
  return fam;
}

inline MetricChart chart_from_json(const Json& j, const std::string& origin) {
  const Json& h = detail::member(j, "h", origin);
  const std::string kind =
      detail::as_string(detail::member(h, "kind", origin + ".h"), origin);
  double radius = 1.0;
  if (j.contains("radius"))
    radius = detail::as_double(j.at("radius"), origin + ".radius");

  MetricChart chart;
  if (kind == "constant") {
    chart = MetricChart::constant(
        detail::as_double(detail::member(h, "value", origin + ".h"), origin),
        radius);
  } else if (kind == "exp_norm2") {
    chart = MetricChart::exp_norm2(
        detail::as_double(detail::member(h, "alpha", origin + ".h"), origin),
        radius);
  } else if (kind == "poly") {
    const Json& coeffs = detail::member(h, "coeffs", origin + ".h");
    if (!coeffs.is_array() || coeffs.empty())
      throw SchemaError(origin + ": poly coeffs must be a non-empty array");
    std::vector<double> c;
    for (const auto& e : coeffs)
      c.push_back(detail::as_double(e, origin + ".h.coeffs"));
    chart = MetricChart::poly(std::move(c), radius);
  } else {
    throw SchemaError(origin + ": unknown metric kind \"" + kind + "\"");
  }
  if (j.contains("fd_step"))
    chart.fd_step = detail::as_double(j.at("fd_step"), origin + ".fd_step");
  return chart;
}

// Surfaces for the perturbation scenarios: polynomial residuals only, which
// is everything a fixture file can express.
inline Arrangement arrangement_from_json(const Json& j,
                                         const std::string& origin) {
  Arrangement arr;
  if (j.contains("chart_radius"))
    arr.chart_radius = detail::as_double(j.at("chart_radius"), origin);
  const Json& surfaces = detail::member(j, "surfaces", origin);
  if (!surfaces.is_array())
    throw SchemaError(origin + ": surfaces must be an array");
  for (const auto& s : surfaces) {
    LocalGraphSurface g;
    g.a = detail::as_complex(detail::member(s, "a", origin + ".surfaces"),
                             origin);
    if (s.contains("b")) g.b = detail::as_complex(s.at("b"), origin);
    if (s.contains("residual_poly")) {
      const Json& poly = s.at("residual_poly");
      if (!poly.is_array())
        throw SchemaError(origin + ": residual_poly must be an array");
      std::vector<Complex> coeffs;
      for (const auto& c : poly) coeffs.push_back(detail::as_complex(c, origin));
      if (!coeffs.empty()) g.residual = Residual::poly(std::move(coeffs));
    }
    if (s.contains("bound_C"))
      g.bound_C = detail::as_double(s.at("bound_C"), origin);
    g.chart_radius = arr.chart_radius;
    arr.surfaces.push_back(std::move(g));
  }
  return arr;
}

// --- canonical emission ----------------------------------------------------

// Re-serializes a parsed JSON value with the same float formatting as the
// report emitter (17 significant digits) and object keys in sorted order,
// so input echoes are byte-stable.
inline std::string canonical_json(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return "null";
    case Json::value_t::boolean: return j.get<bool>() ? "true" : "false";
    case Json::value_t::number_integer:
      return std::to_string(j.get<long long>());
    case Json::value_t::number_unsigned:
      return std::to_string(j.get<unsigned long long>());
    case Json::value_t::number_float: return format_double(j.get<double>());
    case Json::value_t::string:
      return "\"" + json_escape(j.get<std::string>()) + "\"";
    case Json::value_t::array: {
      std::string out = "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",";
        out += canonical_json(j[i]);
      }
      return out + "]";
    }
    case Json::value_t::object: {
      std::string out = "{";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",";
        first = false;
        out += "\"" + json_escape(key) + "\":" + canonical_json(value);
      }
      return out + "}";
    }
    default:
      throw SchemaError("unsupported JSON value type");
  }
}

}  // namespace sympsurf
