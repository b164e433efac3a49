#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Verification reports: a flat list of named checks, each carrying the
// measured value, the bound it was held against, and the distance to
// failure. The text and JSON renderings are produced from the same records
// with the same number formatting, so they can never disagree.

namespace sympsurf {

// 17 significant digits round-trip every double exactly, so two runs that
// agree in value agree byte-for-byte in print.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

using CheckValue = std::variant<bool, long long, double, std::string>;

inline std::string value_text(const CheckValue& v) {
  switch (v.index()) {
    case 0: return std::get<bool>(v) ? "true" : "false";
    case 1: return std::to_string(std::get<long long>(v));
    case 2: return format_double(std::get<double>(v));
    default: return std::get<std::string>(v);
  }
}

inline std::string value_json(const CheckValue& v) {
  if (v.index() == 3) return "\"" + json_escape(std::get<std::string>(v)) + "\"";
  if (v.index() == 2 && !std::isfinite(std::get<double>(v)))
    return "\"" + value_text(v) + "\"";  // JSON has no inf/nan literals
  return value_text(v);
}

// One verified quantity. `margin` is the signed distance to failure
// (positive = comfortably passing) where a distance makes sense.
struct CheckRecord {
  std::string name;
  CheckValue measured{false};
  CheckValue bound{false};
  std::optional<double> margin;
  bool pass = false;

  static CheckRecord ge(std::string name, double measured, double bound) {
    return {std::move(name), measured, bound, measured - bound,
            measured >= bound};
  }
  static CheckRecord gt(std::string name, double measured, double bound) {
    return {std::move(name), measured, bound, measured - bound,
            measured > bound};
  }
  static CheckRecord le(std::string name, double measured, double bound) {
    return {std::move(name), measured, bound, bound - measured,
            measured <= bound};
  }
  // |measured - target| <= slack.
  static CheckRecord near(std::string name, double measured, double target,
                          double slack) {
    return {std::move(name), measured, target,
            slack - std::abs(measured - target),
            std::abs(measured - target) <= slack};
  }
  static CheckRecord eq_int(std::string name, long long measured,
                            long long expected) {
    return {std::move(name), measured, expected, std::nullopt,
            measured == expected};
  }
  static CheckRecord eq_text(std::string name, std::string measured,
                             std::string expected) {
    const bool ok = measured == expected;
    return {std::move(name), std::move(measured), std::move(expected),
            std::nullopt, ok};
  }
  static CheckRecord flag(std::string name, bool measured,
                          bool expected = true) {
    return {std::move(name), measured, expected, std::nullopt,
            measured == expected};
  }
  static CheckRecord failure(std::string name, std::string what) {
    return {std::move(name), std::move(what), std::string("no error"),
            std::nullopt, false};
  }
};

struct Report {
  std::string kind;
  std::string name;  // input path or suite name
  std::uint64_t seed = 0;
  int resolution = 0;
  double tolerance = 0.0;
  std::string headline;             // scenario-specific summary line
  std::vector<std::string> notes;   // extra human-readable lines
  std::vector<CheckRecord> checks;
  std::string inputs_json = "{}";   // canonical echo of the payload
  std::string prefix;               // prepended to incoming check names

  void add(CheckRecord c) {
    c.name = prefix + c.name;
    checks.push_back(std::move(c));
  }

  void note(std::string line) { notes.push_back(std::move(line)); }

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  std::string text() const {
    std::string out;
    out += "kind: " + kind + "\n";
    out += "input: " + name + "\n";
    out += "seed: " + std::to_string(seed) + "\n";
    if (!headline.empty()) out += headline + "\n";
    for (const auto& n : notes) out += n + "\n";
    for (const auto& c : checks) {
      out += c.pass ? "[PASS] " : "[FAIL] ";
      out += c.name + ": measured=" + value_text(c.measured) +
             " bound=" + value_text(c.bound);
      if (c.margin) out += " margin=" + format_double(*c.margin);
      out += "\n";
    }
    out += "verdict: ";
    out += passed() ? "pass" : "fail";
    out += "\n";
    return out;
  }

  std::string json() const {
    std::string out = "{";
    out += "\"schema\":\"sympsurf/1\",";
    out += "\"kind\":\"" + json_escape(kind) + "\",";
    out += "\"name\":\"" + json_escape(name) + "\",";
    out += "\"seed\":" + std::to_string(seed) + ",";
    out += "\"resolution\":" + std::to_string(resolution) + ",";
    out += "\"tolerance\":" + format_double(tolerance) + ",";
    if (!headline.empty())
      out += "\"headline\":\"" + json_escape(headline) + "\",";
    if (!notes.empty()) {
      out += "\"notes\":[";
      for (std::size_t i = 0; i < notes.size(); ++i) {
        if (i) out += ",";
        out += "\"" + json_escape(notes[i]) + "\"";
      }
      out += "],";
    }
    out += "\"checks\":[";
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const auto& c = checks[i];
      if (i) out += ",";
      out += "{\"name\":\"" + json_escape(c.name) + "\",";
      out += "\"measured\":" + value_json(c.measured) + ",";
      out += "\"bound\":" + value_json(c.bound) + ",";
      if (c.margin) out += "\"margin\":" + format_double(*c.margin) + ",";
      out += std::string("\"pass\":") + (c.pass ? "true" : "false") + "}";
    }
    out += "],";
    out += std::string("\"verdict\":\"") + (passed() ? "pass" : "fail") +
           "\",";
    out += "\"inputs\":" + inputs_json;
    out += "}\n";
    return out;
  }
};

}  // namespace sympsurf
