#pragma once

namespace sympsurf {

// Smooth monotone transition on [1, 2] built from the quintic smoothstep
// s(u) = 6u^5 - 15u^4 + 10u^3, which satisfies s(0) = 0, s(1) = 1,
// s' = s'' = 0 at both ends, and max |s'| = 1.875 <= 2.
//
//   rise: == 0 for t <= 1, == 1 for t >= 2, increasing in between;
//   fall: 1 - rise (== 1 for t <= 1, == 0 for t >= 2).
//
// Values at the region boundaries are exact, so "untouched outside the
// cutoff zone" statements hold bit-for-bit.
struct CutoffProfile {
  enum class Kind { Rise, Fall };
  Kind kind = Kind::Rise;

  static CutoffProfile rise() { return {Kind::Rise}; }
  static CutoffProfile fall() { return {Kind::Fall}; }

  // Largest possible |deriv| for either kind.
  static constexpr double max_slope = 1.875;

  double operator()(double t) const {
    const double r = rise_value(t);
    return kind == Kind::Rise ? r : 1.0 - r;
  }

  double deriv(double t) const {
    const double d = rise_deriv(t);
    return kind == Kind::Rise ? d : -d;
  }

private:
  static double rise_value(double t) {
    if (t <= 1.0) return 0.0;
    if (t >= 2.0) return 1.0;
    const double u = t - 1.0;
    return ((6.0 * u - 15.0) * u + 10.0) * u * u * u;
  }

  static double rise_deriv(double t) {
    if (t <= 1.0 || t >= 2.0) return 0.0;
    const double u = t - 1.0;
    const double v = u * (1.0 - u);
    return 30.0 * v * v;
  }
};

}  // namespace sympsurf
