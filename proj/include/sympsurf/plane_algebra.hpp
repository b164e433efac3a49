#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "sympsurf/complex.hpp"
#include "sympsurf/errors.hpp"

// Sign predicates for linear planes in (C^2, w0), where
//   w0 = (i/2)(dz^dzbar + dw^dwbar) = dx1^dy1 + dx2^dy2,
// with z = x1 + i y1, w = x2 + i y2. Planes are presented as real-linear
// graphs over one complex axis; every predicate reduces to the sign of a
// polynomial in the graph coefficients, so the whole module is exact over
// Rational and allocation-free over double.

namespace sympsurf {

// Plane through the origin presented as the graph w = a z + b zbar.
template <class T>
struct GraphOverZ {
  Cx<T> a;
  Cx<T> b;
};

// Plane presented as the graph z = alpha w + beta wbar over the w-axis.
template <class T>
struct GraphOverW {
  Cx<T> alpha;
  Cx<T> beta;
};

// Outcome of the sign predicates for one plane against a reference plane.
// The flags are functions of the margins alone: `symplectic` and
// `transverse_to_reference` hold iff their margin is non-zero, `positive`
// holds iff its margin is strictly positive. Marginal inputs (a margin of
// exactly zero) yield a false flag, never an error.
template <class T>
struct Classification {
  bool symplectic = false;
  bool transverse_to_reference = false;
  bool positive = false;
  T symplectic_margin{};
  T transverse_margin{};
  T positive_margin{};
};

// Classifies the graph w = a z + b zbar against the reference plane {w = 0}.
// With d = |a|^2 - |b|^2: the restriction of w0 to the graph has coefficient
// proportional to d + 1; the graph meets {w = 0} in a line iff d = 0; the
// intersection at the origin is positive for the induced orientations iff
// d(d + 1) > 0, i.e. d lies off the closed interval [-1, 0].
template <class T>
Classification<T> classify_z_graph(const GraphOverZ<T>& g) {
  const T d = abs2(g.a) - abs2(g.b);
  Classification<T> c;
  c.symplectic_margin = d + T(1);
  c.transverse_margin = d;
  c.positive_margin = d * (d + T(1));
  c.symplectic = c.symplectic_margin != T(0);
  c.transverse_to_reference = c.transverse_margin != T(0);
  c.positive = c.positive_margin > T(0);
  return c;
}

// Intersection sign of the graph against {w = 0} when both planes carry the
// orientation of their graph parametrization (not the orientation induced by
// the restricted form; the two conventions differ when |a|^2 - |b|^2 < -1).
template <class T>
bool graph_oriented_positive(const GraphOverZ<T>& g) {
  return abs2(g.a) - abs2(g.b) > T(0);
}

// Deciding quantity for pair_positive: |a1 - a2|^2 - |b1 - b2|^2.
template <class T>
T pair_margin(const GraphOverZ<T>& g1, const GraphOverZ<T>& g2) {
  return abs2(g1.a - g2.a) - abs2(g1.b - g2.b);
}

// True iff the two graphs meet only at the origin and the intersection is
// positive for the graph orientations; by linearity this is the slope
// difference graph tested against {w = 0}.
template <class T>
bool pair_positive(const GraphOverZ<T>& g1, const GraphOverZ<T>& g2) {
  return pair_margin(g1, g2) > T(0);
}

// Classifies the graph z = alpha w + beta wbar against {w = 0}. Such a graph
// always meets {w = 0} transversely (only the origin satisfies w = 0), so the
// transversality margin is the constant value of the joint 4-form.
template <class T>
Classification<T> classify_w_graph(const GraphOverW<T>& g) {
  const T e = abs2(g.alpha) - abs2(g.beta) + T(1);
  Classification<T> c;
  c.symplectic_margin = e;
  c.transverse_margin = T(2);
  c.positive_margin = e;
  c.symplectic = e != T(0);
  c.transverse_to_reference = true;
  c.positive = e > T(0);
  return c;
}

// Re-expresses w = a z + b zbar as a graph z = alpha w + beta wbar. Possible
// exactly when the graph is transverse to {w = 0}; then
//   alpha = conj(a) / (|a|^2 - |b|^2),  beta = -b / (|a|^2 - |b|^2),
// and |alpha|^2 - |beta|^2 + 1 = (1 + |a|^2 - |b|^2) / (|a|^2 - |b|^2) holds
// exactly, so symplecticity is preserved.
template <class T>
GraphOverW<T> convert_graph(const GraphOverZ<T>& g) {
  const T d = abs2(g.a) - abs2(g.b);
  if (d == T(0)) {
    throw NonTransverse("convert_graph: |a|^2 - |b|^2 = 0, no graph over w exists");
  }
  return GraphOverW<T>{conj(g.a) / d, (-g.b) / d};
}

// Inverse direction, same formula shape; requires |alpha|^2 - |beta|^2 != 0.
template <class T>
GraphOverZ<T> convert_graph(const GraphOverW<T>& g) {
  const T d = abs2(g.alpha) - abs2(g.beta);
  if (d == T(0)) {
    throw NonTransverse("convert_graph: |alpha|^2 - |beta|^2 = 0, no graph over z exists");
  }
  return GraphOverZ<T>{conj(g.alpha) / d, (-g.beta) / d};
}

// True iff {z = 0}, graph 1 and graph 2 are pairwise transverse and all three
// pairwise intersections at the origin are positive. Against the vertical
// reference a z-graph behaves like a w-graph, so the per-graph condition is
// |a|^2 - |b|^2 + 1 > 0, and the remaining pair is pair_positive.
template <class T>
bool triple_positive(const GraphOverZ<T>& g1, const GraphOverZ<T>& g2) {
  const T e1 = abs2(g1.a) - abs2(g1.b) + T(1);
  const T e2 = abs2(g2.a) - abs2(g2.b) + T(1);
  return e1 > T(0) && e2 > T(0) && pair_positive(g1, g2);
}

// ---------------------------------------------------------------------------
// Unitary coordinate moves.

// 2x2 complex matrix acting on column vectors (z, w). Instances produced by
// normalize_slope are special unitary: A* A = I and det A = 1, exactly in
// exact arithmetic and within 1e-12 in floating point.
struct UnitaryMove {
  std::array<std::array<Cx<double>, 2>, 2> m{};

  static UnitaryMove identity() {
    UnitaryMove u;
    u.m[0][0] = Cx<double>(1.0);
    u.m[1][1] = Cx<double>(1.0);
    return u;
  }

  std::pair<Cx<double>, Cx<double>> apply(const Cx<double>& z, const Cx<double>& w) const {
    return {m[0][0] * z + m[0][1] * w, m[1][0] * z + m[1][1] * w};
  }

  // Conjugate transpose; equals the inverse whenever the move is unitary.
  UnitaryMove adjoint() const {
    UnitaryMove u;
    u.m[0][0] = m[0][0].conj();
    u.m[0][1] = m[1][0].conj();
    u.m[1][0] = m[0][1].conj();
    u.m[1][1] = m[1][1].conj();
    return u;
  }

  // Matrix product: (this->compose(rhs)).apply(v) == this->apply(rhs.apply(v)).
  UnitaryMove compose(const UnitaryMove& rhs) const {
    UnitaryMove u;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        u.m[i][j] = m[i][0] * rhs.m[0][j] + m[i][1] * rhs.m[1][j];
      }
    }
    return u;
  }

  Cx<double> det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

  // max-norm of A* A - I; zero for an exactly unitary matrix.
  double unitary_defect() const {
    const UnitaryMove p = adjoint().compose(*this);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Cx<double> e = p.m[i][j];
        if (i == j) e = e - Cx<double>(1.0);
        worst = std::max(worst, std::sqrt(abs2(e)));
      }
    }
    return worst;
  }
};

// Determinant-1 unitary taking {w = 0} onto {w = alpha0 z}:
//   (1 / sqrt(1 + |alpha0|^2)) [[1, -conj(alpha0)], [alpha0, 1]].
inline UnitaryMove normalize_slope(const Cx<double>& alpha0) {
  const double s = 1.0 / std::sqrt(1.0 + abs2(alpha0));
  UnitaryMove u;
  u.m[0][0] = Cx<double>(s);
  u.m[0][1] = (-alpha0.conj()) * s;
  u.m[1][0] = alpha0 * s;
  u.m[1][1] = Cx<double>(s);
  return u;
}

// Complex line through the origin: either {w = slope * z} or the vertical
// axis {z = 0}. Linear moves map complex lines to complex lines.
struct ComplexLine {
  bool vertical = false;
  Cx<double> slope{};

  static ComplexLine of_slope(const Cx<double>& c) { return {false, c}; }
  static ComplexLine vertical_axis() { return {true, Cx<double>{}}; }
};

inline ComplexLine line_image(const UnitaryMove& u, const ComplexLine& line) {
  // Push a spanning vector through the move: (1, slope) or (0, 1).
  const Cx<double> z0 = line.vertical ? Cx<double>{} : Cx<double>(1.0);
  const Cx<double> w0 = line.vertical ? Cx<double>(1.0) : line.slope;
  auto [p, q] = u.apply(z0, w0);
  const double scale = std::sqrt(abs2(p)) + std::sqrt(abs2(q));
  if (std::sqrt(abs2(p)) <= 1e-14 * scale) {
    return ComplexLine::vertical_axis();
  }
  return ComplexLine::of_slope(q / p);
}

// ---------------------------------------------------------------------------
// Determinant oracle. Classifies a pair of 2-planes by evaluating w0 and
// w0 ^ w0 on explicit spanning vectors, with no reference to the closed-form
// margins above; used to cross-validate every predicate in this header.

// Two spanning vectors of a real 2-plane, coordinates (x1, y1, x2, y2).
// Vector order fixes the orientation of the plane.
template <class T>
struct PlaneBasis {
  std::array<std::array<T, 4>, 2> v{};
};

// Value of w0 = dx1^dy1 + dx2^dy2 on a pair of tangent vectors.
template <class T>
T omega0(const std::array<T, 4>& u, const std::array<T, 4>& v) {
  return u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
}

namespace detail {

template <class T>
T det3(const T& a00, const T& a01, const T& a02, const T& a10, const T& a11, const T& a12,
       const T& a20, const T& a21, const T& a22) {
  return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
         a02 * (a10 * a21 - a11 * a20);
}

template <class T>
T det4(const std::array<std::array<T, 4>, 4>& r) {
  T d{};
  for (int j = 0; j < 4; ++j) {
    int c[3];
    int n = 0;
    for (int k = 0; k < 4; ++k) {
      if (k != j) c[n++] = k;
    }
    const T minor = det3(r[1][c[0]], r[1][c[1]], r[1][c[2]], r[2][c[0]], r[2][c[1]], r[2][c[2]],
                         r[3][c[0]], r[3][c[1]], r[3][c[2]]);
    const T term = r[0][j] * minor;
    if (j % 2 == 0) {
      d = d + term;
    } else {
      d = d - term;
    }
  }
  return d;
}

// A 2x4 row pair is rank-deficient iff all six 2x2 minors vanish.
template <class T>
bool rank_deficient(const PlaneBasis<T>& b) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (b.v[0][i] * b.v[1][j] - b.v[0][j] * b.v[1][i] != T(0)) return false;
    }
  }
  return true;
}

}  // namespace detail

// Value of w0 ^ w0 on the four stacked vectors; equals twice the determinant
// of the 4x4 matrix with the vectors as rows, since w0^2 = 2 vol.
template <class T>
T omega0_sq(const PlaneBasis<T>& b0, const PlaneBasis<T>& b1) {
  return T(2) * detail::det4<T>({b0.v[0], b0.v[1], b1.v[0], b1.v[1]});
}

// Classifies the plane of b1 against the reference plane of b0 from first
// principles: the restricted form on b1 decides symplecticity, the joint
// 4-form decides transversality, and the product of the three quantities
// decides positivity (multiplying by the restrictions re-orients both planes
// positively when possible).
template <class T>
Classification<T> oracle_classify(const PlaneBasis<T>& b0, const PlaneBasis<T>& b1) {
  if (detail::rank_deficient(b0) || detail::rank_deficient(b1)) {
    throw DegenerateBasis("oracle_classify: basis vectors are linearly dependent");
  }
  const T r0 = omega0(b0.v[0], b0.v[1]);
  const T r1 = omega0(b1.v[0], b1.v[1]);
  const T joint = omega0_sq(b0, b1);
  Classification<T> c;
  c.symplectic_margin = r1;
  c.transverse_margin = joint;
  c.positive_margin = joint * r0 * r1;
  c.symplectic = r1 != T(0);
  c.transverse_to_reference = joint != T(0);
  c.positive = c.positive_margin > T(0);
  return c;
}

// Basis of the graph w = a z + b zbar from the z-steps 1 and i.
template <class T>
PlaneBasis<T> basis_of_z_graph(const GraphOverZ<T>& g) {
  const Cx<T> at1 = g.a + g.b;                          // w at z = 1
  const Cx<T> ati = (g.a - g.b) * Cx<T>(T(0), T(1));    // w at z = i
  PlaneBasis<T> b;
  b.v[0] = {T(1), T(0), at1.re, at1.im};
  b.v[1] = {T(0), T(1), ati.re, ati.im};
  return b;
}

// Basis of the graph z = alpha w + beta wbar from the w-steps 1 and i.
template <class T>
PlaneBasis<T> basis_of_w_graph(const GraphOverW<T>& g) {
  const Cx<T> at1 = g.alpha + g.beta;
  const Cx<T> ati = (g.alpha - g.beta) * Cx<T>(T(0), T(1));
  PlaneBasis<T> b;
  b.v[0] = {at1.re, at1.im, T(1), T(0)};
  b.v[1] = {ati.re, ati.im, T(0), T(1)};
  return b;
}

// Oriented bases of the two coordinate planes.
template <class T>
PlaneBasis<T> horizontal_basis() {
  return basis_of_z_graph(GraphOverZ<T>{});
}

template <class T>
PlaneBasis<T> vertical_basis() {
  return basis_of_w_graph(GraphOverW<T>{});
}

}  // namespace sympsurf
