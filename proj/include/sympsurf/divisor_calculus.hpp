#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sympsurf/complex.hpp"
#include "sympsurf/errors.hpp"

// Exact integer arithmetic over intersection lattices: pairings, signatures,
// adjunction genera, invariants of multiples of a positive curve, divisor
// realizability reports, blow-up bookkeeping, and the second homology of
// Seifert bundles with prescribed isotropy. Everything here is integral or
// rational; no floating point enters any result.

namespace sympsurf {

// Intersection pairing on a chosen basis of curve classes, together with the
// canonical class written in coordinates over the same basis. `Q[i][j]` is
// the pairing of basis curves i and j.
struct IntersectionLattice {
  std::vector<std::string> labels;
  std::vector<std::vector<long long>> Q;
  std::vector<long long> K;

  std::size_t rank() const { return labels.size(); }
};

// Integer homology class in lattice coordinates. `genus` may carry the genus
// of an embedded representative; consistency with adjunction is checked by
// the operations that consume it, not on construction.
struct CurveClass {
  std::vector<long long> vector;
  std::optional<long long> genus;
};

// Finite formal sum of basis curves: a list of (basis index, coefficient).
// Repeated indices accumulate.
struct SymplecticDivisor {
  std::vector<std::pair<std::size_t, long long>> terms;
};

// Input for the second homology of a Seifert bundle: second Betti number of
// the 4-dimensional base, one (multiplicity, genus) entry per isotropy
// surface, and which pairs of isotropy surfaces intersect. An empty
// adjacency matrix means all surfaces are disjoint.
struct SeifertInput {
  long long b2X = 1;
  struct Isotropy {
    long long multiplicity = 1;
    long long genus = 0;
  };
  std::vector<Isotropy> data;
  std::vector<std::vector<bool>> adjacency;
};

// Finitely generated abelian group in normal form: a free rank plus cyclic
// prime-power factors Z_{p^e}, each with a multiplicity, listed in
// increasing (prime, exponent) order.
struct AbelianGroupDescriptor {
  struct TorsionBlock {
    long long order = 0;  // p^exponent
    long long prime = 0;
    long long exponent = 0;
    long long count = 0;

    friend bool operator==(const TorsionBlock&, const TorsionBlock&) = default;
  };

  long long rank = 0;
  std::vector<TorsionBlock> torsion;

  friend bool operator==(const AbelianGroupDescriptor&,
                         const AbelianGroupDescriptor&) = default;
};

// A curve with positive self-intersection k and genus g, to be replaced by a
// smooth representative of n times its class.
struct MultipleCurveQuery {
  long long k = 1;
  long long g = 0;
  long long n = 1;
};

struct MultipleCurveInvariants {
  long long self_intersection = 0;
  long long genus = 0;

  friend bool operator==(const MultipleCurveInvariants&,
                         const MultipleCurveInvariants&) = default;
};

// Counts of positive, negative, and zero diagonal entries after exact
// congruence diagonalization; by Sylvester's law of inertia these equal the
// eigenvalue sign counts of Q.
struct LatticeSignature {
  long long b_plus = 0;
  long long b_minus = 0;
  long long b_zero = 0;

  friend bool operator==(const LatticeSignature&,
                         const LatticeSignature&) = default;
};

namespace detail {

inline void require_lattice(const IntersectionLattice& lat) {
  const std::size_t n = lat.labels.size();
  if (lat.Q.size() != n || lat.K.size() != n)
    throw DimensionMismatch("lattice fields disagree on rank");
  for (const auto& row : lat.Q)
    if (row.size() != n) throw DimensionMismatch("pairing matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (lat.Q[i][j] != lat.Q[j][i])
        throw DimensionMismatch("pairing matrix is not symmetric");
}

inline void require_size(const IntersectionLattice& lat,
                         const std::vector<long long>& v) {
  if (v.size() != lat.rank())
    throw DimensionMismatch("class has wrong number of coordinates");
}

}  // namespace detail

// Dense coordinate vector of a divisor; indices must lie below `rank`.
inline std::vector<long long> divisor_vector(const SymplecticDivisor& d,
                                             std::size_t rank) {
  std::vector<long long> v(rank, 0);
  for (const auto& [index, coeff] : d.terms) {
    if (index >= rank)
      throw DimensionMismatch("divisor references a curve outside the lattice");
    v[index] += coeff;
  }
  return v;
}

// Bilinear extension x^T Q y of the basis pairing.
inline long long pair(const IntersectionLattice& lat,
                      const std::vector<long long>& x,
                      const std::vector<long long>& y) {
  detail::require_lattice(lat);
  detail::require_size(lat, x);
  detail::require_size(lat, y);
  long long total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    long long row = 0;
    for (std::size_t j = 0; j < y.size(); ++j) row += lat.Q[i][j] * y[j];
    total += x[i] * row;
  }
  return total;
}

inline long long pair(const IntersectionLattice& lat, const CurveClass& x,
                      const CurveClass& y) {
  return pair(lat, x.vector, y.vector);
}

inline long long pair(const IntersectionLattice& lat,
                      const SymplecticDivisor& x, const SymplecticDivisor& y) {
  return pair(lat, divisor_vector(x, lat.rank()), divisor_vector(y, lat.rank()));
}

inline long long pair(const IntersectionLattice& lat,
                      const SymplecticDivisor& x,
                      const std::vector<long long>& y) {
  return pair(lat, divisor_vector(x, lat.rank()), y);
}

// Exact signature of the pairing via symmetric Gaussian elimination over the
// rationals (congruence transformations only, so the inertia is preserved).
inline LatticeSignature signature(const IntersectionLattice& lat) {
  detail::require_lattice(lat);
  const std::size_t n = lat.rank();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = Rational(lat.Q[i][j]);

  LatticeSignature sig;
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      // Prefer moving a nonzero diagonal entry into the pivot; failing that,
      // fold a nonzero off-diagonal entry onto the diagonal. Both are
      // congruences (simultaneous row and column operations).
      std::size_t d = k;
      while (d < n && m[d][d] == 0) ++d;
      if (d < n) {
        std::swap(m[k], m[d]);
        for (std::size_t i = 0; i < n; ++i) std::swap(m[i][k], m[i][d]);
      } else {
        std::size_t j = k + 1;
        while (j < n && m[k][j] == 0) ++j;
        if (j == n) {
          ++sig.b_zero;  // row k pairs with nothing that is left
          continue;
        }
        // All remaining diagonal entries vanish, so adding row/column j to
        // row/column k lands 2 m[k][j] != 0 in the pivot.
        for (std::size_t i = 0; i < n; ++i) m[k][i] += m[j][i];
        for (std::size_t i = 0; i < n; ++i) m[i][k] += m[i][j];
      }
    }
    const Rational pivot = m[k][k];
    if (pivot > 0)
      ++sig.b_plus;
    else
      ++sig.b_minus;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      const Rational f = m[i][k] / pivot;
      for (std::size_t j = 0; j < n; ++j) m[i][j] -= f * m[k][j];
      for (std::size_t j = 0; j < n; ++j) m[j][i] -= f * m[j][k];
    }
  }
  return sig;
}

// Genus forced by adjunction: g = (K.c + c.c + 2) / 2.
inline long long adjunction_genus(const IntersectionLattice& lat,
                                  const std::vector<long long>& c) {
  const long long twice = pair(lat, lat.K, c) + pair(lat, c, c) + 2;
  if (twice % 2 != 0)
    throw NonIntegral("adjunction genus is not an integer");
  const long long g = twice / 2;
  if (g < 0) throw NegativeGenus("adjunction genus is negative");
  return g;
}

inline long long adjunction_genus(const IntersectionLattice& lat,
                                  const CurveClass& c) {
  return adjunction_genus(lat, c.vector);
}

inline long long adjunction_genus(const IntersectionLattice& lat,
                                  const SymplecticDivisor& d) {
  return adjunction_genus(lat, divisor_vector(d, lat.rank()));
}

// Self-intersection and genus of a smooth representative of n times a curve
// of self-intersection k > 0 and genus g:
//   (n C)^2 = n^2 k,   g(n C) = n g - n + 1 + k n (n - 1) / 2.
inline MultipleCurveInvariants multiple_curve_invariants(
    const MultipleCurveQuery& q) {
  if (q.k <= 0)
    throw InvalidQuery("multiples require positive self-intersection");
  if (q.g < 0) throw InvalidQuery("genus must be nonnegative");
  if (q.n < 1) throw InvalidQuery("multiplicity must be at least 1");
  MultipleCurveInvariants out;
  out.self_intersection = q.n * q.n * q.k;
  out.genus = q.n * q.g - q.n + 1 + q.k * (q.n * (q.n - 1)) / 2;
  return out;
}

// Genus of the surface obtained by smoothing a nodal configuration of
// `components` closed surfaces joined by `nodes` transverse intersection
// points: g = sum of genera + nodes - components + 1 (Euler characteristic
// additivity, valid when the configuration is connected).
inline long long resolution_genus(const std::vector<long long>& genera,
                                  long long nodes, long long components) {
  if (components != static_cast<long long>(genera.size()))
    throw DimensionMismatch("one genus entry per component is required");
  if (nodes < 0) throw InvalidQuery("node count must be nonnegative");
  if (components < 1) throw InvalidQuery("at least one component is required");
  for (const long long g : genera)
    if (g < 0) throw InvalidQuery("genus must be nonnegative");
  if (nodes < components - 1)
    throw Disconnected("too few nodes to connect all components");
  long long total = 0;
  for (const long long g : genera) total += g;
  return total + nodes - components + 1;
}

// Report on whether a formal sum of basis curves can be realized by an
// embedded symplectic surface: every coefficient must be positive and the
// sum must pair nonnegatively with every basis curve. Basis curves pairing
// to zero can be kept disjoint from the representative.
struct RealizabilityReport {
  bool effective = false;
  std::vector<long long> pairings;
  bool realizable = false;
  std::vector<std::size_t> disjoint_from;
  std::optional<long long> genus;
  std::string reason;  // empty when realizable
};

inline RealizabilityReport realizability(const IntersectionLattice& lat,
                                         const SymplecticDivisor& d) {
  detail::require_lattice(lat);
  const std::vector<long long> v = divisor_vector(d, lat.rank());

  RealizabilityReport rep;
  rep.effective = true;
  for (const auto& [index, coeff] : d.terms) {
    if (coeff <= 0 && rep.reason.empty()) {
      rep.effective = false;
      rep.reason = "coefficient of " + lat.labels[index] + " is not positive";
    }
  }

  bool nonneg = true;
  rep.pairings.resize(lat.rank());
  std::vector<long long> basis(lat.rank(), 0);
  for (std::size_t j = 0; j < lat.rank(); ++j) {
    basis[j] = 1;
    rep.pairings[j] = pair(lat, v, basis);
    basis[j] = 0;
    if (rep.pairings[j] == 0) rep.disjoint_from.push_back(j);
    if (rep.pairings[j] < 0) {
      nonneg = false;
      if (rep.reason.empty())
        rep.reason = "pairing with " + lat.labels[j] + " is negative";
    }
  }
  rep.realizable = rep.effective && nonneg;

  const long long twice = pair(lat, lat.K, v) + pair(lat, v, v) + 2;
  if (twice % 2 == 0 && twice / 2 >= 0) rep.genus = twice / 2;
  return rep;
}

// Blow up at one point lying on each listed basis curve with the given
// multiplicity (0 = point off the curve, 1 = smooth point, m = m-fold
// point). The returned basis consists of the proper transforms of the old
// basis curves followed by the exceptional class, and K gains the
// exceptional class. Throws AdjunctionBroken if a basis curve whose
// adjunction genus was a nonnegative integer would end up with a negative
// one (the curve cannot have a point of that multiplicity).
inline IntersectionLattice blow_up(
    const IntersectionLattice& lat,
    const std::vector<std::pair<std::size_t, long long>>& through,
    const std::string& exceptional_label = "E") {
  detail::require_lattice(lat);
  const std::size_t n = lat.rank();
  std::vector<long long> m(n, 0);
  for (const auto& [index, mult] : through) {
    if (index >= n)
      throw DimensionMismatch("blow-up references a curve outside the lattice");
    if (mult < 0) throw InvalidQuery("point multiplicity must be nonnegative");
    if (m[index] != 0)
      throw InvalidQuery("duplicate curve index in blow-up request");
    m[index] = mult;
  }

  IntersectionLattice out;
  out.labels = lat.labels;
  out.labels.push_back(exceptional_label);
  out.Q.assign(n + 1, std::vector<long long>(n + 1, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.Q[i][j] = lat.Q[i][j] - m[i] * m[j];
  for (std::size_t i = 0; i < n; ++i) {
    out.Q[i][n] = m[i];
    out.Q[n][i] = m[i];
  }
  out.Q[n][n] = -1;

  long long k_dot_m = 0;
  for (std::size_t i = 0; i < n; ++i) k_dot_m += lat.K[i] * m[i];
  out.K = lat.K;
  out.K.push_back(1 + k_dot_m);

  // A point of multiplicity m costs the curve m (m - 1) / 2 in genus; the
  // parity of K.C + C^2 is untouched, so only the sign can break.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<long long> e(n, 0);
    e[i] = 1;
    const long long old_twice = pair(lat, lat.K, e) + lat.Q[i][i] + 2;
    if (old_twice % 2 != 0 || old_twice < 0) continue;
    const long long new_genus = old_twice / 2 - m[i] * (m[i] - 1) / 2;
    if (new_genus < 0)
      throw AdjunctionBroken("genus of " + lat.labels[i] +
                             " would become negative");
  }
  return out;
}

namespace detail {

// Prime-power factorization by trial division; sufficient for isotropy
// multiplicities, which stay far below 2^31 in every use here.
inline std::vector<std::pair<long long, long long>> factorize(long long n) {
  std::vector<std::pair<long long, long long>> out;
  for (long long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    long long e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
    if (n % p == 0) return false;
  return true;
}

inline long long pow_ll(long long base, long long exp) {
  long long out = 1;
  for (long long i = 0; i < exp; ++i) out *= base;
  return out;
}

// Canonical torsion list from accumulated (prime, exponent) -> count.
inline std::vector<AbelianGroupDescriptor::TorsionBlock> torsion_blocks(
    const std::map<std::pair<long long, long long>, long long>& counts) {
  std::vector<AbelianGroupDescriptor::TorsionBlock> out;
  for (const auto& [pe, count] : counts) {
    if (count == 0) continue;
    AbelianGroupDescriptor::TorsionBlock b;
    b.prime = pe.first;
    b.exponent = pe.second;
    b.order = pow_ll(b.prime, b.exponent);
    b.count = count;
    out.push_back(b);
  }
  return out;
}

}  // namespace detail

// Second homology of a Seifert bundle over a simply connected 4-dimensional
// base with the given isotropy surfaces:
//   Z^(b2X - 1)  +  one Z_{m_i} summand for each of the 2 g_i handle loops
// of isotropy surface i, split into prime-power cyclic factors. Intersecting
// isotropy surfaces must have coprime multiplicities.
inline AbelianGroupDescriptor seifert_h2(const SeifertInput& in) {
  if (in.b2X < 1)
    throw InvalidQuery("base second Betti number must be positive");
  const std::size_t n = in.data.size();
  for (const auto& iso : in.data) {
    if (iso.multiplicity < 1)
      throw InvalidQuery("isotropy multiplicity must be positive");
    if (iso.genus < 0) throw InvalidQuery("genus must be nonnegative");
  }
  if (!in.adjacency.empty()) {
    if (in.adjacency.size() != n)
      throw DimensionMismatch("adjacency matrix size disagrees with data");
    for (const auto& row : in.adjacency)
      if (row.size() != n)
        throw DimensionMismatch("adjacency matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (in.adjacency[i][j] != in.adjacency[j][i])
          throw DimensionMismatch("adjacency matrix is not symmetric");
        if (!in.adjacency[i][j]) continue;
        const long long g =
            std::gcd(in.data[i].multiplicity, in.data[j].multiplicity);
        if (g != 1)
          throw GcdViolation("surfaces " + std::to_string(i) + " and " +
                             std::to_string(j) +
                             " intersect but their multiplicities " +
                             std::to_string(in.data[i].multiplicity) + " and " +
                             std::to_string(in.data[j].multiplicity) +
                             " share the factor " + std::to_string(g));
      }
  }

  std::map<std::pair<long long, long long>, long long> counts;
  for (const auto& iso : in.data) {
    if (iso.genus == 0) continue;
    for (const auto& [p, e] : detail::factorize(iso.multiplicity))
      counts[{p, e}] += 2 * iso.genus;
  }

  AbelianGroupDescriptor out;
  out.rank = in.b2X - 1;
  out.torsion = detail::torsion_blocks(counts);
  return out;
}

// Homology of the Seifert bundle whose isotropy locus consists, for every
// pair (n, m) with 1 <= n, m <= N, of three disjoint surfaces of genera
// 9 n^2 + 1, 9 m^2 + 1, and 10 carrying multiplicities p, p^2, p^3 for the
// prime p = primes[{n, m}]. The primes must be pairwise distinct and each
// must exceed max(3, n, m); the base has second Betti number 3, so the free
// rank is 2.
inline AbelianGroupDescriptor isotropy_family_group(
    long long N,
    const std::map<std::pair<long long, long long>, long long>& primes) {
  if (N < 1) throw InvalidQuery("family size must be positive");

  std::map<long long, std::pair<long long, long long>> seen;
  std::map<std::pair<long long, long long>, long long> counts;
  AbelianGroupDescriptor out;
  out.rank = 2;
  for (long long n = 1; n <= N; ++n)
    for (long long m = 1; m <= N; ++m) {
      const auto it = primes.find({n, m});
      if (it == primes.end())
        throw InvalidQuery("missing prime for pair (" + std::to_string(n) +
                           ", " + std::to_string(m) + ")");
      const long long p = it->second;
      if (!detail::is_prime(p) || p <= std::max<long long>(3, std::max(n, m)))
        throw PrimeConstraintViolated(
            "prime for pair (" + std::to_string(n) + ", " + std::to_string(m) +
            ") must be a prime exceeding max(3, n, m); got " +
            std::to_string(p));
      const auto [pos, fresh] = seen.try_emplace(p, std::make_pair(n, m));
      if (!fresh)
        throw PrimeConstraintViolated(
            "prime " + std::to_string(p) + " is reused by pairs (" +
            std::to_string(pos->second.first) + ", " +
            std::to_string(pos->second.second) + ") and (" + std::to_string(n) +
            ", " + std::to_string(m) + ")");

      SeifertInput in;
      in.b2X = 3;
      in.data = {{p, 9 * n * n + 1}, {p * p, 9 * m * m + 1}, {p * p * p, 10}};
      const AbelianGroupDescriptor block = seifert_h2(in);
      for (const auto& b : block.torsion) counts[{b.prime, b.exponent}] += b.count;
    }
  out.torsion = detail::torsion_blocks(counts);
  return out;
}

// Canonical presentation, e.g. "Z^2 + Z_5^20 + Z_25^20 + Z_125^20"; a free
// rank of 1 prints as "Z" and the trivial group prints as "0".
inline std::string to_string(const AbelianGroupDescriptor& g) {
  std::string out;
  const auto append = [&out](const std::string& part) {
    if (!out.empty()) out += " + ";
    out += part;
  };
  if (g.rank == 1) append("Z");
  if (g.rank > 1) append("Z^" + std::to_string(g.rank));
  for (const auto& b : g.torsion) {
    std::string part = "Z_" + std::to_string(b.order);
    if (b.count > 1) part += "^" + std::to_string(b.count);
    append(part);
  }
  return out.empty() ? "0" : out;
}

// --- bundled example lattices ----------------------------------------------

// Rank-2 lattice of a genus-1 curve T and a sphere D with T.D = 3; K = 0 is
// forced by adjunction from the two genera. The class 3 D + 2 T has
// self-intersection 18, genus 10, and pairs to zero with D.
inline IntersectionLattice torus_sphere_lattice() {
  IntersectionLattice lat;
  lat.labels = {"T", "D"};
  lat.Q = {{0, 3}, {3, -2}};
  lat.K = {0, 0};
  return lat;
}

inline SymplecticDivisor torus_sphere_divisor() {
  return SymplecticDivisor{{{1, 3}, {0, 2}}};  // 3 D + 2 T
}

// Rank-18 lattice of a genus-1 fiber F and seventeen spheres: E1 meets F
// once, and two chains C1..C8 and C1'..C8' hang off E1 with consecutive
// single intersections. Every sphere has self-intersection -2 (the unique
// values making the bundled divisor below orthogonal to all of them), F^2 =
// 0, and K = 0.
inline IntersectionLattice fiber_chain_lattice() {
  IntersectionLattice lat;
  lat.labels = {"F", "E1"};
  for (int i = 1; i <= 8; ++i) lat.labels.push_back("C" + std::to_string(i));
  for (int i = 1; i <= 8; ++i)
    lat.labels.push_back("C" + std::to_string(i) + "'");
  const std::size_t n = lat.labels.size();
  lat.Q.assign(n, std::vector<long long>(n, 0));
  lat.K.assign(n, 0);
  const auto meet = [&lat](std::size_t i, std::size_t j) {
    lat.Q[i][j] = 1;
    lat.Q[j][i] = 1;
  };
  for (std::size_t i = 1; i < n; ++i) lat.Q[i][i] = -2;
  meet(0, 1);             // F and E1
  meet(1, 2);             // E1 and C1
  meet(1, 10);            // E1 and C1'
  for (std::size_t i = 2; i < 9; ++i) meet(i, i + 1);
  for (std::size_t i = 10; i < 17; ++i) meet(i, i + 1);
  return lat;
}

// 2 F + 9 E1 + 8 (C1 + C1') + 7 (C2 + C2') + ... + 1 (C8 + C8'): pairs to
// zero with E1 and every chain sphere, and to 9 with F.
inline SymplecticDivisor fiber_chain_divisor() {
  SymplecticDivisor d;
  d.terms.push_back({0, 2});
  d.terms.push_back({1, 9});
  for (std::size_t i = 1; i <= 8; ++i) {
    d.terms.push_back({1 + i, static_cast<long long>(9 - i)});
    d.terms.push_back({9 + i, static_cast<long long>(9 - i)});
  }
  return d;
}

}  // namespace sympsurf
