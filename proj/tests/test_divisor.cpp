#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sympsurf/divisor_calculus.hpp"
#include "sympsurf/rng.hpp"

using namespace sympsurf;

namespace {

using Vec = std::vector<long long>;
using Mat = std::vector<std::vector<long long>>;

IntersectionLattice lattice(Mat q, Vec k) {
  IntersectionLattice lat;
  lat.labels.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    lat.labels[i] = "X" + std::to_string(i);
  lat.Q = std::move(q);
  lat.K = std::move(k);
  return lat;
}

// Independent cross-check for the genus of n times a curve: peel one copy
// off the multiple and smooth the (n - 1) k intersection points between the
// two pieces, one step at a time.
long long recursive_multiple_genus(long long k, long long g, long long n) {
  long long gn = g;
  for (long long i = 2; i <= n; ++i) gn = gn + g + (i - 1) * k - 1;
  return gn;
}

Mat identity(std::size_t n) {
  Mat m(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat transpose(const Mat& a) {
  Mat t(a[0].size(), Vec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

Mat mul(const Mat& a, const Mat& b) {
  Mat c(a.size(), Vec(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t l = 0; l < b.size(); ++l)
      for (std::size_t j = 0; j < b[0].size(); ++j)
        c[i][j] += a[i][l] * b[l][j];
  return c;
}

// Random product of elementary integer moves: shears, swaps, and sign
// flips. Every factor has determinant +-1, so the product is unimodular.
Mat random_unimodular(Rng& rng, std::size_t n, int moves) {
  Mat u = identity(n);
  for (int step = 0; step < moves; ++step) {
    Mat e = identity(n);
    const auto i = static_cast<std::size_t>(rng.integer(0, n - 1));
    auto j = static_cast<std::size_t>(rng.integer(0, n - 2));
    if (j >= i) ++j;
    switch (rng.integer(0, 2)) {
      case 0:
        e[i][j] = rng.integer(1, 2) == 1 ? 1 : -1;
        break;
      case 1:
        std::swap(e[i], e[j]);
        break;
      default:
        e[i][i] = -1;
        break;
    }
    u = mul(u, e);
  }
  return u;
}

IntersectionLattice random_lattice(Rng& rng, std::size_t n) {
  Mat q(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      q[i][j] = q[j][i] = rng.integer(-4, 4);
  Vec k(n);
  for (auto& v : k) v = rng.integer(-2, 2);
  return lattice(std::move(q), std::move(k));
}

}  // namespace

TEST_CASE("pairing is the bilinear extension of the basis matrix") {
  const IntersectionLattice lat = torus_sphere_lattice();

  SECTION("worked values on the torus/sphere lattice") {
    CHECK(pair(lat, Vec{1, 0}, Vec{0, 1}) == 3);
    CHECK(pair(lat, Vec{1, 0}, Vec{1, 0}) == 0);
    CHECK(pair(lat, Vec{0, 1}, Vec{0, 1}) == -2);

    const SymplecticDivisor t1 = torus_sphere_divisor();
    CHECK(divisor_vector(t1, 2) == Vec{2, 3});
    CHECK(pair(lat, t1, Vec{0, 1}) == 0);
    CHECK(pair(lat, t1, Vec{1, 0}) == 9);
    CHECK(pair(lat, t1, t1) == 18);
  }

  SECTION("pairing against the zero class vanishes") {
    CHECK(pair(lat, Vec{5, -7}, Vec{0, 0}) == 0);
  }

  SECTION("bilinearity and symmetry on random classes") {
    Rng rng(901);
    const IntersectionLattice big = random_lattice(rng, 5);
    for (int trial = 0; trial < 200; ++trial) {
      Vec x(5), y(5), z(5);
      for (std::size_t i = 0; i < 5; ++i) {
        x[i] = rng.integer(-6, 6);
        y[i] = rng.integer(-6, 6);
        z[i] = rng.integer(-6, 6);
      }
      const long long a = rng.integer(-3, 3);
      CHECK(pair(big, x, y) == pair(big, y, x));
      Vec ay_plus_z(5);
      for (std::size_t i = 0; i < 5; ++i) ay_plus_z[i] = a * y[i] + z[i];
      CHECK(pair(big, x, ay_plus_z) == a * pair(big, x, y) + pair(big, x, z));
    }
  }

  SECTION("size and shape violations") {
    CHECK_THROWS_AS(pair(lat, Vec{1, 0, 0}, Vec{0, 1}), DimensionMismatch);
    CHECK_THROWS_AS(divisor_vector(SymplecticDivisor{{{2, 1}}}, 2),
                    DimensionMismatch);
    IntersectionLattice bad = lat;
    bad.Q[0][1] = 4;  // breaks symmetry
    CHECK_THROWS_AS(pair(bad, Vec{1, 0}, Vec{0, 1}), DimensionMismatch);
    bad = lat;
    bad.K.pop_back();
    CHECK_THROWS_AS(pair(bad, Vec{1, 0}, Vec{0, 1}), DimensionMismatch);
  }
}

TEST_CASE("signature by exact congruence diagonalization") {
  SECTION("definite, mixed, and degenerate examples") {
    CHECK(signature(lattice(identity(3), Vec(3, 0))) ==
          LatticeSignature{3, 0, 0});
    CHECK(signature(torus_sphere_lattice()) == LatticeSignature{1, 1, 0});
    CHECK(signature(lattice(Mat(4, Vec(4, 0)), Vec(4, 0))) ==
          LatticeSignature{0, 0, 4});
    // Zero diagonal throughout: the hyperbolic plane needs the off-diagonal
    // folding step.
    CHECK(signature(lattice({{0, 1}, {1, 0}}, {0, 0})) ==
          LatticeSignature{1, 1, 0});
    CHECK(signature(lattice({{1, 1}, {1, 1}}, {0, 0})) ==
          LatticeSignature{1, 0, 1});
  }

  SECTION("chain lattice splits as one hyperbolic block plus 16 spheres") {
    CHECK(signature(fiber_chain_lattice()) == LatticeSignature{1, 17, 0});
  }

  SECTION("invariant under integer change of basis") {
    Rng rng(902);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = static_cast<std::size_t>(rng.integer(2, 5));
      const IntersectionLattice lat = random_lattice(rng, n);
      const Mat u = random_unimodular(rng, n, 12);
      const Mat conj = mul(transpose(u), mul(lat.Q, u));
      const LatticeSignature a = signature(lat);
      const LatticeSignature b = signature(lattice(conj, Vec(n, 0)));
      CHECK(a == b);
      CHECK(a.b_plus + a.b_minus + a.b_zero == static_cast<long long>(n));
    }
  }
}

TEST_CASE("adjunction genus") {
  const IntersectionLattice lat = torus_sphere_lattice();

  SECTION("torus, sphere, and their genus-10 combination") {
    CHECK(adjunction_genus(lat, Vec{1, 0}) == 1);
    CHECK(adjunction_genus(lat, Vec{0, 1}) == 0);
    CHECK(adjunction_genus(lat, torus_sphere_divisor()) == 10);
  }

  SECTION("inconsistent lattice data is reported, not returned") {
    CHECK_THROWS_AS(adjunction_genus(lattice({{1}}, {0}), Vec{1}),
                    NonIntegral);
    CHECK_THROWS_AS(adjunction_genus(lattice({{-4}}, {0}), Vec{1}),
                    NegativeGenus);
  }
}

TEST_CASE("invariants of multiples of a positive curve") {
  SECTION("the k=18, g=10 family") {
    for (long long n = 1; n <= 10; ++n) {
      const auto inv = multiple_curve_invariants({18, 10, n});
      CHECK(inv.self_intersection == 18 * n * n);
      CHECK(inv.genus == 9 * n * n + 1);
    }
  }

  SECTION("n=1 returns the curve itself") {
    CHECK(multiple_curve_invariants({7, 3, 1}) == MultipleCurveInvariants{7, 3});
  }

  SECTION("closed form matches the one-copy-at-a-time recursion") {
    Rng rng(903);
    for (int trial = 0; trial < 50; ++trial) {
      const long long k = rng.integer(1, 9);
      const long long g = rng.integer(0, 6);
      const long long n = rng.integer(1, 12);
      const auto inv = multiple_curve_invariants({k, g, n});
      CHECK(inv.self_intersection == n * n * k);
      CHECK(inv.genus == recursive_multiple_genus(k, g, n));
    }
  }

  SECTION("agreement with adjunction on a lattice realizing K.C = 2g-2-k") {
    for (const long long k : {1LL, 2LL, 5LL, 18LL}) {
      for (const long long g : {0LL, 1LL, 3LL, 10LL}) {
        const IntersectionLattice lat =
            lattice({{k, 1}, {1, 0}}, {0, 2 * g - 2 - k});
        REQUIRE(adjunction_genus(lat, Vec{1, 0}) == g);
        for (long long n = 1; n <= 50; ++n) {
          CHECK(adjunction_genus(lat, Vec{n, 0}) ==
                multiple_curve_invariants({k, g, n}).genus);
        }
      }
    }
  }

  SECTION("hypothesis violations") {
    CHECK_THROWS_AS(multiple_curve_invariants({0, 1, 2}), InvalidQuery);
    CHECK_THROWS_AS(multiple_curve_invariants({-3, 1, 2}), InvalidQuery);
    CHECK_THROWS_AS(multiple_curve_invariants({4, 1, 0}), InvalidQuery);
    CHECK_THROWS_AS(multiple_curve_invariants({4, -1, 2}), InvalidQuery);
  }
}

TEST_CASE("genus of a smoothed nodal configuration") {
  SECTION("two pieces joined at one point form a connected sum") {
    CHECK(resolution_genus({2, 3}, 1, 2) == 5);
  }

  SECTION("a single smooth piece is untouched") {
    CHECK(resolution_genus({4}, 0, 1) == 4);
  }

  SECTION("extra nodes each add a handle") {
    // Peeling one copy off an n-fold multiple: the two pieces meet at
    // (n - 1) k points.
    for (long long n = 2; n <= 12; ++n) {
      const long long k = 5, g = 2;
      const long long prev = recursive_multiple_genus(k, g, n - 1);
      CHECK(resolution_genus({prev, g}, (n - 1) * k, 2) ==
            recursive_multiple_genus(k, g, n));
    }
  }

  SECTION("input violations") {
    CHECK_THROWS_AS(resolution_genus({1, 2}, 0, 2), Disconnected);
    CHECK_THROWS_AS(resolution_genus({1, 2, 3}, 5, 2), DimensionMismatch);
    CHECK_THROWS_AS(resolution_genus({1}, -1, 1), InvalidQuery);
    CHECK_THROWS_AS(resolution_genus({-1}, 0, 1), InvalidQuery);
    CHECK_THROWS_AS(resolution_genus({}, 0, 0), InvalidQuery);
  }
}

TEST_CASE("realizability report on the torus/sphere lattice") {
  const IntersectionLattice lat = torus_sphere_lattice();

  SECTION("3D + 2T is realizable and avoids the sphere") {
    const RealizabilityReport rep = realizability(lat, torus_sphere_divisor());
    CHECK(rep.effective);
    CHECK(rep.realizable);
    CHECK(rep.reason.empty());
    CHECK(rep.pairings == Vec{9, 0});
    REQUIRE(rep.disjoint_from.size() == 1);
    CHECK(lat.labels[rep.disjoint_from[0]] == "D");
    REQUIRE(rep.genus.has_value());
    CHECK(*rep.genus == 10);
  }

  SECTION("a nonpositive coefficient blocks realizability") {
    const RealizabilityReport rep =
        realizability(lat, SymplecticDivisor{{{0, 2}, {1, -1}}});
    CHECK_FALSE(rep.effective);
    CHECK_FALSE(rep.realizable);
    CHECK(rep.reason == "coefficient of D is not positive");
  }

  SECTION("a negative pairing blocks realizability") {
    const RealizabilityReport rep =
        realizability(lat, SymplecticDivisor{{{1, 1}}});
    CHECK(rep.effective);
    CHECK_FALSE(rep.realizable);
    CHECK(rep.reason == "pairing with D is negative");
    CHECK(rep.pairings == Vec{3, -2});
    CHECK(rep.disjoint_from.empty());
    REQUIRE(rep.genus.has_value());
    CHECK(*rep.genus == 0);
  }
}

TEST_CASE("realizability report on the fiber/chain lattice") {
  const IntersectionLattice lat = fiber_chain_lattice();
  const SymplecticDivisor a = fiber_chain_divisor();

  SECTION("the bundled divisor is orthogonal to all seventeen spheres") {
    const RealizabilityReport rep = realizability(lat, a);
    CHECK(rep.effective);
    CHECK(rep.realizable);
    CHECK(rep.pairings[0] == 9);  // against the fiber
    for (std::size_t j = 1; j < lat.rank(); ++j) CHECK(rep.pairings[j] == 0);
    REQUIRE(rep.disjoint_from.size() == lat.rank() - 1);
    for (std::size_t j = 1; j < lat.rank(); ++j)
      CHECK(rep.disjoint_from[j - 1] == j);
    REQUIRE(rep.genus.has_value());
    CHECK(*rep.genus == 10);
  }

  SECTION("the sphere self-intersections are pinned by orthogonality") {
    // A . E1 = 0 and A . Ci = A . Ci' = 0 each solve to -2 given the chain
    // adjacency; any other value breaks one pairing.
    IntersectionLattice tweaked = lat;
    tweaked.Q[3][3] = -3;
    const RealizabilityReport rep = realizability(tweaked, a);
    CHECK_FALSE(rep.realizable);
    CHECK(rep.pairings[3] == -7);
    for (const std::size_t j : rep.disjoint_from) CHECK(j != 3);
  }

  SECTION("every basis sphere has adjunction genus 0 and the fiber genus 1") {
    for (std::size_t j = 0; j < lat.rank(); ++j) {
      Vec e(lat.rank(), 0);
      e[j] = 1;
      CHECK(adjunction_genus(lat, e) == (j == 0 ? 1 : 0));
    }
  }
}

TEST_CASE("blow-up bookkeeping") {
  const IntersectionLattice lat = torus_sphere_lattice();

  SECTION("a point off every curve splits off a (-1) class") {
    const IntersectionLattice up = blow_up(lat, {});
    REQUIRE(up.rank() == 3);
    CHECK(up.labels.back() == "E");
    CHECK(up.Q[0][0] == 0);
    CHECK(up.Q[0][1] == 3);
    CHECK(up.Q[1][1] == -2);
    CHECK(up.Q[0][2] == 0);
    CHECK(up.Q[1][2] == 0);
    CHECK(up.Q[2][2] == -1);
    CHECK(up.K == Vec{0, 0, 1});
    CHECK(adjunction_genus(up, Vec{0, 0, 1}) == 0);
  }

  SECTION("a smooth point on the torus") {
    const IntersectionLattice up = blow_up(lat, {{0, 1}});
    CHECK(up.Q[0][0] == -1);   // T^2 drops by one
    CHECK(up.Q[0][2] == 1);    // T meets E once
    CHECK(up.Q[0][1] == 3);    // T . D is untouched
    CHECK(pair(up, up.K, Vec{1, 0, 0}) == 1);  // K . T grows by one
    CHECK(adjunction_genus(up, Vec{1, 0, 0}) == 1);
    CHECK(adjunction_genus(up, Vec{0, 1, 0}) == 0);
    CHECK(signature(up) == LatticeSignature{1, 2, 0});
  }

  SECTION("genus preservation and signature drop on random lattices") {
    Rng rng(904);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = static_cast<std::size_t>(rng.integer(2, 5));
      IntersectionLattice base = random_lattice(rng, n);
      // Force even diagonal so every basis curve has an integral genus, and
      // lift the self-intersections until those genera are nonnegative.
      for (std::size_t i = 0; i < n; ++i) {
        base.K[i] = 0;
        if (base.Q[i][i] % 2 != 0) ++base.Q[i][i];
        while (base.Q[i][i] < -2) base.Q[i][i] += 2;
      }
      std::vector<std::pair<std::size_t, long long>> through;
      for (std::size_t i = 0; i < n; ++i)
        if (rng.integer(0, 1) == 1) through.push_back({i, rng.integer(0, 1)});
      const IntersectionLattice up = blow_up(base, through);

      REQUIRE(up.rank() == n + 1);
      const LatticeSignature before = signature(base);
      const LatticeSignature after = signature(up);
      CHECK(after.b_plus == before.b_plus);
      CHECK(after.b_minus == before.b_minus + 1);
      CHECK(after.b_zero == before.b_zero);
      for (std::size_t i = 0; i < n; ++i) {
        Vec e_old(n, 0), e_new(n + 1, 0);
        e_old[i] = 1;
        e_new[i] = 1;
        CHECK(adjunction_genus(up, e_new) == adjunction_genus(base, e_old));
      }
    }
  }

  SECTION("a double point on a sphere cannot exist") {
    CHECK_THROWS_AS(blow_up(lat, {{1, 2}}), AdjunctionBroken);
  }

  SECTION("a double point on the genus-10 class is fine") {
    // Pass to a basis containing 3D + 2T: its proper transform loses one
    // handle, landing at genus 9.
    const IntersectionLattice t1 = lattice({{18}}, {0});
    const IntersectionLattice up = blow_up(t1, {{0, 2}});
    CHECK(up.Q[0][0] == 14);
    CHECK(adjunction_genus(up, Vec{1, 0}) == 9);
  }

  SECTION("input violations") {
    CHECK_THROWS_AS(blow_up(lat, {{2, 1}}), DimensionMismatch);
    CHECK_THROWS_AS(blow_up(lat, {{0, -1}}), InvalidQuery);
    CHECK_THROWS_AS(blow_up(lat, {{0, 1}, {0, 1}}), InvalidQuery);
  }
}

TEST_CASE("Seifert bundle second homology") {
  SECTION("three disjoint surfaces with prime-power multiplicities") {
    SeifertInput in;
    in.b2X = 3;
    in.data = {{5, 10}, {25, 10}, {125, 10}};
    const AbelianGroupDescriptor g = seifert_h2(in);
    CHECK(g.rank == 2);
    REQUIRE(g.torsion.size() == 3);
    CHECK(g.torsion[0] == AbelianGroupDescriptor::TorsionBlock{5, 5, 1, 20});
    CHECK(g.torsion[1] == AbelianGroupDescriptor::TorsionBlock{25, 5, 2, 20});
    CHECK(g.torsion[2] == AbelianGroupDescriptor::TorsionBlock{125, 5, 3, 20});
    CHECK(to_string(g) == "Z^2 + Z_5^20 + Z_25^20 + Z_125^20");
  }

  SECTION("empty isotropy keeps only the free part") {
    SeifertInput in;
    in.b2X = 7;
    const AbelianGroupDescriptor g = seifert_h2(in);
    CHECK(g.rank == 6);
    CHECK(g.torsion.empty());
    CHECK(to_string(g) == "Z^6");
  }

  SECTION("composite multiplicities split into prime powers") {
    SeifertInput in;
    in.b2X = 2;
    in.data = {{12, 2}};
    const AbelianGroupDescriptor g = seifert_h2(in);
    REQUIRE(g.torsion.size() == 2);
    // Canonical order sorts by (prime, exponent), so the 2-power block
    // precedes the 3-power block.
    CHECK(g.torsion[0] == AbelianGroupDescriptor::TorsionBlock{4, 2, 2, 4});
    CHECK(g.torsion[1] == AbelianGroupDescriptor::TorsionBlock{3, 3, 1, 4});
    CHECK(to_string(g) == "Z + Z_4^4 + Z_3^4");
  }

  SECTION("equal prime powers from different surfaces merge") {
    SeifertInput in;
    in.b2X = 2;
    in.data = {{5, 1}, {5, 2}, {1, 9}, {7, 0}};
    const AbelianGroupDescriptor g = seifert_h2(in);
    REQUIRE(g.torsion.size() == 1);
    CHECK(g.torsion[0] == AbelianGroupDescriptor::TorsionBlock{5, 5, 1, 6});
  }

  SECTION("torsion order equals the product of m^(2g)") {
    Rng rng(905);
    for (int trial = 0; trial < 60; ++trial) {
      SeifertInput in;
      in.b2X = rng.integer(1, 5);
      const int surfaces = static_cast<int>(rng.integer(0, 5));
      for (int i = 0; i < surfaces; ++i)
        in.data.push_back({rng.integer(1, 40), rng.integer(0, 4)});
      const AbelianGroupDescriptor g = seifert_h2(in);
      CHECK(g.rank == in.b2X - 1);
      BigInt expected = 1;
      for (const auto& iso : in.data)
        for (long long h = 0; h < 2 * iso.genus; ++h)
          expected *= iso.multiplicity;
      BigInt actual = 1;
      for (const auto& b : g.torsion)
        for (long long c = 0; c < b.count; ++c) actual *= b.order;
      CHECK(expected == actual);
    }
  }

  SECTION("intersecting surfaces must have coprime multiplicities") {
    SeifertInput in;
    in.b2X = 3;
    in.data = {{4, 1}, {6, 2}, {5, 1}};
    in.adjacency.assign(3, std::vector<bool>(3, false));
    in.adjacency[0][2] = in.adjacency[2][0] = true;
    CHECK_NOTHROW(seifert_h2(in));  // gcd(4, 5) = 1

    in.adjacency[0][1] = in.adjacency[1][0] = true;  // gcd(4, 6) = 2
    try {
      seifert_h2(in);
      FAIL("expected GcdViolation");
    } catch (const GcdViolation& e) {
      const std::string what = e.what();
      CHECK(what.find("0 and 1") != std::string::npos);
      CHECK(what.find("4 and 6") != std::string::npos);
    }
  }

  SECTION("input violations") {
    SeifertInput in;
    in.b2X = 0;
    CHECK_THROWS_AS(seifert_h2(in), InvalidQuery);
    in.b2X = 2;
    in.data = {{0, 1}};
    CHECK_THROWS_AS(seifert_h2(in), InvalidQuery);
    in.data = {{2, -1}};
    CHECK_THROWS_AS(seifert_h2(in), InvalidQuery);
    in.data = {{2, 1}, {3, 1}};
    in.adjacency.assign(3, std::vector<bool>(3, false));
    CHECK_THROWS_AS(seifert_h2(in), DimensionMismatch);
  }
}

TEST_CASE("isotropy family groups") {
  SECTION("one pair with p = 5") {
    const AbelianGroupDescriptor g = isotropy_family_group(1, {{{1, 1}, 5}});
    CHECK(g.rank == 2);
    REQUIRE(g.torsion.size() == 3);
    CHECK(g.torsion[0] == AbelianGroupDescriptor::TorsionBlock{5, 5, 1, 20});
    CHECK(g.torsion[1] == AbelianGroupDescriptor::TorsionBlock{25, 5, 2, 20});
    CHECK(g.torsion[2] == AbelianGroupDescriptor::TorsionBlock{125, 5, 3, 20});
    CHECK(to_string(g) == "Z^2 + Z_5^20 + Z_25^20 + Z_125^20");
  }

  SECTION("N = 2 produces twelve blocks with the advertised multiplicities") {
    const std::map<std::pair<long long, long long>, long long> primes = {
        {{1, 1}, 5}, {{1, 2}, 7}, {{2, 1}, 11}, {{2, 2}, 13}};
    const AbelianGroupDescriptor g = isotropy_family_group(2, primes);
    CHECK(g.rank == 2);
    REQUIRE(g.torsion.size() == 12);
    for (const auto& [nm, p] : primes) {
      const auto [n, m] = nm;
      for (const auto& b : g.torsion) {
        if (b.prime != p) continue;
        if (b.exponent == 1) CHECK(b.count == 18 * n * n + 2);
        if (b.exponent == 2) CHECK(b.count == 18 * m * m + 2);
        if (b.exponent == 3) CHECK(b.count == 20);
      }
    }
  }

  SECTION("total number of cyclic factors follows the double sum") {
    const std::vector<long long> pool = {5,  7,  11, 13, 17, 19, 23, 29,
                                         31, 37, 41, 43, 47, 53, 59, 61};
    for (long long N = 1; N <= 4; ++N) {
      std::map<std::pair<long long, long long>, long long> primes;
      std::size_t next = 0;
      for (long long n = 1; n <= N; ++n)
        for (long long m = 1; m <= N; ++m) primes[{n, m}] = pool[next++];
      const AbelianGroupDescriptor g = isotropy_family_group(N, primes);
      long long factors = 0;
      for (const auto& b : g.torsion) factors += b.count;
      long long expected = 0;
      for (long long n = 1; n <= N; ++n)
        for (long long m = 1; m <= N; ++m)
          expected += (18 * n * n + 2) + (18 * m * m + 2) + 20;
      CHECK(factors == expected);
      CHECK(g.torsion.size() == static_cast<std::size_t>(3 * N * N));
    }
  }

  SECTION("prime constraints") {
    CHECK_THROWS_AS(isotropy_family_group(1, {{{1, 1}, 3}}),
                    PrimeConstraintViolated);
    CHECK_THROWS_AS(isotropy_family_group(1, {{{1, 1}, 4}}),
                    PrimeConstraintViolated);
    const std::map<std::pair<long long, long long>, long long> repeated = {
        {{1, 1}, 7}, {{1, 2}, 7}, {{2, 1}, 11}, {{2, 2}, 13}};
    CHECK_THROWS_AS(isotropy_family_group(2, repeated),
                    PrimeConstraintViolated);
    // max(3, n, m) only bites beyond N = 4: every prime above 3 is at least
    // 5, so the first pair it can reject is one with n or m equal to 5.
    std::map<std::pair<long long, long long>, long long> pool;
    const std::vector<long long> primes25 = {
        7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
        59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107};
    std::size_t next = 0;
    for (long long n = 1; n <= 5; ++n)
      for (long long m = 1; m <= 5; ++m) pool[{n, m}] = primes25[next++];
    CHECK_NOTHROW(isotropy_family_group(5, pool));
    pool[{1, 5}] = 5;  // prime, and above 3, but not above max(3, 1, 5)
    CHECK_THROWS_AS(isotropy_family_group(5, pool), PrimeConstraintViolated);
    CHECK_THROWS_AS(isotropy_family_group(0, {}), InvalidQuery);
    CHECK_THROWS_AS(isotropy_family_group(2, {{{1, 1}, 5}}), InvalidQuery);
  }
}

TEST_CASE("canonical group strings") {
  CHECK(to_string(AbelianGroupDescriptor{}) == "0");
  CHECK(to_string(AbelianGroupDescriptor{1, {}}) == "Z");
  CHECK(to_string(AbelianGroupDescriptor{4, {}}) == "Z^4");
  CHECK(to_string(AbelianGroupDescriptor{0, {{9, 3, 2, 1}}}) == "Z_9");
  CHECK(to_string(AbelianGroupDescriptor{1, {{3, 3, 1, 2}}}) == "Z + Z_3^2");
  CHECK(to_string(AbelianGroupDescriptor{0, {{2, 2, 1, 5}, {3, 3, 1, 1}}}) ==
        "Z_2^5 + Z_3");
}
