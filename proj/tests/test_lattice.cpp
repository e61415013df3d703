#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "wt/lattice.hpp"

using namespace wt;

TEST_SUITE_BEGIN("lattice");

TEST_CASE("centered box and wavevectors in 1-D") {
  const FourierLattice lat = build_lattice(1, 4, 2.0 * pi);
  REQUIRE(lat.mode_count() == 4);
  std::multiset<double> ks;
  for (int i = 0; i < 4; ++i) ks.insert(lat.wavevector(i).x());
  CHECK(ks == std::multiset<double>({-2.0, -1.0, 0.0, 1.0}));
}

TEST_CASE("2-D lattice size and spacing") {
  const FourierLattice lat = build_lattice(2, 8, 1.0);
  CHECK(lat.mode_count() == 64);
  CHECK(lat.spacing() == doctest::Approx(2.0 * pi));
  CHECK(lat.k_max() == doctest::Approx(pi * 8.0));
}

TEST_CASE("degenerate input rejected") {
  CHECK_THROWS_AS(build_lattice(1, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(1, 4, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(4, 4, 1.0), std::invalid_argument);
}

TEST_CASE("index and wavevector maps are mutually inverse") {
  for (int dim : {1, 2, 3}) {
    const FourierLattice lat = build_lattice(dim, dim == 3 ? 5 : 8, 3.7);
    for (int i = 0; i < lat.mode_count(); ++i) {
      const IndexVec v = lat.index_vector(i);
      CHECK(lat.flat_index(v) == i);
      const KVec k = lat.wavevector(i);
      for (int d = 0; d < 3; ++d)
        CHECK(k[d] == doctest::Approx(2.0 * pi * v[d] / lat.box_length));
    }
  }
}

namespace {
double omega_abs(const KVec& k) { return k.norm(); }
}

TEST_CASE("triads: momentum constraint only at infinite broadening") {
  const FourierLattice lat = build_lattice(1, 8, 2.0 * pi);
  const auto triads = find_triads(
      lat, omega_abs, std::numeric_limits<double>::infinity());
  // oracle: direct scan over all index pairs
  std::set<std::tuple<int, int, int>> expect;
  for (int m = 0; m < 8; ++m)
    for (int n = 0; n < 8; ++n) {
      const IndexVec vm = lat.index_vector(m), vn = lat.index_vector(n);
      if (vm.isZero() || vn.isZero()) continue;
      const int j = lat.flat_index(IndexVec(vm + vn));
      if (j < 0 || lat.is_zero_mode(j)) continue;
      expect.insert({j, m, n});
    }
  std::set<std::tuple<int, int, int>> got;
  for (const Triad& t : triads) {
    got.insert({t.j, t.m, t.n});
    const IndexVec sum = lat.index_vector(t.m) + lat.index_vector(t.n);
    CHECK(lat.flat_index(sum) == t.j);
  }
  CHECK(got == expect);
}

TEST_CASE("triads of the non-dispersive law are the co-directed triples") {
  const FourierLattice lat = build_lattice(1, 16, 2.0 * pi);
  const auto triads = find_triads(lat, omega_abs, 0.0);
  CHECK(!triads.empty());
  for (const Triad& t : triads) {
    const double km = lat.wavevector(t.m).x();
    const double kn = lat.wavevector(t.n).x();
    CHECK(km * kn > 0.0); // same sign: |m+n| = |m| + |n|
    CHECK(t.detuning == 0.0);
  }
  // oracle count
  int count = 0;
  for (int m = -8; m <= 7; ++m)
    for (int n = -8; n <= 7; ++n) {
      if (m == 0 || n == 0) continue;
      const int j = m + n;
      if (j == 0 || j < -8 || j > 7) continue;
      if (std::abs(std::abs(j) - std::abs(m) - std::abs(n)) == 0) ++count;
    }
  CHECK(static_cast<int>(triads.size()) == count);
}

TEST_CASE("capillary dispersion has no exact triads on a coarse lattice") {
  const FourierLattice lat = build_lattice(1, 8, 2.0 * pi);
  const auto omega_cap = [](const KVec& k) {
    return std::sqrt(std::pow(k.norm(), 3));
  };
  CHECK(find_triads(lat, omega_cap, 0.0).empty());
  // broadening monotonicity: larger windows keep supersets
  std::size_t prev = 0;
  for (double dw : {0.1, 0.5, 2.0, 10.0}) {
    const auto t = find_triads(lat, omega_cap, dw);
    CHECK(t.size() >= prev);
    prev = t.size();
  }
}

TEST_CASE("triad list is closed under m <-> n and avoids the zero mode") {
  const FourierLattice lat = build_lattice(2, 6, 1.0);
  const auto omega = [](const KVec& k) { return k.squaredNorm(); };
  const auto triads = find_triads(lat, omega, 5.0);
  std::set<std::tuple<int, int, int>> got;
  for (const Triad& t : triads) {
    got.insert({t.j, t.m, t.n});
    CHECK(!lat.is_zero_mode(t.j));
    CHECK(!lat.is_zero_mode(t.m));
    CHECK(!lat.is_zero_mode(t.n));
  }
  for (const Triad& t : triads) CHECK(got.count({t.j, t.n, t.m}) == 1);
}

TEST_CASE("quartets: trivial pairings always resonate") {
  const FourierLattice lat = build_lattice(1, 8, 2.0 * pi);
  const auto omega = [](const KVec& k) { return k.squaredNorm(); };
  const auto quartets = find_quartets(lat, omega, 0.0);
  // every (j, l) pair of nonzero modes appears as the trivial pairing
  std::set<std::tuple<int, int, int, int>> got;
  for (const Quartet& q : quartets) got.insert({q.j, q.l, q.m, q.n});
  for (int j = 0; j < 8; ++j)
    for (int l = 0; l < 8; ++l) {
      if (lat.is_zero_mode(j) || lat.is_zero_mode(l)) continue;
      CHECK(got.count({j, l, j, l}) == 1);
      CHECK(got.count({j, l, l, j}) == 1);
    }
}

TEST_CASE("strictly convex 1-D dispersion admits only trivial pairings") {
  const FourierLattice lat = build_lattice(1, 12, 2.0 * pi);
  const auto omega = [](const KVec& k) { return k.squaredNorm(); };
  const auto quartets = find_quartets(lat, omega, 0.0);
  CHECK(!quartets.empty());
  for (const Quartet& q : quartets) {
    const bool trivial = (q.m == q.j && q.n == q.l) ||
                         (q.m == q.l && q.n == q.j);
    CHECK(trivial);
  }
}

TEST_CASE("2-D resonant quartet count matches the quadruple-loop oracle") {
  const FourierLattice lat = build_lattice(2, 6, 2.0 * pi);
  const auto omega = [](const KVec& k) { return k.squaredNorm(); };
  const auto quartets = find_quartets(lat, omega, 0.0);
  long nontrivial = 0;
  for (const Quartet& q : quartets) {
    const bool trivial = (q.m == q.j && q.n == q.l) ||
                         (q.m == q.l && q.n == q.j);
    if (!trivial) ++nontrivial;
  }
  // independent oracle: quadruple loop over all modes
  long oracle = 0;
  const int N = lat.mode_count();
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l)
      for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n) {
          if (lat.is_zero_mode(j) || lat.is_zero_mode(l) ||
              lat.is_zero_mode(m) || lat.is_zero_mode(n))
            continue;
          const IndexVec diff = lat.index_vector(j) + lat.index_vector(l) -
                                lat.index_vector(m) - lat.index_vector(n);
          if (!diff.isZero()) continue;
          const double det = omega(lat.wavevector(j)) +
                             omega(lat.wavevector(l)) -
                             omega(lat.wavevector(m)) -
                             omega(lat.wavevector(n));
          if (det != 0.0) continue;
          const bool trivial = (m == j && n == l) || (m == l && n == j);
          if (!trivial) ++oracle;
        }
  CHECK(nontrivial == oracle);
  CHECK(nontrivial > 0); // 2-D squares do have nontrivial resonances
}

TEST_SUITE_END();
