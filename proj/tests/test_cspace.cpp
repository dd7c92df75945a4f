#include "cqblab/cspace.hpp"

#include <doctest.h>

using namespace cqblab;

namespace {

CSpace space(Family f, int r, std::vector<int> phi) { return build_cspace(build_algebra(f, r), std::move(phi)); }

std::vector<Rational> rats(std::initializer_list<int> v) {
  std::vector<Rational> out;
  for (int x : v) out.emplace_back(x);
  return out;
}

// Oracle for the KE coefficients of type A: B(a_ij, a_kl) from the e-basis
// inner product (e_i - e_j) . (e_k - e_l), summed over the frame.
Rational ke_type_a(const CSpace& s, const Root& a) {
  int total = 0;
  for (const auto& b : s.delta_phi) {
    auto d = [](int x, int y) { return x == y ? 1 : 0; };
    total += d(a.i, b.i) - d(a.i, b.k) - d(a.k, b.i) + d(a.k, b.k);
  }
  return Rational(total);
}

}  // namespace

TEST_CASE("build_cspace dimensions") {
  const CSpace a5 = space(Family::A, 5, {2, 4});
  CHECK(a5.n == 12);
  CHECK(a5.b2 == 2);
  CHECK(a5.descriptor() == "(A5, {2,4})");
  for (int r = 1; r <= 5; ++r) {
    std::vector<int> all;
    for (int i = 1; i <= r; ++i) all.push_back(i);
    CHECK(space(Family::A, r, all).n == r * (r + 1) / 2);
    CHECK(space(Family::A, r, {1}).n == r);
  }
  // Hermitian symmetric examples: quadric Q^{2r-1} and Lagrangian Grassmannian.
  CHECK(space(Family::B, 3, {1}).n == 5);
  CHECK(space(Family::C, 3, {3}).n == 6);
  CHECK(space(Family::D, 4, {1}).n == 6);
}

TEST_CASE("build_cspace rejects malformed phi") {
  const auto alg = build_algebra(Family::A, 3);
  CHECK_THROWS(build_cspace(alg, {}));
  CHECK_THROWS(build_cspace(alg, {0}));
  CHECK_THROWS(build_cspace(alg, {4}));
  CHECK_THROWS(build_cspace(alg, {2, 2}));
  CHECK(build_cspace(alg, {3, 1}).phi == std::vector<int>{1, 3});
}

TEST_CASE("frame is delta_phi in root order") {
  const CSpace s = space(Family::A, 5, {2, 4});
  for (const auto& r : s.delta_phi) {
    const bool excluded = (r.i == 1 && r.k == 2) || (r.i == 3 && r.k == 4) || (r.i == 5 && r.k == 6);
    CHECK_FALSE(excluded);
  }
  for (std::size_t j = 1; j < s.delta_phi.size(); ++j) CHECK(root_less(s.delta_phi[j - 1], s.delta_phi[j]));
  CHECK(s.frame_index({1, 0, 0, 0, 0}) == -1);
  CHECK(s.frame_index(s.delta_phi[3].coeffs) == 3);
}

TEST_CASE("invariant_metric examples") {
  const CSpace flag = space(Family::A, 2, {1, 2});
  const InvariantMetric m = invariant_metric(flag, rats({1, 1}));
  CHECK(m.g == rats({1, 1, 2}));
  // normal metric on the full flag: g_ik = k - i
  const CSpace flag5 = space(Family::A, 4, {1, 2, 3, 4});
  const InvariantMetric m5 = invariant_metric(flag5, rats({1, 1, 1, 1}));
  for (std::size_t a = 0; a < flag5.delta_phi.size(); ++a)
    CHECK(m5.g[a] == Rational(flag5.delta_phi[a].k - flag5.delta_phi[a].i));

  const CSpace a5 = space(Family::A, 5, {2, 4});
  const InvariantMetric m22 = invariant_metric(a5, rats({2, 2}));
  for (std::size_t a = 0; a < a5.delta_phi.size(); ++a) {
    const Root& r = a5.delta_phi[a];
    CHECK(m22.g[a] == Rational((r.i <= 2 && r.k >= 5) ? 4 : 2));
  }
  CHECK_THROWS(invariant_metric(flag, rats({1, 0})));
  CHECK_THROWS(invariant_metric(flag, rats({1, -1})));
  CHECK_THROWS(invariant_metric(flag, rats({1})));
  CHECK(invariant_metric(flag, {Rational(1, 2), Rational(3)}).g[2] == Rational(7, 2));
}

TEST_CASE("Kaehler-Einstein coefficients") {
  const CSpace flag = space(Family::A, 2, {1, 2});
  CHECK(kahler_einstein_coefficients(flag).g == rats({2, 2, 4}));
  const CSpace p2 = space(Family::A, 2, {1});
  CHECK(kahler_einstein_coefficients(p2).g == rats({3, 3}));

  const CSpace a5 = space(Family::A, 5, {2, 4});
  const InvariantMetric ke = kahler_einstein_coefficients(a5);
  std::vector<Rational> table;
  for (const auto& r : a5.delta_phi) table.push_back(Rational((r.i <= 2 && r.k >= 5) ? 4 : 2));
  const auto factor = proportionality_factor(ke.g, table);
  REQUIRE(factor.has_value());
  CHECK(*factor == Rational(2));

  for (int r = 2; r <= 5; ++r)
    for (const std::vector<int>& phi : std::vector<std::vector<int>>{{1}, {1, r}, {2}}) {
      const CSpace s = space(Family::A, r, phi);
      const InvariantMetric k = kahler_einstein_coefficients(s);
      for (std::size_t a = 0; a < s.delta_phi.size(); ++a) CHECK(k.g[a] == ke_type_a(s, s.delta_phi[a]));
    }
}

TEST_CASE("proportionality_factor") {
  CHECK(proportionality_factor(rats({2, 4}), rats({1, 2})) == Rational(2));
  CHECK_FALSE(proportionality_factor(rats({2, 3}), rats({1, 2})).has_value());
  CHECK_FALSE(proportionality_factor(rats({1}), rats({1, 2})).has_value());
  CHECK_FALSE(proportionality_factor(rats({-1, -2}), rats({1, 2})).has_value());
}
