#include "cqblab/lie.hpp"

#include <doctest.h>

#include <tuple>

using namespace cqblab;

namespace {

// Independent bracket check: recompute [E_a, E_b] with plain matrix algebra.
RationalMatrix commutator(const RationalMatrix& x, const RationalMatrix& y) { return x * y - y * x; }

std::vector<std::tuple<Family, int>> all_algebras() {
  return {{Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::A, 5}, {Family::B, 2}, {Family::B, 3},
          {Family::B, 4}, {Family::C, 3}, {Family::C, 4}, {Family::D, 4}, {Family::D, 5}};
}

std::size_t expected_positive(Family f, int r) {
  switch (f) {
    case Family::A: return static_cast<std::size_t>(r * (r + 1) / 2);
    case Family::B:
    case Family::C: return static_cast<std::size_t>(r * r);
    case Family::D: return static_cast<std::size_t>(r * (r - 1));
  }
  return 0;
}

}  // namespace

TEST_CASE("build_algebra sizes and admissibility") {
  const auto a2 = build_algebra(Family::A, 2);
  CHECK(a2->num_positive() == 3);
  CHECK(a2->matrix_dim() == 3);
  const auto a5 = build_algebra(Family::A, 5);
  CHECK(a5->num_positive() == 15);
  CHECK(a5->matrix_dim() == 6);
  CHECK_THROWS(build_algebra(Family::C, 2));
  CHECK_THROWS(build_algebra(Family::A, 0));
  CHECK_THROWS(build_algebra(Family::B, 1));
  CHECK_THROWS(build_algebra(Family::D, 3));
  CHECK(build_algebra(Family::B, 3)->matrix_dim() == 7);
  CHECK(build_algebra(Family::C, 3)->matrix_dim() == 6);
  CHECK(build_algebra(Family::D, 4)->matrix_dim() == 8);
  for (auto [f, r] : all_algebras()) CHECK(build_algebra(f, r)->num_positive() == expected_positive(f, r));
}

TEST_CASE("parse_family") {
  CHECK(parse_family("A") == Family::A);
  CHECK(parse_family("d") == Family::D);
  CHECK_THROWS(parse_family("E"));
  CHECK_THROWS(parse_family(""));
}

TEST_CASE("positive roots follow the lexicographic order") {
  const auto a2 = positive_roots(*build_algebra(Family::A, 2));
  REQUIRE(a2.size() == 3);
  CHECK(a2[0].coeffs == std::vector<int>{0, 1});
  CHECK(a2[1].coeffs == std::vector<int>{1, 0});
  CHECK(a2[2].coeffs == std::vector<int>{1, 1});
  CHECK(a2[0].label() == "a2,3");
  CHECK(a2[1].label() == "a1,2");
  CHECK(a2[2].label() == "a1,3");

  const auto a1 = positive_roots(*build_algebra(Family::A, 1));
  REQUIRE(a1.size() == 1);
  CHECK(a1[0].coeffs == std::vector<int>{1});

  const auto a3 = positive_roots(*build_algebra(Family::A, 3));
  REQUIRE(a3.size() == 6);
  CHECK(a3.back().i == 1);
  CHECK(a3.back().k == 4);
  for (std::size_t j = 1; j < a3.size(); ++j) CHECK(root_less(a3[j - 1], a3[j]));
}

TEST_CASE("root vectors are eigenvectors of the Cartan with the right weight") {
  for (auto [f, r] : all_algebras()) {
    const auto alg = build_algebra(f, r);
    for (std::size_t id = 0; id < alg->roots().size(); ++id) {
      const RationalMatrix& e = alg->root_vector(id);
      CHECK(alg->contains(e));
      CHECK(alg->root_vector(alg->negative_index(id)) == e.transpose());
      for (const auto& h : alg->cartan_basis()) CHECK(commutator(h, e) == e * alg->evaluate(id, h));
    }
  }
}

TEST_CASE("Chevalley data: reference values for A2 and A3") {
  const auto a2 = build_algebra(Family::A, 2);
  const ChevalleyData cd = chevalley(*a2);
  const std::size_t a1 = *a2->index_of({1, 0}), a23 = *a2->index_of({0, 1});
  CHECK(cd.h_gram(a1, a1) == Rational(2));
  CHECK(cd.n(a23, a1) == -1);
  const auto a3 = build_algebra(Family::A, 3);
  const ChevalleyData cd3 = chevalley(*a3);
  CHECK(cd3.z(*a3->index_of({1, 1, 0})) == Rational(1));
}

TEST_CASE("Chevalley data: brackets, antisymmetry and duality on all families") {
  for (auto [f, r] : all_algebras()) {
    CAPTURE(family_letter(f));
    CAPTURE(r);
    const auto alg = build_algebra(f, r);
    const ChevalleyData cd = chevalley(*alg);
    const auto& roots = alg->roots();
    for (std::size_t a = 0; a < roots.size(); ++a) {
      CHECK(cd.z(a) > Rational(0));
      CHECK(cd.h_gram(a, a) > Rational(0));
      // B(H_a, H) = a(H)
      for (const auto& h : alg->cartan_basis()) CHECK(trace_form(cd.coroot(a), h) == alg->evaluate(a, h));
      // [E_a, E_{-a}] = z_a H_a
      const std::size_t na = alg->negative_index(a);
      CHECK(commutator(alg->root_vector(a), alg->root_vector(na)) == cd.coroot(a) * cd.z(a));
      for (std::size_t b = 0; b < roots.size(); ++b) {
        if (b == na) continue;
        CHECK(cd.n(a, b) == -cd.n(b, a));
        CHECK(cd.n(alg->negative_index(a), alg->negative_index(b)) == -cd.n(a, b));
        std::vector<int> sum(roots[a].coeffs);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += roots[b].coeffs[i];
        const RationalMatrix br = commutator(alg->root_vector(a), alg->root_vector(b));
        if (const auto s = alg->index_of(sum))
          CHECK(br == alg->root_vector(*s) * Rational(cd.n(a, b)));
        else
          CHECK(br.is_zero());
      }
    }
  }
}

TEST_CASE("type A has z = 1 everywhere; B/C/D produce z in {1, 2}") {
  for (auto [f, r] : all_algebras()) {
    const auto alg = build_algebra(f, r);
    const ChevalleyData cd = chevalley(*alg);
    for (std::size_t a = 0; a < cd.size(); ++a) {
      if (f == Family::A)
        CHECK(cd.z(a) == Rational(1));
      else
        CHECK((cd.z(a) == Rational(1) || cd.z(a) == Rational(2)));
    }
  }
}

TEST_CASE("rational helpers") {
  CHECK(to_string(Rational(3, 6)) == "1/2");
  CHECK(to_string(Rational(-4, 2)) == "-2");
  CHECK(to_double(Rational(1, 4)) == doctest::Approx(0.25));
  const RationalMatrix x = RationalMatrix::unit(3, 0, 1), y = RationalMatrix::unit(3, 1, 0);
  CHECK(trace_form(x, y) == Rational(1));
  CHECK(bracket(x, y) == commutator(x, y));
  CHECK(bracket(x, y).is_diagonal());
  CHECK(Rational(2) == 2);
  CHECK(Rational(1, 2) != 0);
}
