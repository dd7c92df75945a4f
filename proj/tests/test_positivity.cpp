#include "cqblab/oracles.hpp"
#include "cqblab/positivity.hpp"

#include <doctest.h>

#include <random>

using namespace cqblab;

namespace {

CurvatureTensor assembled(Family f, int r, std::vector<int> phi, std::optional<std::vector<Rational>> c = std::nullopt) {
  const CSpace s = build_cspace(build_algebra(f, r), std::move(phi));
  return assemble(s, c ? invariant_metric(s, *c) : kahler_einstein_coefficients(s));
}

CurvatureTensor flag3() { return assembled(Family::A, 2, {1, 2}, std::vector<Rational>{Rational(1), Rational(1)}); }

LinearMap random_map(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  LinearMap a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  return a;
}

ComplexVector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(nd(rng), nd(rng));
  return v;
}

// Direct index-sum oracle for the two forms, written independently of the library.
double cqb_direct(const CurvatureTensor& r, const LinearMap& a, double sign) {
  const int n = r.n();
  HermitianTensor2 ric = HermitianTensor2::Zero(n, n);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d)
      for (int e = 0; e < n; ++e) ric(c, d) += r(c, d, e, e);
  Complex s = 0;
  for (int p = 0; p < n; ++p)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) {
        if (sign < 0)
          s += ric(c, d) * a(p, c) * std::conj(a(p, d));
        else
          s += ric(c, d) * std::conj(a(p, c)) * a(p, d);
      }
  for (int p = 0; p < n; ++p)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (sign < 0)
            s -= r(p, b, c, d) * a(p, c) * std::conj(a(b, d));
          else
            s += r(p, b, c, d) * std::conj(a(p, c)) * a(b, d);
        }
  return s.real();
}

}  // namespace

TEST_CASE("form values: reference examples") {
  const CurvatureTensor f = flag3();
  CHECK(cqb_value(f, LinearMap::Zero(3, 3)) == 0.0);
  CHECK(dcqb_value(f, LinearMap::Zero(3, 3)) == 0.0);
  CHECK(cqb_value(f, LinearMap::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(dcqb_value(f, LinearMap::Identity(3, 3)) == doctest::Approx(11.0));
  // Unit map at the simple root a1 = a1,2 (frame index 1).
  LinearMap e = LinearMap::Zero(3, 3);
  e(1, 1) = 1.0;
  CHECK(std::abs(cqb_value(f, e)) < 1e-14);
  CHECK_THROWS(cqb_value(f, LinearMap::Zero(2, 2)));

  const CurvatureTensor ms = mostow_siu_model({2, 2.0, 1.0, 2.0});
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) CHECK(dcqb_value(ms, random_map(2, rng)) < 0.0);
}

TEST_CASE("form values agree with an independent index sum") {
  std::mt19937_64 rng(4);
  for (const CurvatureTensor& r : {flag3(), random_kahler_operator(3, 8), mostow_siu_model({3, 1.0, 2.0, 0.5})}) {
    for (int t = 0; t < 10; ++t) {
      const LinearMap a = random_map(r.n(), rng);
      CHECK(cqb_value(r, a) == doctest::Approx(cqb_direct(r, a, -1.0)).epsilon(1e-12));
      CHECK(dcqb_value(r, a) == doctest::Approx(cqb_direct(r, a, 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("form matrices: Hermitian and consistent with the values") {
  std::mt19937_64 rng(6);
  for (const CurvatureTensor& r : {flag3(), random_kahler_operator(4, 1), assembled(Family::C, 3, {2})}) {
    for (FormKind kind : {FormKind::Cqb, FormKind::Dcqb}) {
      const QuadraticFormMatrix m = form_matrix(r, kind);
      CHECK(m.dim == r.n() * r.n());
      CHECK((m.entries - m.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * m.scale());
      for (int t = 0; t < 100; ++t) {
        const LinearMap a = random_map(r.n(), rng);
        const Eigen::VectorXcd w = kind == FormKind::Cqb ? Eigen::VectorXcd(flatten(a).conjugate()) : flatten(a);
        const double via_matrix = (w.adjoint() * m.entries * w)(0, 0).real();
        const double direct = form_value(r, a, kind);
        CHECK(std::abs(via_matrix - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
      }
    }
    const QuadraticFormMatrix q = q_operator(r);
    CHECK(q.dim == r.n() * (r.n() + 1) / 2);
    CHECK((q.entries - q.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * q.scale());
  }
  const LinearMap a = random_map(3, rng);
  CHECK((unflatten(flatten(a), 3) - a).norm() == 0.0);
}

TEST_CASE("form eigenvalues: reference examples") {
  const CurvatureTensor f = flag3();
  CHECK(std::abs(cqb_form(f).min_eigenvalue()) < 1e-8);
  CHECK(dcqb_form(f).min_eigenvalue() > 0.0);
  CHECK(q_operator(f).max_eigenvalue() == doctest::Approx(2.0).epsilon(1e-8));

  const CurvatureTensor a5 = assembled(Family::A, 5, {2, 4});
  CHECK(cqb_form(a5).min_eigenvalue() > 1e-6);
  CHECK(dcqb_form(a5).min_eigenvalue() > 1e-6);

  const CurvatureTensor ms = mostow_siu_model({2, 2.0, 1.0, 2.0});
  CHECK(cqb_form(ms).max_eigenvalue() < 0.0);
  CHECK(dcqb_form(ms).max_eigenvalue() < 0.0);

  CurvatureTensor k(1);
  k.set(0, 0, 0, 0, 1.5);
  const QuadraticFormMatrix q = q_operator(k);
  REQUIRE(q.dim == 1);
  CHECK(q.entries(0, 0).real() == doctest::Approx(1.5));
}

TEST_CASE("Q operator pairs as R(X, Z-bar, Y, W-bar) on symmetric products") {
  const CurvatureTensor r = random_kahler_operator(3, 21);
  const QuadraticFormMatrix q = q_operator(r);
  // <Q(e_a e_c), conj(e_b e_d)> = R(a, b, c, d) in the orthonormal basis with the sqrt(2) factors removed.
  for (int i = 0; i < q.dim; ++i)
    for (int j = 0; j < q.dim; ++j) {
      const auto [a, c] = q.basis_labels[j];
      const auto [b, d] = q.basis_labels[i];
      const double ki = b == d ? 1.0 : std::sqrt(2.0), kj = a == c ? 1.0 : std::sqrt(2.0);
      CHECK(std::abs(q.entries(i, j) - ki * kj * r(a, b, c, d)) < 1e-14);
    }
}

TEST_CASE("KE criteria") {
  const KeCriteria flag = ke_criteria(2.0, 0.0, 2.0);
  CHECK(flag.cqb_borderline);
  CHECK_FALSE(flag.cqb_positive);
  const KeCriteria both = ke_criteria(2.0, -1.0, 1.5);
  CHECK(both.cqb_positive);
  CHECK(both.dcqb_positive);
  CHECK_FALSE(ke_criteria(1.0, 0.0, 3.0).cqb_positive);
  CHECK_THROWS(ke_criteria(std::nan(""), 0.0, 1.0));
}

TEST_CASE("KE identities on assembled Einstein tensors") {
  const std::vector<CurvatureTensor> tensors{
      flag3(), assembled(Family::A, 3, {1, 2, 3}), assembled(Family::A, 5, {2, 4}), assembled(Family::A, 2, {1}),
      assembled(Family::A, 3, {1}), assembled(Family::B, 3, {1}), assembled(Family::C, 3, {1, 2, 3}),
      assembled(Family::D, 4, {1, 3})};
  for (const auto& r : tensors) {
    const auto mu = einstein_constant(r);
    REQUIRE(mu.has_value());
    const Eigen::VectorXd q = q_operator(r).eigenvalues();
    CHECK(std::abs(cqb_form(r).min_eigenvalue() - std::min(*mu, *mu - q(q.size() - 1))) < 1e-8);
    CHECK(std::abs(dcqb_form(r).min_eigenvalue() - (*mu + std::min(q(0), 0.0))) < 1e-8);
    const PositivityReport rep = form_check(r, FormKind::Cqb);
    REQUIRE(rep.mu.has_value());
    CHECK(*rep.mu == doctest::Approx(*mu));
  }
  CHECK_FALSE(einstein_constant(mostow_siu_model({2, 2.0, 1.0, 2.0})).has_value());
}

TEST_CASE("classify") {
  CHECK(classify(1.0, 2.0, 1e-8) == Verdict::Positive);
  CHECK(classify(0.0, 2.0, 1e-8) == Verdict::NonnegativeWithKernel);
  CHECK(classify(-1e-9, 2.0, 1e-8) == Verdict::NonnegativeWithKernel);
  CHECK(classify(-1.0, 2.0, 1e-8) == Verdict::Indefinite);
  CHECK(classify(-2.0, -1.0, 1e-8) == Verdict::Negative);
  CHECK(classify(-2.0, 0.0, 1e-8) == Verdict::NonpositiveWithKernel);
  CHECK(to_string(Verdict::NonnegativeWithKernel) == "nonnegative_with_kernel");
}

TEST_CASE("form_check verdicts, witnesses and scale invariance") {
  const CSpace s = build_cspace(build_algebra(Family::A, 2), {1, 2});
  const PositivityReport flag = form_check(assemble(s, invariant_metric(s, {Rational(1), Rational(1)})), FormKind::Cqb);
  CHECK(flag.verdict == Verdict::NonnegativeWithKernel);
  CHECK(flag.method == Method::Eigen);
  const CurvatureTensor f = flag3();
  CHECK(std::abs(cqb_value(f, flag.witness) - flag.min_value) < 1e-10);
  const PositivityReport d = form_check(f, FormKind::Dcqb);
  CHECK(d.verdict == Verdict::Positive);
  CHECK(std::abs(dcqb_value(f, d.witness) - d.min_value) < 1e-10);

  const std::vector<Rational> base{Rational(1), Rational(2)};
  const CurvatureTensor r1 = assemble(s, invariant_metric(s, base));
  for (const Rational lambda : {Rational(1, 2), Rational(2), Rational(5)}) {
    const CurvatureTensor rl = assemble(s, invariant_metric(s, {base[0] * lambda, base[1] * lambda}));
    for (FormKind kind : {FormKind::Cqb, FormKind::Dcqb}) {
      const PositivityReport a = form_check(r1, kind), b = form_check(rl, kind);
      CHECK(a.verdict == b.verdict);
      const Eigen::VectorXd ea = form_matrix(r1, kind).eigenvalues(), eb = form_matrix(rl, kind).eigenvalues();
      for (int i = 0; i < ea.size(); ++i)
        CHECK(std::abs(eb(i) * to_double(lambda) - ea(i)) <= 1e-10 * std::max(1.0, std::abs(ea(i))));
    }
  }
  const nlohmann::json j = to_json(d);
  for (const char* key : {"what", "mode", "rank_limit", "verdict", "min_value", "max_value", "mu", "lambda1", "lambdaN",
                          "witness", "tolerance", "method"})
    CHECK(j.contains(key));
}

TEST_CASE("rank-one minimization: reference examples") {
  CurvatureTensor p1(1);
  p1.set(0, 0, 0, 0, 0.7);
  CHECK(std::abs(rank1_check(p1, FormKind::Cqb).min_value) < 1e-12);

  const CurvatureTensor f = flag3();
  const PositivityReport rep = rank1_check(f, FormKind::Cqb);
  CHECK(std::abs(rep.min_value) < 1e-7);
  CHECK(rep.method == Method::Alternating);
  REQUIRE(rep.witness_x.has_value());
  REQUIRE(rep.witness_y.has_value());
  // witness re-evaluates to the reported minimum
  CHECK(std::abs(cqb_value(f, rep.witness) - rep.min_value) < 1e-10);

  CHECK(rank1_check(assembled(Family::A, 5, {2, 4}), FormKind::Cqb).min_value > 0.0);
}

TEST_CASE("rank-one minimization agrees with the brute-force grid oracle") {
  for (int n : {2, 3}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const CurvatureTensor r = random_kahler_operator(n, 40 + seed);
      for (FormKind kind : {FormKind::Cqb, FormKind::Dcqb}) {
        const double ours = rank1_check(r, kind).min_value;
        const double oracle = oracles::rank1_grid_oracle(r, kind, 100, seed).min_value;
        CHECK(ours <= oracle + 1e-6);
        CHECK(std::abs(ours - oracle) <= 1e-6);
      }
    }
  }
}

TEST_CASE("rank-one value identity F(x, y) = |x|^2 Ric(y) - R(x, x, y, y)") {
  const CurvatureTensor r = random_kahler_operator(3, 77);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const ComplexVector x = random_vector(3, rng), y = random_vector(3, rng);
    const Complex ric_y = y.transpose() * ricci(r) * y.conjugate();
    const double expected = x.squaredNorm() * ric_y.real() - bisectional(r, x, y).real();
    CHECK(cqb_value(r, outer(x, y)) == doctest::Approx(expected).epsilon(1e-12));
    const double dual = x.squaredNorm() * ric_y.real() + bisectional(r, x, y).real();
    CHECK(dcqb_value(r, outer(x, y).conjugate()) == doctest::Approx(dual).epsilon(1e-12));
  }
}

TEST_CASE("rank-k minimization is monotone and delegates at the ends") {
  for (const CurvatureTensor& r : {flag3(), random_kahler_operator(3, 5), random_kahler_operator(4, 9)}) {
    for (FormKind kind : {FormKind::Cqb, FormKind::Dcqb}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int k = 1; k <= r.n(); ++k) {
        const PositivityReport rep = rank_k_check(r, k, kind);
        CHECK(rep.min_value <= prev + 1e-12);
        prev = rep.min_value;
        CHECK(std::abs(form_value(r, rep.witness, kind) / rep.witness.squaredNorm() - rep.min_value) < 1e-8);
      }
      CHECK(std::abs(prev - form_matrix(r, kind).min_eigenvalue()) < 1e-10);
      CHECK(std::abs(rank_k_check(r, 1, kind).min_value - rank1_check(r, kind).min_value) < 1e-7);
    }
  }
  CHECK_THROWS(rank_k_check(flag3(), 0, FormKind::Cqb));
  CHECK_THROWS(rank_k_check(flag3(), 4, FormKind::Cqb));
}

TEST_CASE("CQB_1 >= 0 forces nonnegative orthogonal Ricci curvature") {
  const std::vector<CurvatureTensor> tensors{flag3(), assembled(Family::A, 3, {1, 2, 3}), assembled(Family::A, 3, {1}),
                                             assembled(Family::A, 4, {2}), assembled(Family::C, 3, {3})};
  std::mt19937_64 rng(3);
  for (const auto& r : tensors) {
    const double tau = 1e-8;
    if (rank1_check(r, FormKind::Cqb).min_value < -tau) continue;
    for (int t = 0; t < 50; ++t) CHECK(ric_perp(r, random_vector(r.n(), rng)) >= -tau);
  }
}

TEST_CASE("Mostow-Siu P and Q reproduce both forms") {
  for (const MostowSiuParams prm : {MostowSiuParams{2, 2.0, 1.0, 2.0}, MostowSiuParams{3, 1.0, 0.5, 0.7}}) {
    const CurvatureTensor r = mostow_siu_model(prm);
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
      const LinearMap a = random_map(prm.n, rng);
      const auto pq = oracles::mostow_siu_pq(prm, a);
      const double scale = std::max(1.0, pq.p);
      CHECK(std::abs(cqb_value(r, a) + pq.p - pq.q) <= 1e-10 * scale);
      CHECK(std::abs(dcqb_value(r, a) + pq.p + pq.q) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("product decomposition identity") {
  const CurvatureTensor f = flag3();
  CHECK(std::abs(cqb_form(product(f, f)).min_eigenvalue()) < 1e-8);
  std::mt19937_64 rng(17);
  const CurvatureTensor r2 = random_kahler_operator(2, 3);
  for (int t = 0; t < 100; ++t) {
    const LinearMap a = random_map(6, rng);
    CHECK(product_decomposition_check(f, f, a) <= 1e-10 * (1.0 + a.squaredNorm()));
    const LinearMap b = random_map(5, rng);
    CHECK(product_decomposition_check(f, r2, b) <= 1e-10 * (1.0 + b.squaredNorm()));
  }
  LinearMap block = LinearMap::Zero(6, 6);
  block.topLeftCorner(3, 3) = random_map(3, rng);
  block.bottomRightCorner(3, 3) = random_map(3, rng);
  CHECK(product_decomposition_check(f, f, block) <= 1e-12 * (1.0 + block.squaredNorm()));
  CHECK(product_decomposition_check(f, f, LinearMap::Zero(6, 6)) == 0.0);
}

TEST_CASE("Halton multistarts are deterministic unit vectors") {
  const auto a = halton_unit_vectors(3, 16, 2), b = halton_unit_vectors(3, 16, 2);
  REQUIRE(a.size() == 16);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].norm() == doctest::Approx(1.0));
    CHECK((a[i] - b[i]).norm() == 0.0);
  }
  CHECK((halton_unit_vectors(3, 1, 3)[0] - a[0]).norm() > 0.0);
}
