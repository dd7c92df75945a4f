#include "cqblab/flow.hpp"

#include <doctest.h>

#include <sstream>

using namespace cqblab;

namespace {

CurvatureTensor scalar_tensor(double k) {
  CurvatureTensor r(1);
  r.set(0, 0, 0, 0, k);
  return r;
}

CurvatureTensor flag3() {
  const CSpace s = build_cspace(build_algebra(Family::A, 2), {1, 2});
  return assemble(s, invariant_metric(s, {Rational(1), Rational(1)}));
}

// Index-sum oracle for the reaction term on the full n^4 array.
std::vector<Complex> reaction_oracle(const CurvatureTensor& r) {
  const int n = r.n();
  std::vector<Complex> out(static_cast<std::size_t>(n) * n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Complex s = 0;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
              s += r(a, b, p, q) * r(c, d, q, p) + r(a, d, p, q) * r(c, b, q, p) - r(a, p, c, q) * r(p, b, q, d);
          out[((a * n + b) * n + c) * n + d] = s;
        }
  return out;
}

double k_after(double k0, double t, double dt) {
  const FlowConstants k = FlowConstants::defaults(scalar_tensor(k0));
  IntegrateOptions opt;
  opt.track_membership = false;
  const Trajectory tr = integrate(scalar_tensor(k0), k, t, dt, opt);
  return tr.states.back().r(0, 0, 0, 0).real();
}

}  // namespace

TEST_CASE("reaction derivative: n = 1 reduces to k^2") {
  for (double k : {0.0, 1.0, -0.5, 3.0}) CHECK(reaction_derivative(scalar_tensor(k))(0, 0, 0, 0).real() == doctest::Approx(k * k));
  CHECK(reaction_derivative(CurvatureTensor(3)).norm() == 0.0);
}

TEST_CASE("reaction derivative matches the index-sum oracle and keeps the symmetries") {
  for (const CurvatureTensor& r : {flag3(), random_kahler_operator(3, 2), random_kahler_operator(4, 11)}) {
    const CurvatureTensor dr = reaction_derivative(r);
    const std::vector<Complex> oracle = reaction_oracle(r);
    const std::vector<Complex> full = dr.expand();
    double err = 0;
    for (std::size_t i = 0; i < full.size(); ++i) err = std::max(err, std::abs(full[i] - oracle[i]));
    CHECK(err <= 1e-12 * std::max(1.0, r.norm() * r.norm()));
    CHECK(symmetry_defect(r.n(), oracle) <= 1e-12 * std::max(1.0, r.norm() * r.norm()));
  }
}

TEST_CASE("trace of the reaction derivative is the Ricci reaction") {
  for (const CurvatureTensor& r : {flag3(), random_kahler_operator(3, 5), mostow_siu_model({3, 1.0, 2.0, 0.5})}) {
    const CurvatureTensor dr = reaction_derivative(r);
    const HermitianTensor2 lhs = ricci(dr);
    const HermitianTensor2 rhs = ricci_reaction(r);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, r.norm() * r.norm()));
  }
}

TEST_CASE("n = 1 closed form k(t) = k0 / (1 - k0 t)") {
  CHECK(std::abs(k_after(1.0, 0.5, 1e-3) - 2.0) < 1e-6);
  CHECK(std::abs(k_after(0.5, 0.8, 1e-3) - 0.5 / (1 - 0.4)) < 1e-8);
  CHECK(std::abs(k_after(-1.0, 0.5, 1e-3) - (-1.0 / 1.5)) < 1e-8);
}

TEST_CASE("RK4 error shrinks by about 2^4 per step halving") {
  const double exact = 2.0;
  const double e1 = std::abs(k_after(1.0, 0.5, 1e-2) - exact);
  const double e2 = std::abs(k_after(1.0, 0.5, 5e-3) - exact);
  REQUIRE(e2 > 0);
  const double ratio = e1 / e2;
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 32.0);
}

TEST_CASE("zero tensor is a fixed point") {
  const CurvatureTensor zero(3);
  FlowConstants k = FlowConstants::defaults(zero);
  const Trajectory tr = integrate(zero, k, std::min(0.01, k.epsilon), 1e-3);
  CHECK_FALSE(tr.truncated);
  for (const auto& s : tr.states) {
    CHECK(s.norm == 0.0);
    CHECK(s.membership.all());
  }
}

TEST_CASE("trajectory bookkeeping") {
  const CurvatureTensor r0 = flag3();
  FlowConstants k = FlowConstants::defaults(r0);
  k.e1 = 100.0;
  k.epsilon = 0.01;
  const Trajectory tr = integrate(r0, k, 0.01, 1e-3);
  REQUIRE_FALSE(tr.truncated);
  CHECK(tr.states.front().t == 0.0);
  CHECK(tr.states.back().t == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(tr.states.size() == 11);
  CHECK(tr.max_trace_residue < 1e-10);
  for (const auto& s : tr.states) {
    CHECK(s.min_ricci_eigenvalue >= -1e-10);
    CHECK(s.membership.c31);
  }
  // t_max beyond epsilon is rejected
  CHECK_THROWS(integrate(r0, k, 0.02, 1e-3));
  CHECK_THROWS(integrate(r0, k, 0.01, 0.0));
}

TEST_CASE("FlowConstants defaults and validation") {
  const CurvatureTensor r0 = flag3();
  const FlowConstants k = FlowConstants::defaults(r0);
  CHECK(k.d1 == 4.0);
  CHECK(k.d2 == doctest::Approx(2 * r0.norm()));
  CHECK(k.e2 == 1.0);
  CHECK(k.e1 == doctest::Approx(100 * 3 * 16 * k.d2));
  CHECK(k.epsilon == doctest::Approx(1 / k.e1));
  CHECK_NOTHROW(k.validate(3));
  FlowConstants bad = k;
  bad.d1 = 1.0;
  CHECK_THROWS(bad.validate(3));
  bad = k;
  bad.epsilon = 2 / k.e1;
  CHECK_THROWS(bad.validate(3));
  bad = k;
  bad.e2 = -1;
  CHECK_THROWS(bad.validate(3));
  bad = k;
  bad.epsilon = 0;
  CHECK_THROWS(bad.validate(3));
  const FlowConstants one = FlowConstants::defaults(scalar_tensor(1.0));
  CHECK(one.e1 == 0.0);
  CHECK(one.epsilon == 1.0);
}

TEST_CASE("membership of C(t)") {
  const CurvatureTensor f = flag3();
  const FlowConstants k = FlowConstants::defaults(f);
  const Membership m = membership(0.0, f, k);
  CHECK(m.c31);
  CHECK(m.c32);
  CHECK(m.c33);
  CHECK(m.margin33 == doctest::Approx(f.norm()));

  const Membership zero = membership(0.0, CurvatureTensor(3), k);
  CHECK(zero.all());

  const CurvatureTensor ms = mostow_siu_model({2, 2.0, 1.0, 2.0});
  const Membership neg = membership(0.0, ms, FlowConstants::defaults(ms));
  CHECK_FALSE(neg.c31);
  CHECK(neg.margin31 < 0);

  // blowing up the norm past D2 breaks c33 only
  const Membership big = membership(0.0, f * 3.0, k);
  CHECK(big.c31);
  CHECK_FALSE(big.c33);
}

TEST_CASE("random tensors in C(0)") {
  for (int n : {2, 3}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const CurvatureTensor r = random_tensor_in_c0(n, seed);
      CHECK(rank1_check(r, FormKind::Cqb).min_value >= -1e-8);
      CHECK(membership(0.0, r, FlowConstants::defaults(r)).all());
      CHECK((random_tensor_in_c0(n, seed) + r * -1.0).norm() == 0.0);
    }
  }
}

TEST_CASE("convexity along segments") {
  const CurvatureTensor r = random_tensor_in_c0(3, 1), s = random_tensor_in_c0(3, 2);
  FlowConstants k = FlowConstants::defaults(r);
  k.d2 = 2 * std::max(r.norm(), s.norm());
  const ConvexityResult same = convexity_check(r, r, {0.25, 0.5, 0.75}, 0.0, k);
  CHECK(same.precondition_ok);
  CHECK(same.holds);
  const ConvexityResult seg = convexity_check(r, s, {0.25, 0.5, 0.75}, 0.0, k);
  CHECK(seg.precondition_ok);
  CHECK(seg.holds);
  const ConvexityResult outside = convexity_check(r, mostow_siu_model({3, 2.0, 1.0, 2.0}), {0.5}, 0.0, k);
  CHECK_FALSE(outside.precondition_ok);
  CHECK(outside.message.find("precondition violated") != std::string::npos);
}

TEST_CASE("CSV output") {
  const FlowConstants k = FlowConstants::defaults(scalar_tensor(1.0));
  const Trajectory tr = integrate(scalar_tensor(1.0), k, 0.01, 5e-3);
  std::ostringstream os;
  write_csv(os, tr);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,norm_R,min_ricci_eig,c31,c32,c33,margin32,margin33");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == static_cast<int>(tr.states.size()));
}
