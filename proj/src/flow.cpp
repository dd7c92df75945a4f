#include "cqblab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cqblab {

namespace {

using Full = std::vector<Complex>;

struct FullView {
  int n;
  const Full& v;
  Complex operator()(int a, int b, int c, int d) const {
    return v[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  }
};

std::size_t at(int n, int a, int b, int c, int d) {
  return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
}

Full reaction_full(int n, const Full& r) {
  const FullView t{n, r};
  Full out(r.size(), Complex(0.0));
  // M[(a,b),(p,q)] = R_{ab pq}; first term is (M M^T-ish) contraction over (p,q)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Complex s = 0;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
              s += t(a, b, p, q) * t(c, d, q, p) + t(a, d, p, q) * t(c, b, q, p) - t(a, p, c, q) * t(p, b, q, d);
          out[at(n, a, b, c, d)] = s;
        }
  return out;
}

Eigen::MatrixXcd ricci_full(int n, const Full& r) {
  const FullView t{n, r};
  Eigen::MatrixXcd ric = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) ric(a, b) += t(a, b, c, c);
  return ric;
}

Eigen::MatrixXcd ricci_reaction_full(int n, const Full& r) {
  const FullView t{n, r};
  const Eigen::MatrixXcd ric = ricci_full(n, r);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) out(a, b) += t(a, b, p, q) * ric(q, p);
  return out;
}

// Residue between the (c,d)-trace of the tensor reaction and the Ricci reaction.
double trace_residue(int n, const Full& r, const Full& dr) {
  const Eigen::MatrixXcd direct = ricci_reaction_full(n, r);
  const Eigen::MatrixXcd traced = ricci_full(n, dr);
  double scale = 0;
  for (const auto& v : r) scale = std::max(scale, std::abs(v));
  return (traced - direct).cwiseAbs().maxCoeff() / std::max(1.0, scale * scale * n * n);
}

double frob(const Full& r) {
  double s = 0;
  for (const auto& v : r) s += std::norm(v);
  return std::sqrt(s);
}

bool finite(const Full& r) {
  return std::all_of(r.begin(), r.end(), [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

Full axpy(const Full& x, double h, const Full& k) {
  Full out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + h * k[i];
  return out;
}

double max_eigenvalue(const Eigen::MatrixXcd& m, ComplexVector* vec = nullptr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  if (vec) *vec = es.eigenvectors().col(m.rows() - 1);
  return es.eigenvalues()(m.rows() - 1);
}

struct C32Problem {
  int n;
  const Full& r;
  Eigen::MatrixXcd ric;
  double d;

  Complex ric_form(const ComplexVector& x, const ComplexVector& y) const {
    return (x.transpose() * ric * y.conjugate())(0, 0);
  }
  // A_ab = Ric_ab - R_{ab Z Z-bar}
  Eigen::MatrixXcd a_matrix(const ComplexVector& z) const {
    const FullView t{n, r};
    Eigen::MatrixXcd a = ric;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex s = 0;
        for (int c = 0; c < n; ++c)
          for (int e = 0; e < n; ++e) s += t(i, j, c, e) * z(c) * std::conj(z(e));
        a(i, j) -= s;
      }
    return a;
  }
  double value(const ComplexVector& x, const ComplexVector& y, const ComplexVector& z) const {
    const Complex v = (x.transpose() * a_matrix(z) * y.conjugate())(0, 0);
    return std::norm(v) - d * ric_form(x, x).real() * ric_form(y, y).real();
  }
  ComplexVector best_x(const ComplexVector& y, const ComplexVector& z) const {
    const ComplexVector w = a_matrix(z) * y.conjugate();
    const Eigen::MatrixXcd m = w.conjugate() * w.transpose() - d * ric_form(y, y).real() * Eigen::MatrixXcd(ric.transpose());
    ComplexVector v;
    max_eigenvalue(m, &v);
    return v;
  }
  ComplexVector best_y(const ComplexVector& x, const ComplexVector& z) const {
    const ComplexVector u = a_matrix(z).transpose() * x;
    const Eigen::MatrixXcd m = u * u.adjoint() - d * ric_form(x, x).real() * Eigen::MatrixXcd(ric.transpose());
    ComplexVector v;
    max_eigenvalue(m, &v);
    return v;
  }
  // Maximize |c - Z^H K Z| over unit Z via max_theta lambda_max(Herm(e^{-i theta} K)) - Re(e^{-i theta} c).
  ComplexVector best_z(const ComplexVector& x, const ComplexVector& y) const {
    const FullView t{n, r};
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (int c = 0; c < n; ++c)
      for (int e = 0; e < n; ++e) {
        Complex s = 0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) s += t(i, j, c, e) * x(i) * std::conj(y(j));
        p(c, e) = s;
      }
    const Eigen::MatrixXcd k = p.transpose();
    const Complex cval = ric_form(x, y);
    auto support = [&](double theta, ComplexVector* vec) {
      const Complex rot = std::polar(1.0, -theta);
      const Eigen::MatrixXcd m = rot * k;
      return max_eigenvalue(m, vec) - (rot * cval).real();
    };
    // the target is -R term: |c - w|, w = Z^H K Z; distance = max_theta Re(e^{-i theta}(c - w)) is
    // the same as max_theta Re(e^{-i theta'}(w - c)) with theta' = theta + pi.
    const int grid = 72;
    double best = -std::numeric_limits<double>::infinity();
    double best_theta = 0;
    for (int g = 0; g < grid; ++g) {
      const double th = 2.0 * M_PI * g / grid;
      const double v = support(th, nullptr);
      if (v > best) {
        best = v;
        best_theta = th;
      }
    }
    double lo = best_theta - 2.0 * M_PI / grid, hi = best_theta + 2.0 * M_PI / grid;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 60; ++it) {
      const double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      if (support(m1, nullptr) > support(m2, nullptr))
        hi = m2;
      else
        lo = m1;
    }
    ComplexVector z;
    support(0.5 * (lo + hi), &z);
    return z;
  }
};

double c32_sup(int n, const Full& r, double d, const MembershipOptions& opt) {
  C32Problem prob{n, r, ricci_full(n, r), d};
  const auto xs = halton_unit_vectors(n, opt.starts, opt.seed);
  const auto ys = halton_unit_vectors(n, opt.starts, opt.seed + 1);
  const auto zs = halton_unit_vectors(n, opt.starts, opt.seed + 2);
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < opt.starts; ++s) {
    ComplexVector x = xs[s], y = ys[s], z = zs[s];
    double prev = prob.value(x, y, z);
    for (int it = 0; it < opt.max_iterations; ++it) {
      z = prob.best_z(x, y);
      x = prob.best_x(y, z);
      y = prob.best_y(x, z);
      const double v = prob.value(x, y, z);
      const bool done = std::abs(v - prev) <= 1e-12 * std::max(1.0, std::abs(v));
      prev = std::max(prev, v);
      if (done) break;
    }
    best = std::max(best, prev);
  }
  return best;
}

Membership membership_full(int n, double t, const Full& r, const FlowConstants& k, const MembershipOptions& opt) {
  Membership m;
  const Eigen::MatrixXcd ric = ricci_full(n, r);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (ric + ric.adjoint()), Eigen::EigenvaluesOnly);
  m.margin31 = es.eigenvalues()(0);
  m.c31 = m.margin31 >= -opt.tolerance;
  const double norm = frob(r);
  const double sup = c32_sup(n, r, k.d1 + t * k.e1, opt);
  m.margin32 = -sup;
  m.c32 = sup <= opt.tolerance * std::max(1.0, norm * norm);
  m.margin33 = k.d2 + t * k.e2 - norm;
  m.c33 = m.margin33 >= -opt.tolerance;
  m.method32 = Method::Alternating;
  return m;
}

}  // namespace

void FlowConstants::validate(int n) const {
  for (double v : {d1, e1, d2, e2, epsilon})
    if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument("FlowConstants: constants must be finite and nonnegative");
  if (epsilon <= 0) throw std::invalid_argument("FlowConstants: epsilon must be positive");
  if (d1 < static_cast<double>(n - 1) * (n - 1)) throw std::invalid_argument("FlowConstants: D1 must be at least (n-1)^2");
  if (epsilon * e1 > 1.0 + 1e-12) throw std::invalid_argument("FlowConstants: epsilon must not exceed 1/E1");
}

FlowConstants FlowConstants::defaults(const CurvatureTensor& r0) {
  const int n = r0.n();
  FlowConstants k;
  k.d1 = static_cast<double>(n - 1) * (n - 1);
  k.d2 = 2.0 * r0.norm();
  k.e2 = 1.0;
  k.e1 = 100.0 * n * k.d1 * k.d1 * k.d2;
  k.epsilon = k.e1 > 0 ? 1.0 / k.e1 : 1.0;
  return k;
}

CurvatureTensor reaction_derivative(const CurvatureTensor& r) {
  const int n = r.n();
  return CurvatureTensor::from_expanded(n, reaction_full(n, r.expand()));
}

HermitianTensor2 ricci_reaction(const CurvatureTensor& r) { return ricci_reaction_full(r.n(), r.expand()); }

Membership membership(double t, const CurvatureTensor& r, const FlowConstants& k, const MembershipOptions& opt) {
  return membership_full(r.n(), t, r.expand(), k, opt);
}

double default_step(const CurvatureTensor& r0) { return 1e-3 / (1.0 + r0.norm()); }

Trajectory integrate(const CurvatureTensor& r0, const FlowConstants& k, double t_max, double dt, const IntegrateOptions& opt) {
  const int n = r0.n();
  if (!(dt > 0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(t_max >= 0)) throw std::invalid_argument("integrate: t_max must be nonnegative");
  k.validate(n);
  if (t_max > k.epsilon * (1.0 + 1e-12)) throw std::invalid_argument("integrate: t_max exceeds epsilon");

  Trajectory tr;
  auto record = [&](double t, const Full& r) {
    FlowState st;
    st.t = t;
    st.r = CurvatureTensor::from_expanded(n, r);
    st.r.frame_labels = r0.frame_labels;
    st.norm = frob(r);
    const Eigen::MatrixXcd ric = ricci_full(n, r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (ric + ric.adjoint()), Eigen::EigenvaluesOnly);
    st.min_ricci_eigenvalue = es.eigenvalues()(0);
    if (opt.track_membership) st.membership = membership_full(n, t, r, k, opt.membership);
    tr.states.push_back(std::move(st));
  };

  Full r = r0.expand();
  const double norm0 = frob(r);
  double t = 0;
  record(t, r);
  auto rhs = [&](const Full& x) {
    Full dx = reaction_full(n, x);
    if (opt.check_trace_identity) tr.max_trace_residue = std::max(tr.max_trace_residue, trace_residue(n, x, dx));
    return dx;
  };
  const auto steps = static_cast<long>(std::ceil(t_max / dt - 1e-9));
  for (long s = 0; s < steps; ++s) {
    const double h = std::min(dt, t_max - t);
    const Full k1 = rhs(r);
    const Full k2 = rhs(axpy(r, 0.5 * h, k1));
    const Full k3 = rhs(axpy(r, 0.5 * h, k2));
    const Full k4 = rhs(axpy(r, h, k3));
    Full next(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) next[i] = r[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!finite(next)) {
      tr.truncated = true;
      tr.notice = "non-finite curvature at t = " + std::to_string(t + h) + "; trajectory ends at the last finite state";
      break;
    }
    t = s + 1 == steps ? t_max : t + h;
    r = std::move(next);
    record(t, r);
    if (norm0 > 0 && frob(r) > 1e3 * norm0) {
      tr.truncated = true;
      tr.notice = "blow-up guard: ||R|| exceeded 1000 ||R0|| at t = " + std::to_string(t);
      break;
    }
  }
  return tr;
}

ConvexityResult convexity_check(const CurvatureTensor& r, const CurvatureTensor& s, const std::vector<double>& eta_grid,
                                double t, const FlowConstants& k, const MembershipOptions& opt) {
  if (r.n() != s.n()) throw std::invalid_argument("convexity_check: dimension mismatch");
  ConvexityResult out;
  const Membership mr = membership(t, r, k, opt);
  const Membership ms = membership(t, s, k, opt);
  if (!mr.all() || !ms.all()) {
    out.message = std::string("precondition violated: ") + (!mr.all() ? "R" : "S") + " is not in C(t)";
    return out;
  }
  out.precondition_ok = true;
  out.holds = true;
  for (double eta : eta_grid) {
    const CurvatureTensor mix = r * eta + s * (1.0 - eta);
    if (!membership(t, mix, k, opt).all()) {
      out.holds = false;
      std::ostringstream os;
      os << "combination with eta = " << eta << " leaves C(t)";
      out.message = os.str();
      break;
    }
  }
  return out;
}

CurvatureTensor random_tensor_in_c0(int n, std::uint64_t seed) {
  const CurvatureTensor noise = random_kahler_operator(n, seed, 0.1);
  const CurvatureTensor base = constant_holomorphic_curvature(n);
  MinimizerOptions opt;
  opt.starts = 16;
  for (double shift = 1.0; shift < 1e6; shift *= 2.0) {
    CurvatureTensor r = noise + base * shift;
    const PositivityReport rep = rank1_check(r, FormKind::Cqb, opt);
    if (rep.min_value >= 0 && (n == 1 || rep.min_value > 1e-6)) return r;
    if (n == 1) return base;
  }
  return base;
}

void write_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,norm_R,min_ricci_eig,c31,c32,c33,margin32,margin33\n";
  os << std::setprecision(17);
  for (const auto& st : tr.states) {
    const auto& m = st.membership;
    os << st.t << ',' << st.norm << ',' << st.min_ricci_eigenvalue << ',' << (m.c31 ? 1 : 0) << ',' << (m.c32 ? 1 : 0)
       << ',' << (m.c33 ? 1 : 0) << ',' << m.margin32 << ',' << m.margin33 << '\n';
  }
}

}  // namespace cqblab
