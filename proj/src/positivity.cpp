#include "cqblab/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cqblab {

std::string to_string(FormKind k) { return k == FormKind::Cqb ? "cqb" : "dcqb"; }

FormKind parse_form_kind(const std::string& s) {
  if (s == "cqb") return FormKind::Cqb;
  if (s == "dcqb") return FormKind::Dcqb;
  throw std::invalid_argument("unknown form '" + s + "' (expected cqb or dcqb)");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Positive: return "positive";
    case Verdict::NonnegativeWithKernel: return "nonnegative_with_kernel";
    case Verdict::Indefinite: return "indefinite";
    case Verdict::Negative: return "negative";
    case Verdict::NonpositiveWithKernel: return "nonpositive_with_kernel";
  }
  return "indefinite";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Eigen: return "eigen";
    case Method::Alternating: return "alternating";
    case Method::BruteForce: return "brute_force";
  }
  return "eigen";
}

namespace {

double sign_of(FormKind kind) { return kind == FormKind::Cqb ? -1.0 : 1.0; }

struct Expanded {
  int n;
  std::vector<Complex> r;
  HermitianTensor2 ric;
  explicit Expanded(const CurvatureTensor& t) : n(t.n()), r(t.expand()), ric(ricci(t)) {}
  Complex operator()(int a, int b, int c, int d) const {
    return r[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  }
};

Eigen::MatrixXcd raw_form(const Expanded& t, FormKind kind) {
  const int n = t.n;
  const double s = sign_of(kind);
  Eigen::MatrixXcd m(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          Complex v = s * t(a, b, c, d);
          if (a == b) v += t.ric(c, d);
          m(a * n + c, b * n + d) = v;
        }
  return m;
}

double value_from(const Expanded& t, const LinearMap& a, FormKind kind) {
  const int n = t.n;
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("form value: linear map has wrong dimensions");
  const double s = sign_of(kind);
  // For dual CQB the same sums apply to conj(A).
  const LinearMap m = kind == FormKind::Cqb ? LinearMap(a) : LinearMap(a.conjugate());
  Complex ric_part = 0;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) ric_part += t.ric(c, d) * m(i, c) * std::conj(m(i, d));
  Complex r_part = 0;
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Complex x = m(i, c);
        if (x == Complex(0.0)) continue;
        for (int d = 0; d < n; ++d) r_part += t(i, b, c, d) * x * std::conj(m(b, d));
      }
  const Complex total = ric_part + s * r_part;
  const double scale = 1.0 + std::abs(ric_part) + std::abs(r_part);
  if (std::abs(total.imag()) > 1e-12 * scale) {
    std::ostringstream os;
    os << "form value has imaginary residue " << total.imag() << "; tensor is not Hermitian";
    throw std::logic_error(os.str());
  }
  return total.real();
}

Eigen::VectorXcd form_vector(const LinearMap& a, FormKind kind) {
  Eigen::VectorXcd v = flatten(a);
  return kind == FormKind::Cqb ? Eigen::VectorXcd(v.conjugate()) : v;
}

QuadraticFormMatrix checked_form(const CurvatureTensor& r, FormKind kind) {
  const Expanded t(r);
  const int n = t.n;
  Eigen::MatrixXcd m = raw_form(t, kind);
  const double residue = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (residue > 1e-9 * scale) {
    std::ostringstream os;
    os << to_string(kind) << " form: Hermiticity residue " << residue << " exceeds tolerance";
    throw std::logic_error(os.str());
  }
  m = 0.5 * (m + m.adjoint()).eval();
  std::mt19937_64 rng(0x5eedc0b1ULL);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    LinearMap a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = Complex(normal(rng), normal(rng));
    const double direct = value_from(t, a, kind);
    const Eigen::VectorXcd w = form_vector(a, kind);
    const double via_form = (w.adjoint() * m * w)(0, 0).real();
    if (std::abs(direct - via_form) > 1e-10 * std::max({1.0, std::abs(direct), scale * a.squaredNorm()})) {
      std::ostringstream os;
      os << to_string(kind) << " form disagrees with direct evaluation: " << direct << " vs " << via_form;
      throw std::logic_error(os.str());
    }
  }
  QuadraticFormMatrix out;
  out.dim = n * n;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) out.basis_labels.emplace_back(a, c);
  out.entries = std::move(m);
  return out;
}

}  // namespace

Eigen::VectorXd QuadraticFormMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::MatrixXcd QuadraticFormMatrix::eigenvectors() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries);
  return es.eigenvectors();
}

double QuadraticFormMatrix::scale() const {
  const double s = entries.cwiseAbs().maxCoeff();
  return s > 0 ? s : 1.0;
}

Eigen::VectorXcd flatten(const LinearMap& a) {
  const int n = static_cast<int>(a.rows());
  Eigen::VectorXcd v(n * a.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  return v;
}

LinearMap unflatten(const Eigen::VectorXcd& v, int n) {
  LinearMap a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = v(i * n + j);
  return a;
}

double cqb_value(const CurvatureTensor& r, const LinearMap& a) { return value_from(Expanded(r), a, FormKind::Cqb); }
double dcqb_value(const CurvatureTensor& r, const LinearMap& a) { return value_from(Expanded(r), a, FormKind::Dcqb); }
double form_value(const CurvatureTensor& r, const LinearMap& a, FormKind kind) { return value_from(Expanded(r), a, kind); }

QuadraticFormMatrix cqb_form(const CurvatureTensor& r) { return checked_form(r, FormKind::Cqb); }
QuadraticFormMatrix dcqb_form(const CurvatureTensor& r) { return checked_form(r, FormKind::Dcqb); }
QuadraticFormMatrix form_matrix(const CurvatureTensor& r, FormKind kind) { return checked_form(r, kind); }

QuadraticFormMatrix q_operator(const CurvatureTensor& r) {
  const int n = r.n();
  QuadraticFormMatrix out;
  for (int a = 0; a < n; ++a)
    for (int c = a; c < n; ++c) out.basis_labels.emplace_back(a, c);
  out.dim = static_cast<int>(out.basis_labels.size());
  out.entries.resize(out.dim, out.dim);
  auto kappa = [](const std::pair<int, int>& p) { return p.first == p.second ? 1.0 : std::sqrt(2.0); };
  for (int i = 0; i < out.dim; ++i)
    for (int j = 0; j < out.dim; ++j) {
      const auto& bi = out.basis_labels[i];
      const auto& bj = out.basis_labels[j];
      out.entries(i, j) = kappa(bi) * kappa(bj) * r(bj.first, bi.first, bj.second, bi.second);
    }
  return out;
}

KeCriteria ke_criteria(double mu, double lambda1, double lambda_n, double tolerance) {
  if (!std::isfinite(mu) || !std::isfinite(lambda1) || !std::isfinite(lambda_n))
    throw std::invalid_argument("ke_criteria: inputs must be finite");
  KeCriteria k;
  k.cqb_positive = mu - lambda_n > tolerance;
  k.cqb_borderline = std::abs(mu - lambda_n) <= tolerance;
  k.dcqb_positive = lambda1 + mu > tolerance;
  k.dcqb_borderline = std::abs(lambda1 + mu) <= tolerance;
  return k;
}

std::optional<double> einstein_constant(const CurvatureTensor& r, double tolerance) {
  const HermitianTensor2 ric = ricci(r);
  const double mu = ric(0, 0).real();
  const HermitianTensor2 diff = ric - mu * HermitianTensor2::Identity(r.n(), r.n());
  if (diff.cwiseAbs().maxCoeff() > tolerance) return std::nullopt;
  return mu;
}

Verdict classify(double min_value, double max_value, double tolerance) {
  if (min_value > tolerance) return Verdict::Positive;
  if (max_value < -tolerance) return Verdict::Negative;
  if (min_value >= -tolerance) return Verdict::NonnegativeWithKernel;
  if (max_value <= tolerance) return Verdict::NonpositiveWithKernel;
  return Verdict::Indefinite;
}

nlohmann::json to_json(const PositivityReport& report) {
  nlohmann::json j;
  j["what"] = report.what;
  j["mode"] = to_string(report.mode);
  j["rank_limit"] = report.rank_limit;
  j["verdict"] = to_string(report.verdict);
  j["min_value"] = report.min_value;
  j["max_value"] = report.max_value;
  j["normalization"] = report.normalization;
  j["mu"] = report.mu ? nlohmann::json(*report.mu) : nlohmann::json(nullptr);
  j["lambda1"] = report.lambda1 ? nlohmann::json(*report.lambda1) : nlohmann::json(nullptr);
  j["lambdaN"] = report.lambda_n ? nlohmann::json(*report.lambda_n) : nlohmann::json(nullptr);
  auto complex_matrix = [](const Eigen::MatrixXcd& m) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
      nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
      for (int k = 0; k < m.cols(); ++k) {
        rr.push_back(m(i, k).real());
        ir.push_back(m(i, k).imag());
      }
      re.push_back(std::move(rr));
      im.push_back(std::move(ir));
    }
    return nlohmann::json{{"re", re}, {"im", im}};
  };
  nlohmann::json w;
  w["map"] = complex_matrix(report.witness);
  if (report.witness_x) w["x"] = complex_matrix(*report.witness_x);
  if (report.witness_y) w["y"] = complex_matrix(*report.witness_y);
  j["witness"] = std::move(w);
  j["tolerance"] = report.tolerance;
  j["method"] = to_string(report.method);
  j["converged"] = report.converged;
  j["warnings"] = report.warnings;
  return j;
}

PositivityReport form_check(const CurvatureTensor& r, FormKind kind, double tolerance) {
  const QuadraticFormMatrix m = form_matrix(r, kind);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.entries);
  PositivityReport rep;
  rep.what = to_string(kind);
  rep.mode = kind;
  rep.rank_limit = r.n();
  rep.min_value = es.eigenvalues()(0);
  rep.max_value = es.eigenvalues()(m.dim - 1);
  rep.normalization = m.scale();
  rep.tolerance = tolerance;
  rep.method = Method::Eigen;
  Eigen::VectorXcd w = es.eigenvectors().col(0);
  // The CQB form acts on conj(vec A).
  if (kind == FormKind::Cqb) w = w.conjugate();
  rep.witness = unflatten(w, r.n());
  rep.verdict = classify(rep.min_value / rep.normalization, rep.max_value / rep.normalization, tolerance);
  if (auto mu = einstein_constant(r)) {
    const Eigen::VectorXd q = q_operator(r).eigenvalues();
    rep.mu = *mu;
    rep.lambda1 = q(0);
    rep.lambda_n = q(q.size() - 1);
  }
  return rep;
}

LinearMap outer(const ComplexVector& x, const ComplexVector& y) { return x * y.transpose(); }

std::vector<ComplexVector> halton_unit_vectors(int n, int count, std::uint64_t seed) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
                               67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151};
  std::vector<ComplexVector> out;
  std::uint64_t index = 1 + seed * 7919;
  auto radical_inverse = [](std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
      f /= base;
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    return r;
  };
  while (static_cast<int>(out.size()) < count) {
    ComplexVector v(n);
    for (int d = 0; d < n; ++d) {
      const int p1 = primes[(2 * d) % 36], p2 = primes[(2 * d + 1) % 36];
      const double u1 = radical_inverse(index, p1), u2 = radical_inverse(index, p2);
      v(d) = Complex(2.0 * u1 - 1.0, 2.0 * u2 - 1.0);
    }
    ++index;
    const double nv = v.norm();
    if (nv < 1e-3) continue;
    out.push_back(v / nv);
  }
  return out;
}

namespace {

struct Biquadratic {
  const Expanded& t;
  double s;  // -1 for CQB, +1 for dual CQB
  double flip;  // +1 minimizes F, -1 minimizes -F

  // Hermitian matrix H with F(X, Y) = Y^H H Y for fixed unit X.
  Eigen::MatrixXcd y_form(const ComplexVector& x) const {
    const int n = t.n;
    Eigen::MatrixXcd m = t.ric;
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) {
        Complex acc = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) acc += t(a, b, c, d) * x(a) * std::conj(x(b));
        m(c, d) += s * acc;
      }
    return flip * Eigen::MatrixXcd(m.transpose());
  }
  Eigen::MatrixXcd x_form(const ComplexVector& y) const {
    const int n = t.n;
    const Complex ric_y = (y.transpose() * t.ric * y.conjugate())(0, 0);
    Eigen::MatrixXcd m = ric_y.real() * Eigen::MatrixXcd::Identity(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Complex acc = 0;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) acc += t(a, b, c, d) * y(c) * std::conj(y(d));
        m(b, a) += s * acc;
      }
    return flip * m;
  }
  double value(const ComplexVector& x, const ComplexVector& y) const {
    return (y.adjoint() * y_form(x) * y)(0, 0).real();
  }
};

struct AlternatingResult {
  double value = std::numeric_limits<double>::infinity();
  ComplexVector x, y;
  bool converged = false;
  int start = -1;
};

// Lowest eigenvector(s); two when the lowest eigenvalues are degenerate.
std::vector<ComplexVector> lowest(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
  std::vector<ComplexVector> out{es.eigenvectors().col(0)};
  const double scale = std::max(1.0, std::abs(es.eigenvalues()(0)));
  if (h.rows() > 1 && std::abs(es.eigenvalues()(1) - es.eigenvalues()(0)) <= 1e-12 * scale)
    out.push_back(es.eigenvectors().col(1));
  return out;
}

AlternatingResult alternate(const Biquadratic& f, ComplexVector x, const MinimizerOptions& opt) {
  AlternatingResult res;
  double prev = std::numeric_limits<double>::infinity();
  ComplexVector y;
  for (int it = 0; it < opt.max_iterations; ++it) {
    // Y step, then X step; degenerate Y choices are resolved by the X step that follows.
    double best = std::numeric_limits<double>::infinity();
    ComplexVector best_x, best_y;
    for (const auto& cand_y : lowest(f.y_form(x))) {
      const ComplexVector cand_x = lowest(f.x_form(cand_y)).front();
      const double v = f.value(cand_x, cand_y);
      if (v < best) {
        best = v;
        best_x = cand_x;
        best_y = cand_y;
      }
    }
    x = best_x;
    y = best_y;
    if (std::abs(prev - best) <= opt.relative_change * std::max(1.0, std::abs(best))) {
      res.converged = true;
      prev = best;
      break;
    }
    prev = best;
  }
  res.value = prev;
  res.x = x;
  res.y = y;
  return res;
}

AlternatingResult multistart(const Biquadratic& f, int n, const MinimizerOptions& opt) {
  std::vector<ComplexVector> starts;
  for (int a = 0; a < n; ++a) starts.push_back(ComplexVector::Unit(n, a));
  for (auto& v : halton_unit_vectors(n, opt.starts, opt.seed)) starts.push_back(std::move(v));
  AlternatingResult best;
  for (int i = 0; i < static_cast<int>(starts.size()); ++i) {
    AlternatingResult r = alternate(f, starts[i], opt);
    r.start = i;
    // ties resolved by start index so the outcome never depends on evaluation order
    if (r.value < best.value) best = std::move(r);
  }
  return best;
}

PositivityReport base_report(const CurvatureTensor& r, FormKind kind, int k, const MinimizerOptions& opt) {
  PositivityReport rep;
  rep.mode = kind;
  rep.rank_limit = k;
  rep.tolerance = opt.tolerance;
  rep.method = Method::Alternating;
  rep.normalization = std::max(1e-300, raw_form(Expanded(r), kind).cwiseAbs().maxCoeff());
  if (rep.normalization <= 1e-300) rep.normalization = 1.0;
  if (auto mu = einstein_constant(r)) rep.mu = *mu;
  return rep;
}

}  // namespace

PositivityReport rank1_check(const CurvatureTensor& r, FormKind kind, const MinimizerOptions& opt) {
  const Expanded t(r);
  const int n = r.n();
  PositivityReport rep = base_report(r, kind, 1, opt);
  rep.what = to_string(kind) + "_rank1";
  const AlternatingResult lo = multistart(Biquadratic{t, sign_of(kind), 1.0}, n, opt);
  const AlternatingResult hi = multistart(Biquadratic{t, sign_of(kind), -1.0}, n, opt);
  rep.min_value = lo.value;
  rep.max_value = -hi.value;
  rep.converged = lo.converged && hi.converged;
  if (!rep.converged) rep.warnings.push_back("alternating minimization hit the iteration limit; best value reported");
  rep.witness_x = lo.x;
  rep.witness_y = lo.y;
  rep.witness = kind == FormKind::Cqb ? outer(lo.x, lo.y) : outer(lo.x.conjugate(), lo.y.conjugate());
  rep.verdict = classify(rep.min_value / rep.normalization, rep.max_value / rep.normalization, opt.tolerance);
  return rep;
}

namespace {

// Orthonormal basis (n x k) of the column span of m, padded deterministically if rank deficient.
Eigen::MatrixXcd orthonormal_columns(const Eigen::MatrixXcd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
}

struct RankKResult {
  double value = std::numeric_limits<double>::infinity();
  LinearMap a;
  bool converged = false;
};

RankKResult alternate_rank_k(const Eigen::MatrixXcd& form, FormKind kind, Eigen::MatrixXcd x, Eigen::MatrixXcd y,
                             const MinimizerOptions& opt) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(x.cols());
  RankKResult res;
  double prev = std::numeric_limits<double>::infinity();
  // A = X Y^T. With one factor fixed and orthonormalized, vec A = L p is
  // isometric in the other factor p.
  auto solve = [&](const Eigen::MatrixXcd& fixed, bool fixed_is_y) {
    const Eigen::MatrixXcd q = orthonormal_columns(fixed);
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n * n, n * k);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        for (int i = 0; i < k; ++i) {
          if (fixed_is_y)
            l(a * n + c, a * k + i) = q(c, i);  // p = X(a, i)
          else
            l(a * n + c, c * k + i) = q(a, i);  // p = Y(c, i)
        }
    if (kind == FormKind::Cqb) l = l.conjugate().eval();
    const Eigen::MatrixXcd reduced = l.adjoint() * form * l;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (reduced + reduced.adjoint()));
    Eigen::VectorXcd p = es.eigenvectors().col(0);
    if (kind == FormKind::Cqb) p = p.conjugate();
    Eigen::MatrixXcd free(n, k);
    for (int r = 0; r < n; ++r)
      for (int i = 0; i < k; ++i) free(r, i) = p(r * k + i);
    return std::make_tuple(q, free, es.eigenvalues()(0));
  };
  for (int it = 0; it < opt.max_iterations; ++it) {
    auto [qy, newx, v1] = solve(y, true);
    y = qy;
    x = newx;
    auto [qx, newy, v2] = solve(x, false);
    x = qx;
    y = newy;
    if (std::abs(prev - v2) <= opt.relative_change * std::max(1.0, std::abs(v2))) {
      prev = v2;
      res.converged = true;
      break;
    }
    prev = v2;
  }
  res.value = prev;
  res.a = x * y.transpose();
  const double na = res.a.norm();
  if (na > 0) res.a /= na;
  return res;
}

}  // namespace

PositivityReport rank_k_check(const CurvatureTensor& r, int k, FormKind kind, const MinimizerOptions& opt) {
  const int n = r.n();
  if (k < 1 || k > n) throw std::invalid_argument("rank_k_check: rank limit must lie in 1..n");
  if (k == n) {
    PositivityReport rep = form_check(r, kind, opt.tolerance);
    rep.what = to_string(kind) + "_rank" + std::to_string(k);
    return rep;
  }
  if (k == 1) return rank1_check(r, kind, opt);

  const PositivityReport prev = rank_k_check(r, k - 1, kind, opt);
  const Expanded t(r);
  const Eigen::MatrixXcd form = raw_form(t, kind);
  PositivityReport rep = base_report(r, kind, k, opt);
  rep.what = to_string(kind) + "_rank" + std::to_string(k);

  // Warm starts: previous witness factored by SVD, extended by one extra direction.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(prev.witness, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXcd u = svd.matrixU() * svd.singularValues().asDiagonal().toDenseMatrix().cast<Complex>();
  const Eigen::MatrixXcd v = svd.matrixV().conjugate();
  const auto extra = halton_unit_vectors(n, 2 * std::max(4, opt.starts / 4), opt.seed + static_cast<std::uint64_t>(k));
  const int nstarts = std::max(4, opt.starts / 4);

  auto run = [&](const Eigen::MatrixXcd& f, FormKind fk) {
    RankKResult best;
    for (int s = 0; s < nstarts; ++s) {
      Eigen::MatrixXcd x = u.leftCols(k);
      Eigen::MatrixXcd y = v.leftCols(k);
      if (s > 0) {
        // perturbed / fresh starts beyond the warm start
        x.col(k - 1) = extra[2 * s];
        y.col(k - 1) = extra[2 * s + 1];
        if (s % 2 == 0) {
          for (int i = 0; i < k; ++i) y.col(i) = extra[(2 * s + 1 + i) % extra.size()];
        }
      } else {
        x.col(k - 1) = 1e-3 * extra[0];
        y.col(k - 1) = extra[1];
      }
      RankKResult res = alternate_rank_k(f, fk, x, y, opt);
      if (res.value < best.value) best = std::move(res);
    }
    return best;
  };

  const RankKResult lo = run(form, kind);
  const RankKResult hi = run(-form, kind);
  rep.converged = lo.converged && hi.converged;
  if (!rep.converged) rep.warnings.push_back("block alternation hit the iteration limit; best value reported");
  if (lo.value <= prev.min_value) {
    rep.min_value = lo.value;
    rep.witness = lo.a;
  } else {
    rep.min_value = prev.min_value;
    rep.witness = prev.witness;
  }
  rep.max_value = std::max(-hi.value, prev.max_value);
  rep.verdict = classify(rep.min_value / rep.normalization, rep.max_value / rep.normalization, opt.tolerance);
  return rep;
}

double product_decomposition_check(const CurvatureTensor& r1, const CurvatureTensor& r2, const LinearMap& a) {
  const int n1 = r1.n(), n2 = r2.n(), n = n1 + n2;
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("product_decomposition_check: map has wrong size");
  const CurvatureTensor whole = product(r1, r2);
  const double total = cqb_value(whole, a);
  const double part1 = cqb_value(r1, a.topLeftCorner(n1, n1));
  const double part2 = cqb_value(r2, a.bottomRightCorner(n2, n2));
  const HermitianTensor2 ric1 = ricci(r1), ric2 = ricci(r2);
  Complex cross = 0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j)
      for (int al = 0; al < n2; ++al) cross += ric1(i, j) * a(n1 + al, i) * std::conj(a(n1 + al, j));
  for (int al = 0; al < n2; ++al)
    for (int be = 0; be < n2; ++be)
      for (int i = 0; i < n1; ++i) cross += ric2(al, be) * a(i, n1 + al) * std::conj(a(i, n1 + be));
  return std::abs(total - part1 - part2 - cross.real()) + std::abs(cross.imag());
}

}  // namespace cqblab
