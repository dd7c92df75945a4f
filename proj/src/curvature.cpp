#include "cqblab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cqblab {

OrbitKey canonical_orbit(const Index4& idx) {
  const auto [a, b, c, d] = idx;
  const std::array<std::pair<Index4, bool>, 8> images = {{
      {{a, b, c, d}, false},
      {{c, b, a, d}, false},
      {{a, d, c, b}, false},
      {{c, d, a, b}, false},
      {{b, a, d, c}, true},
      {{b, c, d, a}, true},
      {{d, a, b, c}, true},
      {{d, c, b, a}, true},
  }};
  OrbitKey out{images[0].first, false, false};
  for (const auto& [t, conj] : images)
    if (t < out.key) out = {t, conj, false};
  for (const auto& [t, conj] : images)
    if (t == out.key && conj != out.conjugate) out.self_conjugate = true;
  return out;
}

CurvatureTensor::CurvatureTensor(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("CurvatureTensor: dimension must be positive");
  if (dense_storage()) dense_.assign(static_cast<std::size_t>(n) * n * n * n, Complex(0.0));
}

std::size_t CurvatureTensor::slot(const Index4& k) const {
  return ((static_cast<std::size_t>(k[0]) * n_ + k[1]) * n_ + k[2]) * n_ + k[3];
}

Complex CurvatureTensor::operator()(int a, int b, int c, int d) const {
  const OrbitKey ok = canonical_orbit({a, b, c, d});
  Complex v;
  if (dense_storage()) {
    v = dense_[slot(ok.key)];
  } else {
    auto it = sparse_.find(ok.key);
    v = it == sparse_.end() ? Complex(0.0) : it->second;
  }
  return ok.conjugate ? std::conj(v) : v;
}

void CurvatureTensor::set(int a, int b, int c, int d, Complex v) {
  for (int i : {a, b, c, d})
    if (i < 0 || i >= n_) throw std::out_of_range("CurvatureTensor::set: index out of range");
  const OrbitKey ok = canonical_orbit({a, b, c, d});
  if (ok.self_conjugate) {
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
      throw std::invalid_argument("CurvatureTensor::set: self-conjugate component must be real");
    v = Complex(v.real(), 0.0);
  }
  if (ok.conjugate) v = std::conj(v);
  if (dense_storage()) {
    dense_[slot(ok.key)] = v;
  } else if (v == Complex(0.0)) {
    sparse_.erase(ok.key);
  } else {
    sparse_[ok.key] = v;
  }
}

std::vector<std::pair<Index4, Complex>> CurvatureTensor::canonical_components() const {
  std::vector<std::pair<Index4, Complex>> out;
  if (dense_storage()) {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          for (int d = 0; d < n_; ++d) {
            const Index4 k{a, b, c, d};
            const Complex v = dense_[slot(k)];
            if (v != Complex(0.0) && canonical_orbit(k).key == k) out.emplace_back(k, v);
          }
  } else {
    for (const auto& [k, v] : sparse_)
      if (v != Complex(0.0)) out.emplace_back(k, v);
  }
  return out;
}

std::vector<Complex> CurvatureTensor::expand() const {
  const int n = n_;
  std::vector<Complex> full(static_cast<std::size_t>(n) * n * n * n, Complex(0.0));
  for (const auto& [k, v] : canonical_components()) {
    const auto [a, b, c, d] = k;
    const std::array<std::pair<Index4, bool>, 8> images = {{
        {{a, b, c, d}, false},
        {{c, b, a, d}, false},
        {{a, d, c, b}, false},
        {{c, d, a, b}, false},
        {{b, a, d, c}, true},
        {{b, c, d, a}, true},
        {{d, a, b, c}, true},
        {{d, c, b, a}, true},
    }};
    for (const auto& [t, conj] : images) full[slot(t)] = conj ? std::conj(v) : v;
  }
  return full;
}

CurvatureTensor CurvatureTensor::from_expanded(int n, std::span<const Complex> full) {
  if (full.size() != static_cast<std::size_t>(n) * n * n * n)
    throw std::invalid_argument("CurvatureTensor::from_expanded: wrong array size");
  CurvatureTensor r(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Index4 k{a, b, c, d};
          const OrbitKey ok = canonical_orbit(k);
          if (ok.key != k) continue;
          Complex v = full[r.slot(k)];
          if (v == Complex(0.0)) continue;
          if (ok.self_conjugate) v = Complex(v.real(), 0.0);
          r.set(a, b, c, d, v);
        }
  return r;
}

CurvatureTensor& CurvatureTensor::operator+=(const CurvatureTensor& other) {
  if (other.n_ != n_) throw std::invalid_argument("CurvatureTensor: dimension mismatch");
  for (const auto& [k, v] : other.canonical_components()) {
    const Complex cur = (*this)(k[0], k[1], k[2], k[3]);
    set(k[0], k[1], k[2], k[3], cur + v);
  }
  return *this;
}

CurvatureTensor CurvatureTensor::operator+(const CurvatureTensor& other) const {
  CurvatureTensor out(*this);
  out += other;
  return out;
}

CurvatureTensor CurvatureTensor::operator*(double s) const {
  CurvatureTensor out(n_);
  out.frame_labels = frame_labels;
  out.frame_roots = frame_roots;
  for (const auto& [k, v] : canonical_components()) out.set(k[0], k[1], k[2], k[3], v * s);
  return out;
}

double CurvatureTensor::norm() const {
  double s = 0;
  for (const auto& v : expand()) s += std::norm(v);
  return std::sqrt(s);
}

double CurvatureTensor::max_abs() const {
  double m = 0;
  for (const auto& [k, v] : canonical_components()) m = std::max(m, std::abs(v));
  return m;
}

double symmetry_defect(int n, std::span<const Complex> full) {
  auto at = [&](int a, int b, int c, int d) {
    return full[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  };
  double worst = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Complex v = at(a, b, c, d);
          worst = std::max(worst, std::abs(v - at(c, b, a, d)));
          worst = std::max(worst, std::abs(v - at(a, d, c, b)));
          worst = std::max(worst, std::abs(at(b, a, d, c) - std::conj(v)));
        }
  return worst;
}

namespace {

std::vector<int> add(const std::vector<int>& x, const std::vector<int>& y, int sign = 1) {
  std::vector<int> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + sign * y[i];
  return out;
}

CurvatureTensor assemble_general(const CSpace& space, const InvariantMetric& metric) {
  const LieAlgebra& alg = *space.algebra;
  const ChevalleyData cd = chevalley(alg);
  const int n = space.n;
  CurvatureTensor r(n);

  auto id = [&](const std::vector<int>& coeffs) { return alg.index_of(coeffs); };
  auto g_of = [&](const std::vector<int>& coeffs) { return metric.value(space, coeffs); };
  auto positive_in_phi = [&](const std::vector<int>& coeffs) { return space.in_delta_phi(coeffs); };
  auto z_of = [&](const std::vector<int>& coeffs) -> Rational {
    auto k = id(coeffs);
    return k ? cd.z(*k) : Rational(0);
  };
  auto n_of = [&](const std::vector<int>& x, const std::vector<int>& y) -> int {
    auto i = id(x);
    auto j = id(y);
    if (!i || !j) return 0;
    return cd.n(*i, *j);
  };
  auto neg = [](std::vector<int> x) {
    for (auto& v : x) v = -v;
    return x;
  };

  std::vector<double> frame_norm(n);
  for (int a = 0; a < n; ++a)
    frame_norm[a] = std::sqrt(to_double(metric.g[a] * cd.z(space.root_ids[a])));

  for (int a = 0; a < n; ++a) {
    const auto& al = space.delta_phi[a].coeffs;
    const Rational g_al = metric.g[a];
    const Rational z_al = cd.z(space.root_ids[a]);
    // R_{a a-bar c c-bar}, a <= c
    for (int c = a; c < n; ++c) {
      const auto& ga = space.delta_phi[c].coeffs;
      const Rational g_ga = metric.g[c];
      const Rational z_ga = cd.z(space.root_ids[c]);
      const auto sum = add(al, ga);
      const Rational bh = cd.h_gram(space.root_ids[a], space.root_ids[c]);
      Rational value;
      Rational second = 0;
      const int nag = n_of(al, ga);
      if (nag != 0) second = z_of(sum) * Rational(nag * nag) / g_of(sum);
      if (positive_in_phi(add(ga, al, -1))) {
        // g_al^2 here, not g_al g_ga: the two differ only when a - c and a + c
        // are both roots (double bonds), and the homogeneous-space oracle sides with g_al^2.
        value = g_al * z_al * z_ga * bh + g_al * g_al * second;
      } else {
        value = g_ga * z_al * z_ga * bh + g_ga * g_ga * second;
      }
      if (value != 0) r.set(a, a, c, c, to_double(value) / (frame_norm[a] * frame_norm[a] * frame_norm[c] * frame_norm[c]));
    }
    // R_{a b-bar c d-bar}, a < b <= d < c, a + c = b + d
    for (int b = a + 1; b < n; ++b) {
      const auto& be = space.delta_phi[b].coeffs;
      for (int c = b + 1; c < n; ++c) {
        const auto& ga = space.delta_phi[c].coeffs;
        const auto de = add(add(al, ga), be, -1);
        const int d = space.frame_index(de);
        if (d < b || d >= c) continue;
        const auto al_minus_be = add(al, be, -1);
        const int n1 = n_of(al, neg(be)) * n_of(ga, neg(de));
        const int n2 = n_of(al, ga) * n_of(be, de);
        Rational first = n1 != 0 ? z_of(al_minus_be) * Rational(n1) : Rational(0);
        Rational second = 0;
        const auto sum = add(al, ga);
        if (n2 != 0) second = z_of(sum) * Rational(n2) / g_of(sum);
        Rational value;
        if (positive_in_phi(add(ga, be, -1))) {
          value = g_al * first + g_al * metric.g[b] * second;
        } else {
          value = metric.g[d] * first + metric.g[c] * metric.g[d] * second;
        }
        if (value != 0)
          r.set(a, b, c, d, to_double(value) / (frame_norm[a] * frame_norm[b] * frame_norm[c] * frame_norm[d]));
      }
    }
  }
  return r;
}

// Closed forms for sl(r+1) in the unitary frame, indexed by (i,k) pairs.
CurvatureTensor assemble_type_a(const CSpace& space, const InvariantMetric& metric) {
  const int n = space.n;
  const int m = space.algebra->rank() + 1;
  CurvatureTensor r(n);
  // frame position of alpha_{ik}, 1-based i<k, or -1
  std::vector<int> pos(static_cast<std::size_t>(m + 1) * (m + 1), -1);
  auto at = [&](int i, int k) -> int& { return pos[static_cast<std::size_t>(i) * (m + 1) + k]; };
  for (int a = 0; a < n; ++a) at(space.delta_phi[a].i, space.delta_phi[a].k) = a;
  auto g = [&](int i, int k) {
    const int p = at(i, k);
    if (p >= 0) return to_double(metric.g[p]);
    std::vector<int> coeffs(m - 1, 0);
    for (int s = i; s < k; ++s) coeffs[s - 1] = 1;
    return to_double(metric.value(space, coeffs));
  };

  for (int a = 0; a < n; ++a) r.set(a, a, a, a, 2.0 / to_double(metric.g[a]));
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      for (int k = j + 1; k <= m; ++k) {
        const int ij = at(i, j), jk = at(j, k), ik = at(i, k);
        if (ik < 0) continue;
        const double inv = 1.0 / g(i, k);
        if (ij >= 0 && jk >= 0) r.set(jk, jk, ij, ij, -inv);
        if (ij >= 0) r.set(ij, ij, ik, ik, inv);
        if (jk >= 0) r.set(jk, jk, ik, ik, inv);
      }
  for (int i = 1; i <= m; ++i)
    for (int p = i + 1; p <= m; ++p)
      for (int q = p + 1; q <= m; ++q)
        for (int k = q + 1; k <= m; ++k) {
          {
            const int de = at(i, p), be = at(p, k), ga = at(i, q), al = at(q, k);
            if (de >= 0 && be >= 0 && ga >= 0 && al >= 0)
              r.set(al, be, ga, de, -std::sqrt(g(i, p) * g(q, k)) / (g(i, k) * std::sqrt(g(i, q) * g(p, k))));
          }
          {
            const int de = at(i, q), be = at(p, k), ga = at(i, k), al = at(p, q);
            if (de >= 0 && be >= 0 && ga >= 0 && al >= 0)
              r.set(al, be, ga, de, std::sqrt(g(p, q)) / std::sqrt(g(i, k) * g(i, q) * g(p, k)));
          }
        }
  return r;
}

}  // namespace

CurvatureTensor assemble(const CSpace& space, const InvariantMetric& metric, AssemblyPath path) {
  if (metric.g.size() != space.delta_phi.size() || static_cast<int>(metric.c.size()) != space.b2)
    throw std::invalid_argument("assemble: metric does not belong to " + space.descriptor());
  for (std::size_t a = 0; a < metric.g.size(); ++a)
    if (metric.g[a] != metric.value(space, space.delta_phi[a].coeffs))
      throw std::invalid_argument("assemble: metric does not belong to " + space.descriptor());
  if (path == AssemblyPath::Auto)
    path = space.algebra->family() == Family::A ? AssemblyPath::TypeA : AssemblyPath::General;
  if (path == AssemblyPath::TypeA && space.algebra->family() != Family::A)
    throw std::invalid_argument("assemble: the closed-form path only exists for type A");
  CurvatureTensor r = path == AssemblyPath::TypeA ? assemble_type_a(space, metric) : assemble_general(space, metric);
  for (const auto& beta : space.delta_phi) {
    r.frame_labels.push_back(beta.label());
    r.frame_roots.push_back(beta.coeffs);
  }
  return r;
}

HermitianTensor2 ricci(const CurvatureTensor& r) {
  const int n = r.n();
  HermitianTensor2 ric = HermitianTensor2::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) ric(a, b) += r(a, b, c, c);
  return ric;
}

double scalar(const CurvatureTensor& r) { return ricci(r).trace().real(); }

Complex bisectional(const CurvatureTensor& r, const ComplexVector& x, const ComplexVector& y) {
  const int n = r.n();
  if (x.size() != n || y.size() != n) throw std::invalid_argument("bisectional: dimension mismatch");
  Complex s = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Complex xab = x(a) * std::conj(x(b));
      if (xab == Complex(0.0)) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += r(a, b, c, d) * xab * y(c) * std::conj(y(d));
    }
  return s;
}

namespace {
ComplexVector unit(const ComplexVector& x, const char* what) {
  const double nx = x.norm();
  if (nx == 0.0) throw std::invalid_argument(std::string(what) + ": zero vector");
  return x / nx;
}
}  // namespace

double holomorphic_sectional(const CurvatureTensor& r, const ComplexVector& x) {
  const ComplexVector u = unit(x, "holomorphic_sectional");
  return bisectional(r, u, u).real();
}

double ric_perp(const CurvatureTensor& r, const ComplexVector& x) {
  const ComplexVector u = unit(x, "ric_perp");
  const Complex ric = u.transpose() * ricci(r) * u.conjugate();
  return ric.real() - bisectional(r, u, u).real();
}

double ric_plus(const CurvatureTensor& r, const ComplexVector& x) {
  const ComplexVector u = unit(x, "ric_plus");
  const Complex ric = u.transpose() * ricci(r) * u.conjugate();
  return ric.real() + bisectional(r, u, u).real();
}

CurvatureTensor product(const CurvatureTensor& r1, const CurvatureTensor& r2) {
  const int n1 = r1.n();
  CurvatureTensor out(n1 + r2.n());
  for (const auto& [k, v] : r1.canonical_components()) out.set(k[0], k[1], k[2], k[3], v);
  for (const auto& [k, v] : r2.canonical_components()) out.set(k[0] + n1, k[1] + n1, k[2] + n1, k[3] + n1, v);
  auto labels = [](const CurvatureTensor& t, const std::string& prefix) {
    std::vector<std::string> out;
    for (int a = 0; a < t.n(); ++a)
      out.push_back(prefix + (a < static_cast<int>(t.frame_labels.size()) ? t.frame_labels[a] : std::to_string(a + 1)));
    return out;
  };
  out.frame_labels = labels(r1, "1:");
  for (auto& l : labels(r2, "2:")) out.frame_labels.push_back(std::move(l));
  return out;
}

bool MostowSiuParams::in_negative_regime() const {
  return b > 0 && c > 0 && e > 0 && n * b * e > (n - 1) * (n - 1) * c * c;
}

CurvatureTensor mostow_siu_model(const MostowSiuParams& p) {
  if (p.n < 2) throw std::invalid_argument("mostow_siu_model: n must be at least 2");
  if (!(p.b > 0 && p.c > 0 && p.e > 0)) throw std::invalid_argument("mostow_siu_model: b, c, e must be positive");
  CurvatureTensor r(p.n);
  r.set(0, 0, 0, 0, -p.b);
  for (int i = 1; i < p.n; ++i) {
    r.set(0, 0, i, i, -p.c);
    r.set(i, i, i, i, -2.0 * p.e);
    for (int j = i + 1; j < p.n; ++j) r.set(i, i, j, j, -p.e);
  }
  return r;
}

CurvatureTensor random_kahler_operator(int n, std::uint64_t seed, double scale) {
  if (n < 1) throw std::invalid_argument("random_kahler_operator: n must be positive");
  std::vector<std::pair<int, int>> basis;
  for (int a = 0; a < n; ++a)
    for (int c = a; c < n; ++c) basis.emplace_back(a, c);
  const int dim = static_cast<int>(basis.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd q(dim, dim);
  for (int i = 0; i < dim; ++i) {
    q(i, i) = scale * normal(rng);
    for (int j = i + 1; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      q(i, j) = scale * Complex(re, im) / std::sqrt(2.0);
      q(j, i) = std::conj(q(i, j));
    }
  }
  auto kappa = [](const std::pair<int, int>& p) { return p.first == p.second ? 1.0 : std::sqrt(2.0); };
  CurvatureTensor r(n);
  // R(a, b-bar, c, d-bar) = <Q(e_a.e_c), conj(e_b.e_d)> = q[(b,d), (a,c)] / (kappa_ac kappa_bd)
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const auto [b, d] = basis[i];
      const auto [a, c] = basis[j];
      const OrbitKey ok = canonical_orbit({a, b, c, d});
      if (ok.key != Index4{a, b, c, d}) continue;
      r.set(a, b, c, d, q(i, j) / (kappa(basis[i]) * kappa(basis[j])));
    }
  return r;
}

CurvatureTensor constant_holomorphic_curvature(int n) {
  CurvatureTensor r(n);
  for (int a = 0; a < n; ++a) {
    r.set(a, a, a, a, 2.0);
    for (int c = a + 1; c < n; ++c) r.set(a, a, c, c, 1.0);
  }
  return r;
}

nlohmann::json to_json(const CurvatureTensor& r) {
  nlohmann::json j;
  j["n"] = r.n();
  j["frame_labels"] = r.frame_labels;
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& [k, v] : r.canonical_components())
    comps.push_back({k[0] + 1, k[1] + 1, k[2] + 1, k[3] + 1, v.real(), v.imag()});
  j["components"] = std::move(comps);
  return j;
}

CurvatureTensor tensor_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  CurvatureTensor r(n);
  if (j.contains("frame_labels")) r.frame_labels = j.at("frame_labels").get<std::vector<std::string>>();
  for (const auto& c : j.at("components")) {
    if (c.size() != 6) throw std::invalid_argument("tensor JSON: component rows must have 6 entries");
    r.set(c[0].get<int>() - 1, c[1].get<int>() - 1, c[2].get<int>() - 1, c[3].get<int>() - 1,
          Complex(c[4].get<double>(), c[5].get<double>()));
  }
  return r;
}

}  // namespace cqblab
