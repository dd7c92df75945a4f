#include "cqblab/oracles.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace cqblab::oracles {

namespace {

struct Evaluator {
  int n;
  std::vector<Complex> full;
  Eigen::MatrixXcd ric;
  double sign;

  double operator()(const ComplexVector& x, const ComplexVector& y) const {
    Complex ry = (y.transpose() * ric * y.conjugate())(0, 0);
    Complex s = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Complex xab = x(a) * std::conj(x(b));
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            s += full[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d] * xab * y(c) * std::conj(y(d));
      }
    return x.squaredNorm() * ry.real() + sign * s.real();
  }
};

ComplexVector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(nd(rng), nd(rng));
  return v.normalized();
}

struct PolishData {
  const Evaluator* eval;
};

ComplexVector unpack(const gsl_vector* p, int offset, int n) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(gsl_vector_get(p, offset + 2 * i), gsl_vector_get(p, offset + 2 * i + 1));
  const double nv = v.norm();
  if (nv < 1e-300) return ComplexVector::Unit(n, 0);
  return v / nv;
}

double polish_objective(const gsl_vector* p, void* params) {
  const auto* d = static_cast<PolishData*>(params);
  const int n = d->eval->n;
  return (*d->eval)(unpack(p, 0, n), unpack(p, 2 * n, n));
}

GridOracleResult polish_pair(const Evaluator& eval, const ComplexVector& x, const ComplexVector& y) {
  const int n = eval.n;
  const int dim = 4 * n;
  gsl_vector* start = gsl_vector_alloc(dim);
  gsl_vector* step = gsl_vector_alloc(dim);
  for (int i = 0; i < n; ++i) {
    gsl_vector_set(start, 2 * i, x(i).real());
    gsl_vector_set(start, 2 * i + 1, x(i).imag());
    gsl_vector_set(start, 2 * n + 2 * i, y(i).real());
    gsl_vector_set(start, 2 * n + 2 * i + 1, y(i).imag());
  }
  gsl_vector_set_all(step, 0.05);
  PolishData data{&eval};
  gsl_multimin_function fn{&polish_objective, static_cast<std::size_t>(dim), &data};
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &fn, start, step);
  for (int it = 0; it < 20000; ++it) {
    if (gsl_multimin_fminimizer_iterate(s)) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-11) == GSL_SUCCESS) break;
  }
  GridOracleResult out;
  out.x = unpack(s->x, 0, n);
  out.y = unpack(s->x, 2 * n, n);
  out.min_value = eval(out.x, out.y);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(start);
  gsl_vector_free(step);
  return out;
}

}  // namespace

GridOracleResult rank1_grid_oracle(const CurvatureTensor& r, FormKind kind, int grid, std::uint64_t seed, int polish) {
  if (grid < 1) throw std::invalid_argument("rank1_grid_oracle: grid must be positive");
  const int n = r.n();
  Evaluator eval{n, r.expand(), ricci(r), kind == FormKind::Cqb ? -1.0 : 1.0};
  std::mt19937_64 rng(seed);
  std::vector<ComplexVector> xs, ys;
  for (int i = 0; i < grid; ++i) xs.push_back(random_unit(n, rng));
  for (int i = 0; i < grid; ++i) ys.push_back(random_unit(n, rng));

  std::vector<std::tuple<double, int, int>> samples;
  samples.reserve(static_cast<std::size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) samples.emplace_back(eval(xs[i], ys[j]), i, j);
  const auto keep = std::min<std::size_t>(std::max(polish, 1), samples.size());
  std::partial_sort(samples.begin(), samples.begin() + keep, samples.end());

  GridOracleResult best;
  best.min_value = std::get<0>(samples.front());
  best.x = xs[std::get<1>(samples.front())];
  best.y = ys[std::get<2>(samples.front())];
  for (std::size_t s = 0; s < keep && polish > 0; ++s) {
    const auto res = polish_pair(eval, xs[std::get<1>(samples[s])], ys[std::get<2>(samples[s])]);
    if (res.min_value < best.min_value) best = res;
  }
  return best;
}

MostowSiuPq mostow_siu_pq(const MostowSiuParams& prm, const LinearMap& a) {
  const int n = prm.n;
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("mostow_siu_pq: dimension mismatch");
  MostowSiuPq out;
  double first_col = 0, rest = 0;
  for (int l = 0; l < n; ++l) {
    first_col += std::norm(a(l, 0));
    for (int i = 1; i < n; ++i) rest += std::norm(a(l, i));
  }
  out.p = (prm.b + (n - 1) * prm.c) * first_col + (prm.c + n * prm.e) * rest;
  out.q = prm.b * std::norm(a(0, 0));
  for (int i = 1; i < n; ++i) {
    out.q += 2 * prm.e * std::norm(a(i, i));
    out.q += prm.c * std::norm(a(0, i) + a(i, 0));
    for (int k = i + 1; k < n; ++k) out.q += prm.e * std::norm(a(i, k) + a(k, i));
  }
  return out;
}

CurvatureTensor homogeneous_curvature(const CSpace& space, const InvariantMetric& metric) {
  const LieAlgebra& alg = *space.algebra;
  const int n = space.n;
  const int m = 2 * n;
  const int dim = alg.matrix_dim();
  auto to_complex = [dim](const RationalMatrix& x) {
    Eigen::MatrixXcd out(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) out(i, j) = to_double(x(i, j));
    return out;
  };

  // Basis of m^C: E_a for frame roots, then E_{-a}.
  std::vector<Eigen::MatrixXcd> basis;
  std::vector<Eigen::MatrixXcd> dual;  // tr(X dual_k) extracts the coefficient of basis_k
  std::vector<double> gz(n);
  for (int a = 0; a < n; ++a) {
    const std::size_t id = space.root_ids[a];
    gz[a] = to_double(metric.g[a]) * to_double(trace_form(alg.root_vector(id), alg.root_vector(alg.negative_index(id))));
  }
  for (int sgn = 0; sgn < 2; ++sgn)
    for (int a = 0; a < n; ++a) {
      const std::size_t id = sgn == 0 ? space.root_ids[a] : alg.negative_index(space.root_ids[a]);
      const std::size_t opp = alg.negative_index(id);
      const Eigen::MatrixXcd e = to_complex(alg.root_vector(id));
      const Eigen::MatrixXcd f = to_complex(alg.root_vector(opp));
      basis.push_back(e);
      dual.push_back(f / (e * f).trace());
    }
  auto project = [&](const Eigen::MatrixXcd& x) {
    Eigen::VectorXcd v(m);
    for (int k = 0; k < m; ++k) v(k) = (x * dual[k]).trace();
    return v;
  };
  auto embed = [&](const Eigen::VectorXcd& v) {
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < m; ++k) x += v(k) * basis[k];
    return x;
  };
  auto br = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) -> Eigen::MatrixXcd { return x * y - y * x; };

  // Complex bilinear extension of the metric: <E_a, E_{-a}> = -g_a z_a.
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(m, m);
  for (int a = 0; a < n; ++a) gram(a, n + a) = gram(n + a, a) = -gz[a];
  const Eigen::MatrixXcd gram_inv = gram.inverse();

  // lam[i] is the matrix of Lambda(basis_i) on m^C.
  std::vector<Eigen::MatrixXcd> lam(m, Eigen::MatrixXcd::Zero(m, m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXcd rhs(m);
      const Eigen::VectorXcd xi = Eigen::VectorXcd::Unit(m, i), yj = Eigen::VectorXcd::Unit(m, j);
      for (int k = 0; k < m; ++k) {
        const Eigen::VectorXcd zx = project(br(basis[k], basis[i]));
        const Eigen::VectorXcd zy = project(br(basis[k], basis[j]));
        rhs(k) = 0.5 * ((zx.transpose() * gram * yj)(0, 0) + (xi.transpose() * gram * zy)(0, 0));
      }
      lam[i].col(j) = 0.5 * project(br(basis[i], basis[j])) + gram_inv * rhs;
    }
  auto lambda_of = [&](const Eigen::VectorXcd& v) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
    for (int k = 0; k < m; ++k)
      if (v(k) != Complex(0.0)) out += v(k) * lam[k];
    return out;
  };
  auto curvature_op = [&](int i, int j) {
    const Eigen::MatrixXcd xy = br(basis[i], basis[j]);
    const Eigen::VectorXcd xy_m = project(xy);
    const Eigen::MatrixXcd xy_l = xy - embed(xy_m);
    Eigen::MatrixXcd iso(m, m);
    for (int k = 0; k < m; ++k) iso.col(k) = project(br(xy_l, basis[k]));
    return Eigen::MatrixXcd(lam[i] * lam[j] - lam[j] * lam[i] - lambda_of(xy_m) - iso);
  };

  // R(E_a, conj E_b, E_c, conj E_d) = <R(E_a, E_{-b}) E_d, E_{-c}> after both
  // conjugations (conj E_b = -E_{-b}) cancel; the slot order gives positive
  // holomorphic sectional curvature.
  std::vector<Complex> full(static_cast<std::size_t>(n) * n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Eigen::MatrixXcd op = curvature_op(a, n + b);
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Complex v = (Eigen::VectorXcd::Unit(m, n + d).transpose() * gram * op.col(c))(0, 0);
          full[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d] = v / std::sqrt(gz[a] * gz[b] * gz[c] * gz[d]);
        }
    }
  CurvatureTensor out = CurvatureTensor::from_expanded(n, full);
  for (const auto& root : space.delta_phi) out.frame_labels.push_back(root.label());
  return out;
}

}  // namespace cqblab::oracles
