#include "cqblab/lie.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cqblab {

char family_letter(Family f) {
  switch (f) {
    case Family::A: return 'A';
    case Family::B: return 'B';
    case Family::C: return 'C';
    case Family::D: return 'D';
  }
  return '?';
}

Family parse_family(const std::string& s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  if (s == "C" || s == "c") return Family::C;
  if (s == "D" || s == "d") return Family::D;
  throw std::invalid_argument("unknown Lie algebra family '" + s + "' (expected A, B, C or D)");
}

bool Root::positive() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](int c) { return c >= 0; });
}

int Root::height() const {
  int h = 0;
  for (int c : coeffs) h += c;
  return h;
}

std::string Root::label() const {
  std::ostringstream os;
  if (i != 0) {
    os << "a" << i << "," << k;
    return os.str();
  }
  os << "(";
  for (std::size_t j = 0; j < coeffs.size(); ++j) os << (j ? "," : "") << coeffs[j];
  os << ")";
  return os.str();
}

bool root_less(const Root& a, const Root& b) {
  return std::lexicographical_compare(a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(), b.coeffs.end());
}

namespace {

void check_admissible(Family family, int rank) {
  int min_rank = 1;
  switch (family) {
    case Family::A: min_rank = 1; break;
    case Family::B: min_rank = 2; break;
    case Family::C: min_rank = 3; break;
    case Family::D: min_rank = 4; break;
  }
  if (rank < min_rank) {
    std::ostringstream os;
    os << "inadmissible rank " << rank << " for type " << family_letter(family)
       << " (requires rank >= " << min_rank << ")";
    throw std::invalid_argument(os.str());
  }
}

std::vector<int> unit_weight(int len, int i, int sign_i, int j = -1, int sign_j = 0) {
  std::vector<int> w(len, 0);
  w[i] += sign_i;
  if (j >= 0) w[j] += sign_j;
  return w;
}

// Solve sum_j c_j simple[j] = w exactly; the system is consistent by construction.
std::vector<int> simple_root_coefficients(const std::vector<std::vector<int>>& simple, const std::vector<int>& w) {
  const int r = static_cast<int>(simple.size());
  const int len = static_cast<int>(w.size());
  std::vector<std::vector<Rational>> m(len, std::vector<Rational>(r + 1));
  for (int row = 0; row < len; ++row) {
    for (int j = 0; j < r; ++j) m[row][j] = simple[j][row];
    m[row][r] = w[row];
  }
  int pivot_row = 0;
  std::vector<int> pivot_col_of_row;
  for (int col = 0; col < r && pivot_row < len; ++col) {
    int sel = -1;
    for (int row = pivot_row; row < len; ++row)
      if (m[row][col] != 0) {
        sel = row;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[sel], m[pivot_row]);
    const Rational p = m[pivot_row][col];
    for (auto& v : m[pivot_row]) v /= p;
    for (int row = 0; row < len; ++row) {
      if (row == pivot_row || m[row][col] == 0) continue;
      const Rational f = m[row][col];
      for (int j = 0; j <= r; ++j) m[row][j] -= f * m[pivot_row][j];
    }
    pivot_col_of_row.push_back(col);
    ++pivot_row;
  }
  if (pivot_row != r) throw std::logic_error("simple roots are not linearly independent");
  for (int row = r; row < len; ++row)
    if (m[row][r] != 0) throw std::logic_error("weight is not in the root lattice span");
  std::vector<int> c(r);
  for (int row = 0; row < r; ++row) {
    const Rational v = m[row][r];
    if (v.denominator() != 1) throw std::logic_error("non-integral simple-root coefficient");
    c[pivot_col_of_row[row]] = static_cast<int>(v.numerator());
  }
  return c;
}

struct PositiveRootSeed {
  std::vector<int> weight;
  RationalMatrix vec;
  int i = 0;
  int k = 0;
};

}  // namespace

LieAlgebra::LieAlgebra(Family family, int rank) : family_(family), rank_(rank) {
  check_admissible(family, rank);
  const int r = rank;
  std::vector<PositiveRootSeed> seeds;
  std::vector<std::vector<int>> simple;
  int len = r;

  if (family == Family::A) {
    matrix_dim_ = r + 1;
    len = r + 1;
    for (int i = 0; i < len; ++i) diag_pos_.push_back(i);
    for (int i = 0; i < len; ++i)
      for (int k = i + 1; k < len; ++k)
        seeds.push_back({unit_weight(len, i, 1, k, -1), RationalMatrix::unit(matrix_dim_, i, k), i + 1, k + 1});
    for (int i = 0; i < r; ++i) simple.push_back(unit_weight(len, i, 1, i + 1, -1));
    for (int i = 0; i < r; ++i)
      cartan_basis_.push_back(RationalMatrix::unit(matrix_dim_, i, i) - RationalMatrix::unit(matrix_dim_, i + 1, i + 1));
  } else {
    matrix_dim_ = family == Family::B ? 2 * r + 1 : 2 * r;
    const int nd = matrix_dim_;
    auto bar = [nd](int a) { return nd - 1 - a; };
    for (int i = 0; i < r; ++i) diag_pos_.push_back(i);
    // Generic element X = E_{ab} - s E_{bar b, bar a} of so(J) (s = 1) or sp(Omega).
    auto eps = [r](int a) { return a < r ? 1 : -1; };
    auto make = [&](int a, int b) {
      RationalMatrix x = RationalMatrix::unit(nd, a, b);
      const int sgn = family == Family::C ? eps(a) * eps(b) : 1;
      if (bar(b) == a && bar(a) == b && family == Family::C) return x;
      return x - RationalMatrix::unit(nd, bar(b), bar(a)) * Rational(sgn);
    };
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) {
        seeds.push_back({unit_weight(len, i, 1, j, -1), make(i, j)});
        seeds.push_back({unit_weight(len, i, 1, j, 1), make(i, bar(j))});
      }
    if (family == Family::B) {
      const int mid = r;
      for (int i = 0; i < r; ++i) seeds.push_back({unit_weight(len, i, 1), make(i, mid)});
    }
    if (family == Family::C) {
      for (int i = 0; i < r; ++i) seeds.push_back({unit_weight(len, i, 2), make(i, bar(i))});
    }
    for (int i = 0; i + 1 < r; ++i) simple.push_back(unit_weight(len, i, 1, i + 1, -1));
    switch (family) {
      case Family::B: simple.push_back(unit_weight(len, r - 1, 1)); break;
      case Family::C: simple.push_back(unit_weight(len, r - 1, 2)); break;
      case Family::D: simple.push_back(unit_weight(len, r - 2, 1, r - 1, 1)); break;
      default: break;
    }
    for (int i = 0; i < r; ++i)
      cartan_basis_.push_back(RationalMatrix::unit(nd, i, i) - RationalMatrix::unit(nd, bar(i), bar(i)));
  }

  std::vector<std::pair<Root, PositiveRootSeed>> positive;
  for (auto& s : seeds) {
    Root root;
    root.coeffs = simple_root_coefficients(simple, s.weight);
    root.i = s.i;
    root.k = s.k;
    if (!root.positive()) throw std::logic_error("constructed root vector is not positive");
    positive.emplace_back(std::move(root), std::move(s));
  }
  std::sort(positive.begin(), positive.end(), [](const auto& x, const auto& y) { return root_less(x.first, y.first); });

  for (const auto& [root, seed] : positive) {
    roots_.push_back(root);
    weights_.push_back(seed.weight);
    root_vectors_.push_back(seed.vec);
  }
  for (const auto& [root, seed] : positive) {
    Root neg = root;
    for (auto& c : neg.coeffs) c = -c;
    std::swap(neg.i, neg.k);
    std::vector<int> w = seed.weight;
    for (auto& c : w) c = -c;
    roots_.push_back(neg);
    weights_.push_back(w);
    root_vectors_.push_back(seed.vec.transpose());
  }
  for (std::size_t id = 0; id < roots_.size(); ++id) lookup_[roots_[id].coeffs] = id;
}

std::string LieAlgebra::name() const { return std::string(1, family_letter(family_)) + std::to_string(rank_); }

std::optional<std::size_t> LieAlgebra::index_of(const std::vector<int>& coeffs) const {
  auto it = lookup_.find(coeffs);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t LieAlgebra::index_of(const Root& root) const {
  auto id = index_of(root.coeffs);
  if (!id) throw std::invalid_argument("not a root of " + name() + ": " + root.label());
  return *id;
}

std::size_t LieAlgebra::negative_index(std::size_t id) const {
  const std::size_t p = num_positive();
  return id < p ? id + p : id - p;
}

Rational LieAlgebra::evaluate(std::size_t id, const RationalMatrix& h) const {
  Rational v = 0;
  const auto& w = weights_[id];
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0) v += Rational(w[i]) * h(diag_pos_[i], diag_pos_[i]);
  return v;
}

bool LieAlgebra::contains(const RationalMatrix& x) const {
  if (family_ == Family::A) return x.trace() == 0;
  const int nd = matrix_dim_;
  RationalMatrix form(nd);
  for (int a = 0; a < nd; ++a) {
    const int b = nd - 1 - a;
    form(a, b) = family_ == Family::C ? (a < rank_ ? 1 : -1) : 1;
  }
  return (x.transpose() * form + form * x).is_zero();
}

AlgebraPtr build_algebra(Family family, int rank) { return std::make_shared<const LieAlgebra>(family, rank); }

std::vector<Root> positive_roots(const LieAlgebra& alg) {
  return {alg.roots().begin(), alg.roots().begin() + static_cast<std::ptrdiff_t>(alg.num_positive())};
}

ChevalleyData::ChevalleyData(const LieAlgebra& alg) : count_(alg.roots().size()) {
  const auto& roots = alg.roots();
  n_table_.assign(count_ * count_, 0);
  h_gram_.assign(count_ * count_, Rational(0));
  z_.resize(count_);
  h_.resize(count_);

  for (std::size_t a = 0; a < count_; ++a) {
    const std::size_t na = alg.negative_index(a);
    z_[a] = trace_form(alg.root_vector(a), alg.root_vector(na));
    if (z_[a] == 0) throw std::logic_error("B(E_a, E_-a) vanishes for root " + roots[a].label());
    const RationalMatrix commutator = bracket(alg.root_vector(a), alg.root_vector(na));
    if (!commutator.is_diagonal()) throw std::logic_error("[E_a, E_-a] is not in the Cartan subalgebra for " + roots[a].label());
    h_[a] = commutator / z_[a];
    for (const auto& h : alg.cartan_basis())
      if (trace_form(h_[a], h) != alg.evaluate(a, h))
        throw std::logic_error("[E_a, E_-a]/z_a is not the B-dual of " + roots[a].label());
  }

  for (std::size_t a = 0; a < count_; ++a)
    for (std::size_t b = 0; b < count_; ++b) {
      h_gram_[a * count_ + b] = trace_form(h_[a], h_[b]);
      if (alg.negative_index(a) == b) continue;
      const RationalMatrix br = bracket(alg.root_vector(a), alg.root_vector(b));
      std::vector<int> sum(roots[a].coeffs.size());
      for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = roots[a].coeffs[j] + roots[b].coeffs[j];
      const auto c = alg.index_of(sum);
      if (!c) {
        if (!br.is_zero())
          throw std::logic_error("bracket of " + roots[a].label() + " and " + roots[b].label() +
                                 " is nonzero but their sum is not a root");
        continue;
      }
      const RationalMatrix& target = alg.root_vector(*c);
      Rational ratio = 0;
      bool found = false;
      for (int i = 0; i < target.dim() && !found; ++i)
        for (int j = 0; j < target.dim() && !found; ++j)
          if (target(i, j) != 0) {
            ratio = br(i, j) / target(i, j);
            found = true;
          }
      if (!(target * ratio == br) || ratio == 0 || ratio.denominator() != 1)
        throw std::logic_error("bracket of " + roots[a].label() + " and " + roots[b].label() +
                               " is not an integer multiple of the root vector of their sum");
      n_table_[a * count_ + b] = static_cast<int>(ratio.numerator());
    }
}

ChevalleyData chevalley(const LieAlgebra& alg) { return ChevalleyData(alg); }

}  // namespace cqblab
