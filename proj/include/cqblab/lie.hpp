#pragma once

// Matrix-realized classical simple Lie algebras A_r, B_r, C_r, D_r.
//
// Every algebra is realized in its defining representation and the invariant
// bilinear form is the trace form B(X, Y) = tr(XY). For B, C and D this is a
// fixed positive multiple of the Killing form, so it rescales invariant
// metrics and curvature by a global constant and leaves every sign verdict
// unchanged.
//
// Root vectors are real matrices with E_{-a} = E_a^T. With the compact
// conjugation tau(X) = -X^H this gives tau(E_a) = -E_{-a}. The constants
// z_a = B(E_a, E_{-a}), N_{a,b} and B(H_a, H_b) are obtained from explicit
// brackets and traces; nothing is taken from closed-form tables.

#include "cqblab/rational_matrix.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cqblab {

enum class Family { A, B, C, D };

char family_letter(Family f);
Family parse_family(const std::string& s);

struct Root {
  // Coefficients over the fundamental roots alpha_1..alpha_r.
  std::vector<int> coeffs;
  // Type A only: 1-based (i, k) with root e_i - e_k; i < k for positive roots.
  int i = 0;
  int k = 0;

  bool positive() const;
  int height() const;
  std::string label() const;
  bool operator==(const Root& other) const { return coeffs == other.coeffs; }
};

// The order relation used for the frame: lexicographic on coefficient
// vectors, i.e. the first index where two roots differ decides.
bool root_less(const Root& a, const Root& b);

class LieAlgebra {
 public:
  LieAlgebra(Family family, int rank);

  Family family() const { return family_; }
  int rank() const { return rank_; }
  int matrix_dim() const { return matrix_dim_; }
  std::string name() const;

  // Positive roots in ascending order followed by their negatives in the same order.
  const std::vector<Root>& roots() const { return roots_; }
  std::size_t num_positive() const { return roots_.size() / 2; }
  const std::vector<RationalMatrix>& cartan_basis() const { return cartan_basis_; }

  std::optional<std::size_t> index_of(const std::vector<int>& coeffs) const;
  std::size_t index_of(const Root& root) const;
  std::size_t negative_index(std::size_t id) const;

  const RationalMatrix& root_vector(std::size_t id) const { return root_vectors_[id]; }
  const RationalMatrix& root_vector(const Root& root) const { return root_vectors_[index_of(root)]; }

  // Weight of a root in the standard e-coordinates of the diagonal Cartan.
  const std::vector<int>& weight(std::size_t id) const { return weights_[id]; }
  // Value of the root on a diagonal Cartan element.
  Rational evaluate(std::size_t id, const RationalMatrix& h) const;
  // Membership test for the realized algebra (trace zero / preserves the form).
  bool contains(const RationalMatrix& x) const;

 private:
  Family family_;
  int rank_;
  int matrix_dim_;
  std::vector<Root> roots_;
  std::vector<std::vector<int>> weights_;
  std::vector<RationalMatrix> root_vectors_;
  std::vector<RationalMatrix> cartan_basis_;
  std::map<std::vector<int>, std::size_t> lookup_;
  // Position in the matrix of each e-coordinate (diagonal entry +e_i), its
  // mirror carries -e_i.
  std::vector<int> diag_pos_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

AlgebraPtr build_algebra(Family family, int rank);

std::vector<Root> positive_roots(const LieAlgebra& alg);

class ChevalleyData {
 public:
  explicit ChevalleyData(const LieAlgebra& alg);

  // N_{a,b} with [E_a, E_b] = N_{a,b} E_{a+b}; zero when a+b is not a root.
  int n(std::size_t a, std::size_t b) const { return n_table_[a * count_ + b]; }
  const Rational& z(std::size_t a) const { return z_[a]; }
  // B(H_a, H_b) with H_a the B-dual of a.
  const Rational& h_gram(std::size_t a, std::size_t b) const { return h_gram_[a * count_ + b]; }
  const RationalMatrix& coroot(std::size_t a) const { return h_[a]; }
  std::size_t size() const { return count_; }

 private:
  std::size_t count_ = 0;
  std::vector<int> n_table_;
  std::vector<Rational> z_;
  std::vector<Rational> h_gram_;
  std::vector<RationalMatrix> h_;
};

ChevalleyData chevalley(const LieAlgebra& alg);

}  // namespace cqblab
