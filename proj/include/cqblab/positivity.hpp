#pragma once

// CQB / dual CQB as Hermitian forms on linear maps, the Q operator on the
// symmetric square, and rank-restricted minimization.
//
// A linear map is stored as an n x n complex matrix A with A(a, c) the
// coefficient of E_c in A(E_a-bar) (CQB) or of E_c-bar in A(E_a) (dual CQB).
//
//   CQB(A)  = sum Ric_{c d-bar} A_ac conj(A_ad) - sum R_{a b-bar c d-bar} A_ac conj(A_bd)
//   dCQB(A) = sum Ric_{c d-bar} conj(A_ac) A_ad + sum R_{a b-bar c d-bar} conj(A_ac) A_bd

#include "cqblab/curvature.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cqblab {

using LinearMap = Eigen::MatrixXcd;

enum class FormKind { Cqb, Dcqb };
std::string to_string(FormKind k);
FormKind parse_form_kind(const std::string& s);

enum class Verdict { Positive, NonnegativeWithKernel, Indefinite, Negative, NonpositiveWithKernel };
std::string to_string(Verdict v);

enum class Method { Eigen, Alternating, BruteForce };
std::string to_string(Method m);

inline constexpr double kDefaultTolerance = 1e-8;

struct QuadraticFormMatrix {
  int dim = 0;
  // (a, c) pairs for the n^2 forms, (a, c) with a <= c for the Q operator.
  std::vector<std::pair<int, int>> basis_labels;
  Eigen::MatrixXcd entries;

  // Ascending eigenvalues and matching eigenvectors.
  Eigen::VectorXd eigenvalues() const;
  Eigen::MatrixXcd eigenvectors() const;
  double min_eigenvalue() const { return eigenvalues()(0); }
  double max_eigenvalue() const { return eigenvalues()(dim - 1); }
  double scale() const;  // max |entry|, used to normalize verdict thresholds
};

double cqb_value(const CurvatureTensor& r, const LinearMap& a);
double dcqb_value(const CurvatureTensor& r, const LinearMap& a);
double form_value(const CurvatureTensor& r, const LinearMap& a, FormKind kind);

// Entry ((a,c),(b,d)) = delta_ab Ric_{c d-bar} -/+ R_{a b-bar c d-bar}. For
// CQB the value of A is w^H M w with w = conj(vec A); for dual CQB w = vec A.
// Both constructions self-check against the direct evaluation on random maps.
QuadraticFormMatrix cqb_form(const CurvatureTensor& r);
QuadraticFormMatrix dcqb_form(const CurvatureTensor& r);
QuadraticFormMatrix form_matrix(const CurvatureTensor& r, FormKind kind);
// Flattening that matches the form matrices: index a*n + c.
Eigen::VectorXcd flatten(const LinearMap& a);
LinearMap unflatten(const Eigen::VectorXcd& v, int n);

// Q on the orthonormal basis {e_a.e_a} u {sqrt(2) e_a.e_b : a < b}.
QuadraticFormMatrix q_operator(const CurvatureTensor& r);

struct KeCriteria {
  bool cqb_positive = false;
  bool dcqb_positive = false;
  bool cqb_borderline = false;
  bool dcqb_borderline = false;
};
KeCriteria ke_criteria(double mu, double lambda1, double lambda_n, double tolerance = kDefaultTolerance);

// Constant Ricci value if Ric = mu Id within tolerance.
std::optional<double> einstein_constant(const CurvatureTensor& r, double tolerance = 1e-9);

Verdict classify(double min_value, double max_value, double tolerance);

struct PositivityReport {
  std::string what;
  FormKind mode = FormKind::Cqb;
  int rank_limit = 0;
  Verdict verdict = Verdict::Indefinite;
  double min_value = 0;
  double max_value = 0;
  double normalization = 1;  // verdict thresholds apply to value / normalization
  LinearMap witness;
  std::optional<ComplexVector> witness_x;
  std::optional<ComplexVector> witness_y;
  double tolerance = kDefaultTolerance;
  Method method = Method::Eigen;
  bool converged = true;
  std::optional<double> mu;
  std::optional<double> lambda1;
  std::optional<double> lambda_n;
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const PositivityReport& report);

struct MinimizerOptions {
  int starts = 64;
  int max_iterations = 500;
  double relative_change = 1e-12;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
};

// Full-form eigen check (rank_limit = n).
PositivityReport form_check(const CurvatureTensor& r, FormKind kind, double tolerance = kDefaultTolerance);

// F(X, Y) = Ric(Y, Y-bar) -/+ R(X, X-bar, Y, Y-bar) over unit X, Y by
// alternating lowest-eigenvector steps from deterministic multistarts.
PositivityReport rank1_check(const CurvatureTensor& r, FormKind kind, const MinimizerOptions& options = {});

// Minimum over rank <= k maps of unit Frobenius norm. k = n uses the form
// eigenvalues; smaller k alternates between the two factor blocks of
// A = sum_i x_i y_i^T, warm-started from the rank k-1 witness.
PositivityReport rank_k_check(const CurvatureTensor& r, int k, FormKind kind, const MinimizerOptions& options = {});

// |CQB^M(A) - CQB^1(A') - CQB^2(A'') - Ricci cross terms| for M = M1 x M2.
double product_decomposition_check(const CurvatureTensor& r1, const CurvatureTensor& r2, const LinearMap& a);

// Value of the rank-one map x y^T; equals F(x, y) above for unit x.
LinearMap outer(const ComplexVector& x, const ComplexVector& y);

// Deterministic Halton points mapped to unit vectors in C^n.
std::vector<ComplexVector> halton_unit_vectors(int n, int count, std::uint64_t seed);

}  // namespace cqblab
