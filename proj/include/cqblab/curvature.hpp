#pragma once

// Curvature tensors R_{a b-bar c d-bar} of Kaehler metrics in a unitary frame.

#include "cqblab/cspace.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cqblab {

using Complex = std::complex<double>;
using Index4 = std::array<int, 4>;
using HermitianTensor2 = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Representative of the Kaehler symmetry orbit of (a,b,c,d): the
// lexicographically smallest tuple among the eight images under a<->c,
// b<->d and (a,b,c,d) -> (b,a,d,c). `conjugate` says whether the stored
// value must be conjugated to read the original component; `self_conjugate`
// orbits carry real values.
struct OrbitKey {
  Index4 key;
  bool conjugate = false;
  bool self_conjugate = false;
};
OrbitKey canonical_orbit(const Index4& idx);

class CurvatureTensor {
 public:
  static constexpr int kDenseLimit = 16;

  CurvatureTensor() = default;
  explicit CurvatureTensor(int n);

  int n() const { return n_; }
  bool dense_storage() const { return n_ <= kDenseLimit; }

  Complex operator()(int a, int b, int c, int d) const;
  // Stores the orbit value so that component (a,b,c,d) reads back as v.
  // Self-conjugate orbits require real v (imaginary part above 1e-12*|v| throws).
  void set(int a, int b, int c, int d, Complex v);

  // Nonzero canonical components, sorted lexicographically (0-based indices).
  std::vector<std::pair<Index4, Complex>> canonical_components() const;

  // All n^4 components, index ((a*n + b)*n + c)*n + d.
  std::vector<Complex> expand() const;
  // Builds a tensor from a full component array by reading canonical slots;
  // the input is expected to carry the Kaehler symmetries.
  static CurvatureTensor from_expanded(int n, std::span<const Complex> full);

  CurvatureTensor& operator+=(const CurvatureTensor& other);
  CurvatureTensor operator+(const CurvatureTensor& other) const;
  CurvatureTensor operator*(double s) const;

  // Frobenius norm over all n^4 components.
  double norm() const;
  double max_abs() const;

  std::vector<std::string> frame_labels;
  // Root coefficient vectors of the frame when assembled from a C-space.
  std::vector<std::vector<int>> frame_roots;

 private:
  std::size_t slot(const Index4& k) const;

  int n_ = 0;
  std::vector<Complex> dense_;
  std::map<Index4, Complex> sparse_;
};

// Largest violation of the Kaehler and Hermitian symmetries over a full array.
double symmetry_defect(int n, std::span<const Complex> full);

enum class AssemblyPath { Auto, General, TypeA };

CurvatureTensor assemble(const CSpace& space, const InvariantMetric& metric, AssemblyPath path = AssemblyPath::Auto);

HermitianTensor2 ricci(const CurvatureTensor& r);
double scalar(const CurvatureTensor& r);
// R(X, X-bar, X, X-bar) / |X|^4
double holomorphic_sectional(const CurvatureTensor& r, const ComplexVector& x);
// R(X, X-bar, Y, Y-bar) for arbitrary vectors
Complex bisectional(const CurvatureTensor& r, const ComplexVector& x, const ComplexVector& y);
// Ric(X, X-bar) - H(X) and Ric(X, X-bar) + H(X), X normalized internally.
double ric_perp(const CurvatureTensor& r, const ComplexVector& x);
double ric_plus(const CurvatureTensor& r, const ComplexVector& x);

CurvatureTensor product(const CurvatureTensor& r1, const CurvatureTensor& r2);

struct MostowSiuParams {
  int n = 2;
  double b = 0;
  double c = 0;
  double e = 0;
  bool in_negative_regime() const;
};

CurvatureTensor mostow_siu_model(const MostowSiuParams& params);

CurvatureTensor random_kahler_operator(int n, std::uint64_t seed, double scale = 1.0);

// Constant holomorphic sectional curvature 2: R = delta_ab delta_cd + delta_ad delta_cb.
CurvatureTensor constant_holomorphic_curvature(int n);

nlohmann::json to_json(const CurvatureTensor& r);
CurvatureTensor tensor_from_json(const nlohmann::json& j);

}  // namespace cqblab
