#pragma once

#include "cqblab/lie.hpp"

#include <string>
#include <vector>

namespace cqblab {

// Simple Kaehler C-space (g, Phi). The holomorphic tangent frame is indexed
// by delta_phi, the positive roots with a positive coefficient on some
// fundamental root in Phi, sorted by root_less.
struct CSpace {
  AlgebraPtr algebra;
  std::vector<int> phi;  // 1-based fundamental-root indices, ascending
  std::vector<Root> delta_phi;
  std::vector<std::size_t> root_ids;  // algebra index of each frame root
  int n = 0;
  int b2 = 0;

  std::string descriptor() const;
  // Frame position of a root, or -1 if it is not in delta_phi.
  int frame_index(const std::vector<int>& coeffs) const;
  bool in_delta_phi(const std::vector<int>& coeffs) const { return frame_index(coeffs) >= 0; }
};

CSpace build_cspace(AlgebraPtr alg, std::vector<int> phi);

struct InvariantMetric {
  std::vector<Rational> c;  // one coefficient per element of Phi
  std::vector<Rational> g;  // g_beta for each frame root, same order as delta_phi

  // Additive value n_{i_1}(beta) c_1 + ... for any root coefficient vector.
  Rational value(const CSpace& space, const std::vector<int>& coeffs) const;
};

InvariantMetric invariant_metric(const CSpace& space, std::vector<Rational> c);

// g_a = sum over beta in delta_phi of B(H_a, H_beta), unscaled.
InvariantMetric kahler_einstein_coefficients(const CSpace& space);

// If x = s * y for one rational s > 0 (componentwise), return s.
std::optional<Rational> proportionality_factor(const std::vector<Rational>& x, const std::vector<Rational>& y);

}  // namespace cqblab
