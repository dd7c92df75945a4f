#include "cqblab/cspace.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cqblab {

std::string CSpace::descriptor() const {
  std::ostringstream os;
  os << "(" << algebra->name() << ", {";
  for (std::size_t j = 0; j < phi.size(); ++j) os << (j ? "," : "") << phi[j];
  os << "})";
  return os.str();
}

int CSpace::frame_index(const std::vector<int>& coeffs) const {
  auto it = std::lower_bound(delta_phi.begin(), delta_phi.end(), coeffs,
                             [](const Root& r, const std::vector<int>& c) {
                               return std::lexicographical_compare(r.coeffs.begin(), r.coeffs.end(), c.begin(), c.end());
                             });
  if (it == delta_phi.end() || it->coeffs != coeffs) return -1;
  return static_cast<int>(it - delta_phi.begin());
}

CSpace build_cspace(AlgebraPtr alg, std::vector<int> phi) {
  if (!alg) throw std::invalid_argument("build_cspace: null algebra");
  if (phi.empty()) throw std::invalid_argument("build_cspace: Phi must be nonempty");
  std::sort(phi.begin(), phi.end());
  if (std::adjacent_find(phi.begin(), phi.end()) != phi.end())
    throw std::invalid_argument("build_cspace: Phi has repeated indices");
  for (int i : phi)
    if (i < 1 || i > alg->rank())
      throw std::invalid_argument("build_cspace: Phi index " + std::to_string(i) + " outside 1.." +
                                  std::to_string(alg->rank()));

  CSpace space;
  space.algebra = alg;
  space.phi = phi;
  const auto& roots = alg->roots();
  for (std::size_t id = 0; id < alg->num_positive(); ++id) {
    const bool hit = std::any_of(phi.begin(), phi.end(), [&](int i) { return roots[id].coeffs[i - 1] > 0; });
    if (hit) {
      space.delta_phi.push_back(roots[id]);
      space.root_ids.push_back(id);
    }
  }
  space.n = static_cast<int>(space.delta_phi.size());
  space.b2 = static_cast<int>(phi.size());
  return space;
}

Rational InvariantMetric::value(const CSpace& space, const std::vector<int>& coeffs) const {
  Rational v = 0;
  for (std::size_t j = 0; j < space.phi.size(); ++j) v += Rational(coeffs[space.phi[j] - 1]) * c[j];
  return v;
}

InvariantMetric invariant_metric(const CSpace& space, std::vector<Rational> c) {
  if (static_cast<int>(c.size()) != space.b2)
    throw std::invalid_argument("invariant_metric: expected " + std::to_string(space.b2) + " coefficients, got " +
                                std::to_string(c.size()));
  for (const auto& v : c)
    if (v <= 0) throw std::invalid_argument("invariant_metric: coefficients must be positive, got " + to_string(v));
  InvariantMetric metric;
  metric.c = std::move(c);
  for (const auto& beta : space.delta_phi) metric.g.push_back(metric.value(space, beta.coeffs));
  return metric;
}

InvariantMetric kahler_einstein_coefficients(const CSpace& space) {
  const ChevalleyData cd = chevalley(*space.algebra);
  std::vector<Rational> g;
  for (std::size_t a : space.root_ids) {
    Rational s = 0;
    for (std::size_t b : space.root_ids) s += cd.h_gram(a, b);
    g.push_back(s);
  }
  // The c-vector is read off at the fundamental roots in Phi, all of which lie in delta_phi.
  std::vector<Rational> c;
  for (int i : space.phi) {
    std::vector<int> coeffs(space.algebra->rank(), 0);
    coeffs[i - 1] = 1;
    c.push_back(g[static_cast<std::size_t>(space.frame_index(coeffs))]);
  }
  InvariantMetric metric = invariant_metric(space, c);
  if (metric.g != g) throw std::logic_error("Kaehler-Einstein coefficients of " + space.descriptor() + " are not additive");
  return metric;
}

std::optional<Rational> proportionality_factor(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  if (x.size() != y.size() || x.empty() || y[0] == 0) return std::nullopt;
  const Rational s = x[0] / y[0];
  if (s <= 0) return std::nullopt;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != s * y[i]) return std::nullopt;
  return s;
}

}  // namespace cqblab
