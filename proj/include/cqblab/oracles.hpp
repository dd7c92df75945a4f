#pragma once

// Independent reference computations used to cross-check the main solvers.

#include "cqblab/curvature.hpp"
#include "cqblab/positivity.hpp"

#include <cstdint>

namespace cqblab::oracles {

struct GridOracleResult {
  double min_value = 0;
  ComplexVector x;
  ComplexVector y;
};

// Exhaustive rank-one sampling: grid x grid seeded unit vector pairs, then
// the best few pairs polished with a Nelder-Mead simplex (GSL).
GridOracleResult rank1_grid_oracle(const CurvatureTensor& r, FormKind kind, int grid = 100, std::uint64_t seed = 7,
                                   int polish = 8);

// Closed-form P and Q of the Mostow-Siu model, so that
// cqb = -(P - Q) and dcqb = -(P + Q).
struct MostowSiuPq {
  double p = 0;
  double q = 0;
};
MostowSiuPq mostow_siu_pq(const MostowSiuParams& params, const LinearMap& a);

// Curvature of the invariant metric computed from scratch on the reductive
// homogeneous space K/K_L: Levi-Civita connection via the Nomizu map
//   Lambda(X)Y = [X,Y]_m / 2 + U(X,Y),
//   2<U(X,Y),Z> = <[Z,X]_m, Y> + <X, [Z,Y]_m>,
// R(X,Y) = [Lambda(X), Lambda(Y)] - Lambda([X,Y]_m) - ad([X,Y]_l),
// evaluated on the complexified root vectors and returned in the unitary frame.
CurvatureTensor homogeneous_curvature(const CSpace& space, const InvariantMetric& metric);

}  // namespace cqblab::oracles
