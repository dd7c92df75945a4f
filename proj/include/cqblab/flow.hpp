#pragma once

// Pointwise reaction ODE of the Kaehler-Ricci flow curvature evolution
// (diffusion dropped) and the time-dependent convex sets C(t):
//   (c31)  Ric >= 0
//   (c32)  |Ric(X,Y-bar) - R(X,Y-bar,Z,Z-bar)|^2 <= (D1 + t E1) Ric(X,X-bar) Ric(Y,Y-bar),  |Z| = 1
//   (c33)  ||R|| <= D2 + t E2

#include "cqblab/curvature.hpp"
#include "cqblab/positivity.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cqblab {

struct FlowConstants {
  double d1 = 0;
  double e1 = 0;
  double d2 = 0;
  double e2 = 1;
  double epsilon = 0;

  void validate(int n) const;
  // D1 = (n-1)^2, D2 = 2 ||R0||, E2 = 1, E1 = 100 n D1^2 D2, epsilon = 1/E1.
  static FlowConstants defaults(const CurvatureTensor& r0);
};

struct Membership {
  bool c31 = false;
  bool c32 = false;
  bool c33 = false;
  double margin31 = 0;  // min Ricci eigenvalue
  double margin32 = 0;  // -sup of the c32 defect; >= -tolerance means c32 holds
  double margin33 = 0;  // D2 + t E2 - ||R||
  Method method32 = Method::Alternating;
  bool all() const { return c31 && c32 && c33; }
};

struct FlowState {
  double t = 0;
  CurvatureTensor r;
  Membership membership;
  double norm = 0;
  double min_ricci_eigenvalue = 0;
};

struct MembershipOptions {
  double tolerance = kDefaultTolerance;
  int starts = 16;
  int max_iterations = 200;
  std::uint64_t seed = 0;
};

// dR/dt = R_{ab pq} R_{cd qp} + R_{ad pq} R_{cb qp} - R_{ap cq} R_{pb qd}
CurvatureTensor reaction_derivative(const CurvatureTensor& r);
// d Ric/dt = R_{ab pq} Ric_{qp}
HermitianTensor2 ricci_reaction(const CurvatureTensor& r);

Membership membership(double t, const CurvatureTensor& r, const FlowConstants& k, const MembershipOptions& opt = {});

struct Trajectory {
  std::vector<FlowState> states;
  bool truncated = false;
  std::string notice;
  // Largest trace-identity residue seen over all RK4 stages.
  double max_trace_residue = 0;
};

struct IntegrateOptions {
  bool track_membership = true;
  bool check_trace_identity = true;
  MembershipOptions membership;
};

// Classical RK4 with fixed step dt, one state per step.
Trajectory integrate(const CurvatureTensor& r0, const FlowConstants& k, double t_max, double dt,
                     const IntegrateOptions& opt = {});

// Default step 1e-3 / (1 + ||R0||).
double default_step(const CurvatureTensor& r0);

struct ConvexityResult {
  bool precondition_ok = false;
  bool holds = false;
  std::string message;
};

ConvexityResult convexity_check(const CurvatureTensor& r, const CurvatureTensor& s, const std::vector<double>& eta_grid,
                                double t, const FlowConstants& k, const MembershipOptions& opt = {});

// Random tensor with CQB_1 >= 0 (so it lies in C(0) with D1 = (n-1)^2):
// a seeded random Kaehler operator added to a constant holomorphic
// curvature tensor, with the shift grown until rank1_check passes.
CurvatureTensor random_tensor_in_c0(int n, std::uint64_t seed);

void write_csv(std::ostream& os, const Trajectory& tr);

}  // namespace cqblab
