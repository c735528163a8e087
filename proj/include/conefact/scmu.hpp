#pragma once

// Symmetric-cone multiplicative updates for cone factorizations.
//
// With the opposite family frozen, each factor moves by
//   b <- P(w) A^T x,   w = b # (A^T A b)^{-1},
// which is the minimizer of a quadratic majorizer of 1/2 ||A b - x||^2 and
// keeps b in the interior of the cone whenever x has a positive entry.

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "conefact/eja.hpp"
#include "conefact/factor_map.hpp"

namespace conefact {

struct SolverConfig {
  int max_sweeps = 1000;
  int min_sweeps = 1;
  double epsilon = 0.0;  // damping; 0 gives the plain update
  // Stop (after min_sweeps) once (f_prev - f) / f_prev drops below this.
  double stop_rel_decrease = 1e-10;
  // Stop (after min_sweeps) once the largest relative factor change in a
  // sweep drops below this.
  double stop_iterate_change = 1e-12;
  bool record_trace = true;

  void validate() const;
};

struct RunReport {
  std::vector<double> objective_trace;  // objective after each sweep
  double initial_objective = 0.0;
  double final_objective = 0.0;
  double final_residual_relative = 0.0;
  int sweeps_run = 0;
  int monotone_violations = 0;
  // max over factors, in the last sweep, of ||new - old|| / (1 + ||old||) and
  // ||P(old^{-1/2}) new - e||; infinite if a factor left the interior
  double last_iterate_change = 0.0;
  double kkt_residual = 0.0;
  std::vector<int> zero_rows;  // frozen factors, excluded from kkt accounting
  std::vector<int> zero_cols;
  std::string stop_reason;
  std::chrono::duration<double> wall_time{0.0};
};

// Relative tolerance under which A^T A b and A^T x are considered equal, in
// which case the update is the identity map on b.
inline constexpr double kStationaryRelTol = 1e-13;

// One multiplicative update of `current` against frozen factors. Returns the
// zero element when `target` is identically zero; callers freeze such
// factors instead (see is_zero_target).
Element scmu_step(std::span<const Element> fixed, const Element& current,
                  const Eigen::VectorXd& target);

// Roundoff allowance (relative to ||current||) for damped iterates that have
// converged onto the cone boundary.
inline constexpr double kBoundarySlack = 1e-10;

// Damped update: the Gram image c is shifted by epsilon*e and its eigenvalues
// floored at epsilon; w = c^{-1} # current is then formed inverting only c, so
// `current` may lie on the boundary of the cone. Equals scmu_step when
// epsilon = 0.
Element scmu_step_damped(std::span<const Element> fixed, const Element& current,
                         const Eigen::VectorXd& target, double epsilon);

bool is_zero_target(const Eigen::VectorXd& target);

// Updates every a_i against the current b's, then every b_j against the new a's.
FactorSet sweep(const FactorSet& factors, const TargetMatrix& x, const SolverConfig& config);

struct RunResult {
  FactorSet factors;
  RunReport report;
};

RunResult run(const TargetMatrix& x, const FactorSet& init, const SolverConfig& config);

// max over non-frozen rows/columns of ||A^T x - A^T A b|| / (1 + ||X||_F),
// both families included.
double kkt_residual(const FactorSet& factors, const TargetMatrix& x);

// Minimum eigenvalue of P(b^{-1} # A^T A b) - A^T A. Nonnegative in exact
// arithmetic for interior factors and interior b.
double check_domination(std::span<const Element> factors, const Element& b);

// Minimum eigenvalue of P(a1+a2)^{1/2} - P(a1)^{1/2} - P(a2)^{1/2}.
double check_sqrt_superadditivity(const Element& a1, const Element& a2);

// tr(a) <b, P(a^{1/2}) b> - <a, b>^2.
double check_trace_inequality(const Element& a, const Element& b);

}  // namespace conefact
