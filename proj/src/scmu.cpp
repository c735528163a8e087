#include "conefact/scmu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "conefact/errors.hpp"
#include "conefact/jacobi.hpp"

namespace conefact {

namespace {

// A^T A b coincides with A^T x, so w maps A^T x back onto b.
bool is_stationary(const Element& gram_image, const Element& rhs) {
  const double scale = std::max(gram_image.norm(), rhs.norm());
  return (gram_image - rhs).norm() <= kStationaryRelTol * scale;
}

// Larger of ||after - before|| / (1 + ||before||) and the change in the local
// metric at `before`, ||P(before^{-1/2}) after - e||. The second is what a
// multiplicative update holds fixed; a coordinate decaying toward the boundary
// keeps it large however small the absolute movement. Infinite when `before`
// is (numerically) not interior.
double relative_change(const Element& before, const Element& after) {
  const double additive = (after - before).norm() / (1.0 + before.norm());
  const SpectralDecomposition d = spectral(before);
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& block : d.blocks)
    for (double l : block.eigenvalues) lo = std::min(lo, l);
  // Below this the inverse square root would overflow; such a factor is on
  // the boundary for every practical purpose.
  if (!(lo > 1e-100 * std::max(1.0, before.norm()))) return std::numeric_limits<double>::infinity();
  const Element local = quad_apply(power(d, -0.5), after) - identity(before.structure());
  return std::max(additive, local.norm());
}

void require_in_cone(const Element& current, const char* op) {
  const double lo = min_eigenvalue(current);
  if (!(lo >= -kBoundarySlack * std::max(1.0, current.norm())))
    throw DomainError(std::string(op) + ": current factor outside the cone (eigenvalue " +
                      std::to_string(lo) + ")");
}

// Eigenvalues floored at `floor`, then mapped through f.
template <typename F>
Element floored_map(const SpectralDecomposition& d, double floor, F&& f) {
  std::vector<BlockValue> blocks;
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    BlockSpectrum s = d.blocks[b];
    for (double& l : s.eigenvalues) l = f(std::max(l, floor));
    SpectralDecomposition single{ConeStructure({d.structure.block(b)}), {s}};
    blocks.push_back(single.reconstruct().block(0));
  }
  return Element(d.structure, std::move(blocks));
}

// c^{-1} # b = P(c^{-1/2}) (P(c^{1/2}) b)^{1/2}, with the eigenvalues of c
// raised to at least `floor` (c must be interior when floor is 0).
// Only c is inverted, so b may sit on the cone boundary.
Element scaling_point(const Element& c, double floor, const Element& b) {
  const SpectralDecomposition dc = spectral(c);
  const Element c_half = floored_map(dc, floor, [](double l) { return std::sqrt(l); });
  const Element c_inv_half = floored_map(dc, floor, [](double l) { return 1.0 / std::sqrt(l); });
  const SpectralDecomposition inner_d = spectral(quad_apply(c_half, b));
  return quad_apply(c_inv_half, floored_map(inner_d, 0.0, [](double l) { return std::sqrt(l); }));
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  return symmetric_function(jacobi_eigen(m, tol::kJacobiRelative),
                            [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

double min_symmetric_eigenvalue(const Eigen::MatrixXd& m) {
  return jacobi_eigen(0.5 * (m + m.transpose()), tol::kJacobiRelative).values(0);
}

Eigen::VectorXd row_vector(const Eigen::MatrixXd& x, Eigen::Index i) { return x.row(i).transpose(); }

}  // namespace

void SolverConfig::validate() const {
  if (min_sweeps < 1) throw std::invalid_argument("SolverConfig: min_sweeps must be >= 1");
  if (max_sweeps < min_sweeps) throw std::invalid_argument("SolverConfig: max_sweeps < min_sweeps");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be >= 0");
}

bool is_zero_target(const Eigen::VectorXd& target) {
  return target.size() == 0 || target.cwiseAbs().maxCoeff() == 0.0;
}

Element scmu_step(std::span<const Element> fixed, const Element& current,
                  const Eigen::VectorXd& target) {
  if (is_zero_target(target)) return Element::zero(current.structure());
  const Element rhs = adjoint_apply(fixed, target);
  const Element c = gram_apply(fixed, current);
  if (is_stationary(c, rhs)) return current;
  if (!(min_eigenvalue(c) > 0.0))
    throw DomainError("scmu_step: Gram image has non-positive eigenvalue " +
                      std::to_string(min_eigenvalue(c)));
  require_in_cone(current, "scmu_step");
  // w = c^{-1} # current = current # c^{-1}. Only c is inverted, so the step
  // stays accurate when `current` has drifted onto the boundary by roundoff.
  return quad_apply(scaling_point(c, 0.0, current), rhs);
}

Element scmu_step_damped(std::span<const Element> fixed, const Element& current,
                         const Eigen::VectorXd& target, double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("scmu_step_damped: epsilon must be >= 0");
  if (epsilon == 0.0) return scmu_step(fixed, current, target);
  if (is_zero_target(target)) return Element::zero(current.structure());
  const Element rhs = adjoint_apply(fixed, target);
  const Element c = gram_apply(fixed, current);
  if (is_stationary(c, rhs)) return current;
  require_in_cone(current, "scmu_step_damped");
  const Element shifted = c + epsilon * identity(current.structure());
  return quad_apply(scaling_point(shifted, epsilon, current), rhs);
}

FactorSet sweep(const FactorSet& factors, const TargetMatrix& x, const SolverConfig& config) {
  factors.validate();
  if (static_cast<Eigen::Index>(factors.a.size()) != x.rows() ||
      static_cast<Eigen::Index>(factors.b.size()) != x.cols())
    throw StructureMismatch("sweep: factor counts do not match target shape");

  auto step = [&](std::span<const Element> fixed, const Element& current,
                  const Eigen::VectorXd& target) {
    return scmu_step_damped(fixed, current, target, config.epsilon);
  };

  FactorSet next = factors;
  for (std::size_t i = 0; i < factors.a.size(); ++i) {
    const Eigen::VectorXd target = row_vector(x.values(), static_cast<Eigen::Index>(i));
    if (is_zero_target(target)) continue;
    try {
      next.a[i] = step(factors.b, factors.a[i], target);
    } catch (const DomainError& e) {
      throw DomainError("sweep: row factor " + std::to_string(i) + ": " + e.what());
    }
  }
  for (std::size_t j = 0; j < factors.b.size(); ++j) {
    const Eigen::VectorXd target = x.values().col(static_cast<Eigen::Index>(j));
    if (is_zero_target(target)) continue;
    try {
      next.b[j] = step(next.a, factors.b[j], target);
    } catch (const DomainError& e) {
      throw DomainError("sweep: column factor " + std::to_string(j) + ": " + e.what());
    }
  }
  return next;
}

double kkt_residual(const FactorSet& factors, const TargetMatrix& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < factors.b.size(); ++j) {
    const Eigen::VectorXd col = x.values().col(static_cast<Eigen::Index>(j));
    if (is_zero_target(col)) continue;
    worst = std::max(worst, (adjoint_apply(factors.a, col) - gram_apply(factors.a, factors.b[j])).norm());
  }
  for (std::size_t i = 0; i < factors.a.size(); ++i) {
    const Eigen::VectorXd row = row_vector(x.values(), static_cast<Eigen::Index>(i));
    if (is_zero_target(row)) continue;
    worst = std::max(worst, (adjoint_apply(factors.b, row) - gram_apply(factors.b, factors.a[i])).norm());
  }
  return worst / (1.0 + x.values().norm());
}

RunResult run(const TargetMatrix& x, const FactorSet& init, const SolverConfig& config) {
  config.validate();
  init.validate();
  const auto started = std::chrono::steady_clock::now();

  RunResult result{init, {}};
  RunReport& report = result.report;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (is_zero_target(row_vector(x.values(), i))) report.zero_rows.push_back(static_cast<int>(i));
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    if (is_zero_target(x.values().col(j))) report.zero_cols.push_back(static_cast<int>(j));

  double prev = objective(init, x);
  report.initial_objective = prev;
  report.stop_reason = "max_sweeps";

  for (int s = 1; s <= config.max_sweeps; ++s) {
    FactorSet next = [&] {
      try {
        return sweep(result.factors, x, config);
      } catch (const DomainError& e) {
        throw DomainError("run: sweep " + std::to_string(s) + ": " + e.what());
      }
    }();
    const double obj = objective(next, x);

    double change = 0.0;
    for (std::size_t i = 0; i < next.a.size(); ++i)
      change = std::max(change, relative_change(result.factors.a[i], next.a[i]));
    for (std::size_t j = 0; j < next.b.size(); ++j)
      change = std::max(change, relative_change(result.factors.b[j], next.b[j]));

    if (config.record_trace) report.objective_trace.push_back(obj);
    if (obj > prev + 1e-9 * (1.0 + prev)) ++report.monotone_violations;
    report.sweeps_run = s;
    report.last_iterate_change = change;
    result.factors = std::move(next);

    if (s >= config.min_sweeps) {
      const double rel = prev > 0.0 ? (prev - obj) / prev : 0.0;
      if (rel < config.stop_rel_decrease) {
        report.stop_reason = "relative_decrease";
        prev = obj;
        break;
      }
      if (change < config.stop_iterate_change) {
        report.stop_reason = "iterate_change";
        prev = obj;
        break;
      }
    }
    prev = obj;
  }

  report.final_objective = prev;
  report.final_residual_relative = residual_relative(result.factors, x);
  report.kkt_residual = kkt_residual(result.factors, x);
  report.wall_time = std::chrono::steady_clock::now() - started;
  return result;
}

double check_domination(std::span<const Element> factors, const Element& b) {
  const Element w = geometric_mean(power(b, -1.0), gram_apply(factors, b));
  return min_symmetric_eigenvalue(quad_matrix(w).matrix - gram_matrix(factors).matrix);
}

double check_sqrt_superadditivity(const Element& a1, const Element& a2) {
  const Eigen::MatrixXd lhs = psd_sqrt(quad_matrix(a1 + a2).matrix);
  const Eigen::MatrixXd rhs = psd_sqrt(quad_matrix(a1).matrix) + psd_sqrt(quad_matrix(a2).matrix);
  return min_symmetric_eigenvalue(lhs - rhs);
}

double check_trace_inequality(const Element& a, const Element& b) {
  const double ab = inner(a, b);
  return trace(a) * inner(b, quad_apply(power(a, 0.5), b)) - ab * ab;
}

}  // namespace conefact
