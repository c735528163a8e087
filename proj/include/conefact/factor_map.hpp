#pragma once

// Linear maps induced by a family of cone factors a_1..a_m:
//   A b   = (<a_1,b>, ..., <a_m,b>)
//   A^T v = sum_i v_i a_i
// and the squared-loss objective of a cone factorization X_ij ~ <a_i, b_j>.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "conefact/eja.hpp"

namespace conefact {

struct FactorSet {
  ConeStructure structure;
  std::vector<Element> a;  // one per row of the target
  std::vector<Element> b;  // one per column of the target

  // Throws StructureMismatch if any factor has a different structure.
  void validate() const;
};

// Entrywise nonnegative, finite m x n matrix.
class TargetMatrix {
 public:
  explicit TargetMatrix(Eigen::MatrixXd x);

  const Eigen::MatrixXd& values() const noexcept { return x_; }
  Eigen::Index rows() const noexcept { return x_.rows(); }
  Eigen::Index cols() const noexcept { return x_.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return x_(i, j); }

 private:
  Eigen::MatrixXd x_;
};

Eigen::VectorXd apply_map(std::span<const Element> factors, const Element& b);
Element adjoint_apply(std::span<const Element> factors, const Eigen::VectorXd& v);
Element gram_apply(std::span<const Element> factors, const Element& b);
OperatorMatrix gram_matrix(std::span<const Element> factors);

// Model matrix Xhat_ij = <a_i, b_j>.
Eigen::MatrixXd reconstruct(const FactorSet& factors);
// sum_ij (X_ij - <a_i, b_j>)^2
double objective(const FactorSet& factors, const TargetMatrix& x);
// sqrt(objective) / ||X||_F, or sqrt(objective) when X = 0.
double residual_relative(const FactorSet& factors, const TargetMatrix& x);

}  // namespace conefact
