#pragma once

#include <Eigen/Dense>

namespace conefact {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values(k)
};

// Cyclic Jacobi eigensolver for small dense symmetric matrices.
//
// Rotations sweep the strict upper triangle row by row. Iteration stops once
// the off-diagonal Frobenius norm drops below `rel_tol * ||A||_F`. Only the
// upper triangle of `a` is read. Throws NumericalError if `max_sweeps` is
// exhausted first.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, double rel_tol = 1e-14,
                            int max_sweeps = 100);

// f(A) = V diag(f(lambda)) V^T for a symmetric A.
template <typename F>
Eigen::MatrixXd symmetric_function(const SymmetricEigen& eig, F&& f) {
  Eigen::VectorXd mapped(eig.values.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(eig.values(i));
  Eigen::MatrixXd out = eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace conefact
