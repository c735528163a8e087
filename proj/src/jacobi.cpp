#include "conefact/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "conefact/errors.hpp"

namespace conefact {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) sum += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(sum);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input, double rel_tol,
                            int max_sweeps) {
  const Eigen::Index n = input.rows();
  if (n != input.cols())
    throw std::invalid_argument("jacobi_eigen: matrix is not square");

  Eigen::MatrixXd a = input.triangularView<Eigen::Upper>();
  a.triangularView<Eigen::StrictlyLower>() = a.transpose().triangularView<Eigen::StrictlyLower>();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  const double scale = a.norm();
  if (!std::isfinite(scale))
    throw NumericalError("jacobi_eigen: non-finite matrix entries");
  const double target = rel_tol * scale;

  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (sweep++ >= max_sweeps)
      throw NumericalError("jacobi_eigen: no convergence after " +
                           std::to_string(max_sweeps) + " sweeps (n=" +
                           std::to_string(n) + ")");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rutishauser's formulation: t = sgn(theta) / (|theta| + sqrt(theta^2 + 1)).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SymmetricEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace conefact
