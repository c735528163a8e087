#pragma once

// Shared generators and comparisons for the unit and acceptance tests.

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <vector>

#include "conefact/eja.hpp"
#include "conefact/factor_map.hpp"

namespace testsupport {

using conefact::BlockKind;
using conefact::ConeStructure;
using conefact::Element;

inline ConeStructure single(BlockKind k) { return ConeStructure({k}); }

// One random block of the given type, size in [1, max_size].
inline BlockKind random_block(BlockKind::Type type, int max_size, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(1, max_size);
  switch (type) {
    case BlockKind::Type::Orthant: return BlockKind::orthant(size(rng));
    case BlockKind::Type::Soc: return BlockKind::soc(size(rng));
    case BlockKind::Type::Sym: return BlockKind::sym(size(rng));
  }
  return BlockKind::orthant(1);
}

// Orthant k<=6, Soc k<=6, Sym n<=5 limits.
inline int max_size(BlockKind::Type type) { return type == BlockKind::Type::Sym ? 5 : 6; }

inline ConeStructure random_single(BlockKind::Type type, std::mt19937_64& rng) {
  return single(random_block(type, max_size(type), rng));
}

// Two or three blocks of mixed kinds, small sizes.
inline ConeStructure random_mixed(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 3), kind(0, 2);
  std::vector<BlockKind> blocks;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const auto type = static_cast<BlockKind::Type>(kind(rng));
    blocks.push_back(random_block(type, 3, rng));
  }
  return ConeStructure(blocks);
}

// Arbitrary (not necessarily cone) element with standard normal coordinates.
inline Element random_element(const ConeStructure& s, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(s.dimension());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  return Element::unflatten(s, v);
}

inline Element random_interior(const ConeStructure& s, std::mt19937_64& rng) {
  return conefact::random_interior(s, 1.0, rng);
}

inline double rel_diff(const Element& a, const Element& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

inline const std::vector<BlockKind::Type>& all_types() {
  static const std::vector<BlockKind::Type> t{BlockKind::Type::Orthant, BlockKind::Type::Soc,
                                              BlockKind::Type::Sym};
  return t;
}

// Dense-matrix oracles (Eigen's self-adjoint solver, independent of jacobi.cpp).
inline Eigen::MatrixXd spd_power(const Eigen::MatrixXd& m, double a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd d = es.eigenvalues().array().max(0.0).pow(a);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

inline Eigen::MatrixXd spd_geometric_mean(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd xh = spd_power(x, 0.5), xmh = spd_power(x, -0.5);
  return xh * spd_power(xmh * y * xmh, 0.5) * xh;
}

inline Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  return g * g.transpose() / n + 0.1 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace testsupport
