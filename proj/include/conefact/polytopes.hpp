#pragma once

// Slack matrices of regular polygons and related fixtures.

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "conefact/factor_map.hpp"

namespace conefact {

struct SlackInstance {
  int n_vertices = 0;
  TargetMatrix matrix{Eigen::MatrixXd()};  // facets x vertices
  std::vector<double> vertex_angles;
  std::vector<double> facet_normal_angles;
  double inradius = 0.0;
};

// Regular n-gon with circumradius 1: vertex j at angle 2*pi*j/n, facet i
// spanning vertices i and i+1 with outward normal at (2i+1)*pi/n.
// S_ij = cos(pi/n) - cos(2*pi*j/n - (2i+1)*pi/n); entries below 1e-14 become 0.
SlackInstance regular_ngon_slack(int n);

// Row i of regular_ngon_slack(4) equals row kFourgonRowOrder[i] of the
// printed 4-gon slack matrix; columns coincide.
inline constexpr std::array<int, 4> kFourgonRowOrder{1, 2, 3, 0};

// Exact soc_1 x soc_1 factorization of regular_ngon_slack(4).matrix. The
// printed left factors are halved so that the trace inner product, which
// doubles the raw Soc dot product, reproduces the slack entries.
FactorSet fourgon_fixture();

// Pairs coordinates (2l, 2l+1) of nonnegative vectors and maps each pair
// (p, q) to the soc_1 element ((p+q)/2, (p-q)/2) on both sides; the trace
// inner product of the images equals p p' + q q'.
FactorSet nmf_to_soc1_product(const std::vector<Eigen::VectorXd>& a_vectors,
                              const std::vector<Eigen::VectorXd>& b_vectors);

struct TowerCheck {
  bool member = false;
  double y1 = 0.0;  // ||(x1, x2)||
  double y2 = 0.0;  // ||(x3, x4)||
  std::string violated;  // empty when member
};

// (x, t) in soc_4 via the three soc_2 constraints
// (x1, x2, y1), (x3, x4, y2), (y1, y2, t).
TowerCheck tower_soc4_check(const std::array<double, 4>& x, double t);

}  // namespace conefact
