#include "conefact/polytopes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conefact/errors.hpp"

namespace conefact {

SlackInstance regular_ngon_slack(int n) {
  if (n < 3) throw std::invalid_argument("regular_ngon_slack: need n >= 3, got " + std::to_string(n));
  const double pi = std::numbers::pi;
  SlackInstance inst;
  inst.n_vertices = n;
  inst.inradius = std::cos(pi / n);
  Eigen::MatrixXd s(n, n);
  for (int j = 0; j < n; ++j) inst.vertex_angles.push_back(2.0 * pi * j / n);
  for (int i = 0; i < n; ++i) inst.facet_normal_angles.push_back((2.0 * i + 1.0) * pi / n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // Depends only on (j - i) mod n, so the matrix is exactly circulant.
      const int shift = ((j - i) % n + n) % n;
      const double v = inst.inradius - std::cos((2.0 * shift - 1.0) * pi / n);
      s(i, j) = v < 1e-14 ? 0.0 : v;
    }
  }
  inst.matrix = TargetMatrix(std::move(s));
  return inst;
}

FactorSet fourgon_fixture() {
  const ConeStructure structure({BlockKind::soc(1), BlockKind::soc(1)});
  // Printed factors; soc_1 elements are stored as (t, x).
  const double left[4][4] = {{3, -3, 0, 0}, {3, 3, 0, 0}, {0, 0, 2, 2}, {0, 0, 2, -2}};
  const double right[4][4] = {{0, 2, 4, 2}, {0, -2, 0, 2}, {6, 3, 0, 3}, {0, -3, 0, 3}};
  const double left_scale = std::numbers::sqrt2 / 12.0 / 2.0;

  auto soc1 = [](double t, double x) { return SocValue{t, Eigen::VectorXd::Constant(1, x)}; };

  FactorSet f{structure, {}, {}};
  for (int r : kFourgonRowOrder) {
    const auto& row = left[r];
    f.a.emplace_back(structure, std::vector<BlockValue>{soc1(left_scale * row[0], left_scale * row[1]),
                                                         soc1(left_scale * row[2], left_scale * row[3])});
  }
  for (int c = 0; c < 4; ++c) {
    f.b.emplace_back(structure, std::vector<BlockValue>{soc1(right[0][c], right[1][c]),
                                                         soc1(right[2][c], right[3][c])});
  }
  return f;
}

FactorSet nmf_to_soc1_product(const std::vector<Eigen::VectorXd>& a_vectors,
                              const std::vector<Eigen::VectorXd>& b_vectors) {
  if (a_vectors.empty() && b_vectors.empty())
    throw std::invalid_argument("nmf_to_soc1_product: no vectors");
  const Eigen::Index d = a_vectors.empty() ? b_vectors.front().size() : a_vectors.front().size();
  if (d == 0 || d % 2 != 0)
    throw std::invalid_argument("nmf_to_soc1_product: dimension must be even and positive, got " +
                                std::to_string(d));
  const ConeStructure structure(std::vector<BlockKind>(static_cast<std::size_t>(d / 2), BlockKind::soc(1)));

  auto convert = [&](const Eigen::VectorXd& v) {
    if (v.size() != d) throw StructureMismatch("nmf_to_soc1_product: inconsistent vector dimensions");
    if (v.minCoeff() < 0.0) throw std::invalid_argument("nmf_to_soc1_product: negative entry");
    std::vector<BlockValue> blocks;
    for (Eigen::Index l = 0; l < d / 2; ++l) {
      const double p = v(2 * l);
      const double q = v(2 * l + 1);
      blocks.push_back(SocValue{0.5 * (p + q), Eigen::VectorXd::Constant(1, 0.5 * (p - q))});
    }
    return Element(structure, std::move(blocks));
  };

  FactorSet f{structure, {}, {}};
  for (const auto& v : a_vectors) f.a.push_back(convert(v));
  for (const auto& v : b_vectors) f.b.push_back(convert(v));
  return f;
}

TowerCheck tower_soc4_check(const std::array<double, 4>& x, double t) {
  TowerCheck out;
  out.y1 = std::hypot(x[0], x[1]);
  out.y2 = std::hypot(x[2], x[3]);
  // The first two constraints hold with equality for this witness, so only
  // the outer one can fail.
  if (std::hypot(out.y1, out.y2) <= t) {
    out.member = true;
  } else {
    out.violated = "(y1, y2, t) in soc_2";
  }
  return out;
}

}  // namespace conefact
