#include <doctest.h>

#include "conefact/errors.hpp"
#include "conefact/polytopes.hpp"
#include "support.hpp"

using namespace conefact;
using testsupport::rel_diff;

TEST_CASE("apply_map examples") {
  const ConeStructure soc2({BlockKind::soc(2)});
  const std::vector<Element> e{identity(soc2)};
  CHECK(apply_map(e, identity(soc2))(0) == doctest::Approx(2.0));

  const ConeStructure o2({BlockKind::orthant(2)});
  const std::vector<Element> a{Element(o2, {OrthantValue{Eigen::Vector2d(1, 2)}})};
  CHECK(apply_map(a, Element(o2, {OrthantValue{Eigen::Vector2d(3, 4)}}))(0) == doctest::Approx(11.0));

  const ConeStructure s2({BlockKind::sym(2)});
  const std::vector<Element> i{identity(s2)};
  const Eigen::MatrixXd d = Eigen::Vector2d(5, 7).asDiagonal();
  CHECK(apply_map(i, Element(s2, {SymValue{d}}))(0) == doctest::Approx(12.0));
}

TEST_CASE("adjoint_apply basics") {
  std::mt19937_64 rng(3);
  const ConeStructure s({BlockKind::soc(3), BlockKind::sym(2)});
  std::vector<Element> f;
  for (int i = 0; i < 4; ++i) f.push_back(testsupport::random_element(s, rng));
  CHECK(adjoint_apply(f, Eigen::VectorXd::Zero(4)).norm() == 0.0);
  for (int i = 0; i < 4; ++i)
    CHECK(rel_diff(adjoint_apply(f, Eigen::VectorXd::Unit(4, i)), f[static_cast<std::size_t>(i)]) < 1e-15);
  CHECK_THROWS_AS(adjoint_apply(f, Eigen::VectorXd::Zero(3)), StructureMismatch);
}

TEST_CASE("adjointness and gram consistency on random instances") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> count(1, 6), kind(0, 3);
  for (int n = 0; n < 200; ++n) {
    const int k = kind(rng);
    const ConeStructure s = k < 3 ? testsupport::random_single(testsupport::all_types()[k], rng)
                                  : testsupport::random_mixed(rng);
    const int m = count(rng);
    std::vector<Element> f;
    for (int i = 0; i < m; ++i) f.push_back(testsupport::random_element(s, rng));
    const Element b = testsupport::random_element(s, rng);
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v(i) = normal(rng);

    const double lhs = apply_map(f, b).dot(v), rhs = inner(b, adjoint_apply(f, v));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));

    const OperatorMatrix g = gram_matrix(f);
    CHECK((g.matrix * b.flatten() - gram_apply(f, b).flatten()).norm() <= 1e-12 * std::max(1.0, g.matrix.norm() * b.norm()));
    Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(s.dimension(), s.dimension());
    for (const auto& a : f) outer += a.flatten() * a.flatten().transpose();
    CHECK((g.matrix - outer).norm() <= 1e-12 * std::max(1.0, outer.norm()));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.matrix);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * std::max(1.0, g.matrix.norm()));
    const double cutoff = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    CHECK((es.eigenvalues().array() > cutoff).count() <= m);
  }
}

TEST_CASE("gram_apply of interior inputs is interior") {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 100; ++n) {
    const ConeStructure s = testsupport::random_mixed(rng);
    std::vector<Element> f;
    for (int i = 0; i < 3; ++i) f.push_back(testsupport::random_interior(s, rng));
    CHECK(in_interior(gram_apply(f, testsupport::random_interior(s, rng)), 0.0));
    CHECK(gram_apply(f, Element::zero(s)).norm() == 0.0);
  }
  const ConeStructure s({BlockKind::soc(2)});
  const Element a = testsupport::random_interior(s, rng), b = testsupport::random_interior(s, rng);
  const std::vector<Element> one{a};
  CHECK(rel_diff(gram_apply(one, b), inner(a, b) * a) < 1e-15);
}

TEST_CASE("objective and relative residual") {
  const ConeStructure s({BlockKind::orthant(2)});
  const Element a = Element(s, {OrthantValue{Eigen::Vector2d(1, 2)}});
  const Element b = Element(s, {OrthantValue{Eigen::Vector2d(3, 1)}});
  FactorSet f{s, {a, b}, {b}};
  Eigen::MatrixXd x(2, 1);
  x << 5, 10;
  CHECK(objective(f, TargetMatrix(x)) == doctest::Approx(0.0));
  CHECK(residual_relative(f, TargetMatrix(x)) == doctest::Approx(0.0));

  FactorSet zero{s, {Element::zero(s), Element::zero(s)}, {Element::zero(s)}};
  CHECK(objective(zero, TargetMatrix(x)) == doctest::Approx(125.0));
  CHECK(residual_relative(zero, TargetMatrix(x)) == doctest::Approx(1.0));

  // X = 0 falls back to the absolute residual
  CHECK(residual_relative(f, TargetMatrix(Eigen::MatrixXd::Zero(2, 1))) == doctest::Approx(std::sqrt(125.0)));

  CHECK_THROWS_AS(objective(f, TargetMatrix(Eigen::MatrixXd::Zero(3, 1))), StructureMismatch);
  CHECK(residual_relative(fourgon_fixture(), regular_ngon_slack(4).matrix) < 1e-12);
}

TEST_CASE("target matrix rejects negative or non-finite entries") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(2, 2);
  x(0, 1) = -1e-3;
  CHECK_THROWS(TargetMatrix(x));
  x(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS(TargetMatrix(x));
}
