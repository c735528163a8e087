#include "conefact/factor_map.hpp"

#include <cmath>
#include <string>

#include "conefact/errors.hpp"

namespace conefact {

namespace {

void require_factor_structure(std::span<const Element> factors, const Element& b,
                              const char* op) {
  for (const auto& f : factors) require_same_structure(f, b, op);
}

}  // namespace

void FactorSet::validate() const {
  for (const auto& f : a)
    if (!(f.structure() == structure)) throw StructureMismatch("FactorSet: row factor structure mismatch");
  for (const auto& f : b)
    if (!(f.structure() == structure)) throw StructureMismatch("FactorSet: column factor structure mismatch");
}

TargetMatrix::TargetMatrix(Eigen::MatrixXd x) : x_(std::move(x)) {
  if (!x_.allFinite()) throw std::invalid_argument("TargetMatrix: non-finite entry");
  if (x_.size() > 0 && x_.minCoeff() < 0.0)
    throw std::invalid_argument("TargetMatrix: negative entry");
}

Eigen::VectorXd apply_map(std::span<const Element> factors, const Element& b) {
  require_factor_structure(factors, b, "apply_map");
  Eigen::VectorXd out(static_cast<Eigen::Index>(factors.size()));
  for (std::size_t i = 0; i < factors.size(); ++i) out(static_cast<Eigen::Index>(i)) = inner(factors[i], b);
  return out;
}

Element adjoint_apply(std::span<const Element> factors, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != factors.size())
    throw StructureMismatch("adjoint_apply: got " + std::to_string(v.size()) +
                            " coefficients for " + std::to_string(factors.size()) + " factors");
  if (factors.empty()) throw StructureMismatch("adjoint_apply: no factors");
  const ConeStructure& s = factors.front().structure();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(s.dimension());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!(factors[i].structure() == s)) throw StructureMismatch("adjoint_apply: mixed factor structures");
    acc += v(static_cast<Eigen::Index>(i)) * factors[i].flatten();
  }
  return Element::unflatten(s, acc);
}

Element gram_apply(std::span<const Element> factors, const Element& b) {
  return adjoint_apply(factors, apply_map(factors, b));
}

OperatorMatrix gram_matrix(std::span<const Element> factors) {
  if (factors.empty()) throw StructureMismatch("gram_matrix: no factors");
  const ConeStructure& s = factors.front().structure();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s.dimension(), s.dimension());
  for (const auto& f : factors) {
    if (!(f.structure() == s)) throw StructureMismatch("gram_matrix: mixed factor structures");
    const Eigen::VectorXd v = f.flatten();
    g.selfadjointView<Eigen::Lower>().rankUpdate(v);
  }
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return OperatorMatrix{s, g};
}

Eigen::MatrixXd reconstruct(const FactorSet& factors) {
  const auto m = static_cast<Eigen::Index>(factors.a.size());
  const auto n = static_cast<Eigen::Index>(factors.b.size());
  Eigen::MatrixXd out(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = inner(factors.a[static_cast<std::size_t>(i)], factors.b[static_cast<std::size_t>(j)]);
  return out;
}

double objective(const FactorSet& factors, const TargetMatrix& x) {
  if (static_cast<Eigen::Index>(factors.a.size()) != x.rows() ||
      static_cast<Eigen::Index>(factors.b.size()) != x.cols())
    throw StructureMismatch("objective: factor counts " + std::to_string(factors.a.size()) + "x" +
                            std::to_string(factors.b.size()) + " do not match target " +
                            std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  return (x.values() - reconstruct(factors)).squaredNorm();
}

double residual_relative(const FactorSet& factors, const TargetMatrix& x) {
  const double loss = std::sqrt(objective(factors, x));
  const double scale = x.values().norm();
  return scale > 0.0 ? loss / scale : loss;
}

}  // namespace conefact
