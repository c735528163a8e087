#include "conefact/eja.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "conefact/errors.hpp"
#include "conefact/jacobi.hpp"

namespace conefact {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;


// Exactly symmetric in (x, y) and in the output indices.
Eigen::MatrixXd sym_jordan(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) s += x(i, k) * y(k, j) + y(i, k) * x(k, j);
      z(i, j) = 0.5 * s;
      z(j, i) = z(i, j);
    }
  }
  return z;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

BlockValue zero_block(const BlockKind& kind) {
  switch (kind.type()) {
    case BlockKind::Type::Orthant:
      return OrthantValue{Eigen::VectorXd::Zero(kind.size())};
    case BlockKind::Type::Soc:
      return SocValue{0.0, Eigen::VectorXd::Zero(kind.size())};
    case BlockKind::Type::Sym:
      return SymValue{Eigen::MatrixXd::Zero(kind.size(), kind.size())};
  }
  throw std::logic_error("unreachable");
}

template <typename F>
std::vector<BlockValue> zip_blocks(const Element& x, const Element& y, F&& f) {
  std::vector<BlockValue> out;
  out.reserve(x.num_blocks());
  for (std::size_t b = 0; b < x.num_blocks(); ++b) out.push_back(f(x.block(b), y.block(b)));
  return out;
}

// Linear combination alpha * x + beta * y, blockwise.
BlockValue combine(const BlockValue& x, double alpha, const BlockValue& y, double beta) {
  return std::visit(
      [&](const auto& xv) -> BlockValue {
        using T = std::decay_t<decltype(xv)>;
        const T& yv = std::get<T>(y);
        if constexpr (std::is_same_v<T, OrthantValue>) {
          return OrthantValue{alpha * xv.v + beta * yv.v};
        } else if constexpr (std::is_same_v<T, SocValue>) {
          return SocValue{alpha * xv.t + beta * yv.t, alpha * xv.x + beta * yv.x};
        } else {
          return SymValue{alpha * xv.m + beta * yv.m};
        }
      },
      x);
}

BlockValue block_jordan(const BlockValue& x, const BlockValue& y) {
  return std::visit(
      [&](const auto& xv) -> BlockValue {
        using T = std::decay_t<decltype(xv)>;
        const T& yv = std::get<T>(y);
        if constexpr (std::is_same_v<T, OrthantValue>) {
          return OrthantValue{xv.v.cwiseProduct(yv.v)};
        } else if constexpr (std::is_same_v<T, SocValue>) {
          return SocValue{xv.t * yv.t + xv.x.dot(yv.x), xv.t * yv.x + yv.t * xv.x};
        } else {
          return SymValue{sym_jordan(xv.m, yv.m)};
        }
      },
      x);
}

double block_trace(const BlockValue& x) {
  return std::visit(
      [](const auto& xv) -> double {
        using T = std::decay_t<decltype(xv)>;
        if constexpr (std::is_same_v<T, OrthantValue>) {
          return xv.v.sum();
        } else if constexpr (std::is_same_v<T, SocValue>) {
          return 2.0 * xv.t;
        } else {
          return xv.m.trace();
        }
      },
      x);
}

BlockSpectrum block_spectrum(const BlockValue& x) {
  return std::visit(
      [](const auto& xv) -> BlockSpectrum {
        using T = std::decay_t<decltype(xv)>;
        BlockSpectrum s;
        if constexpr (std::is_same_v<T, OrthantValue>) {
          const Eigen::Index k = xv.v.size();
          for (Eigen::Index i = 0; i < k; ++i) {
            s.eigenvalues.push_back(xv.v(i));
            Eigen::VectorXd unit = Eigen::VectorXd::Zero(k);
            unit(i) = 1.0;
            s.frame.push_back(OrthantValue{std::move(unit)});
          }
        } else if constexpr (std::is_same_v<T, SocValue>) {
          const double nx = xv.x.norm();
          Eigen::VectorXd dir;
          if (nx < tol::kSocDegenerate * std::max(1.0, std::abs(xv.t))) {
            dir = Eigen::VectorXd::Zero(xv.x.size());
            dir(0) = 1.0;
          } else {
            dir = xv.x / nx;
          }
          s.eigenvalues = {xv.t - nx, xv.t + nx};
          s.frame.push_back(SocValue{0.5, -0.5 * dir});
          s.frame.push_back(SocValue{0.5, 0.5 * dir});
        } else {
          const SymmetricEigen eig = jacobi_eigen(xv.m, tol::kJacobiRelative);
          for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
            s.eigenvalues.push_back(eig.values(i));
            const Eigen::VectorXd u = eig.vectors.col(i);
            s.frame.push_back(SymValue{u * u.transpose()});
          }
        }
        return s;
      },
      x);
}

// Sum of f(lambda_i) c_i over one block.
template <typename F>
BlockValue block_spectral_map(const BlockSpectrum& s, const BlockKind& kind, F&& f) {
  BlockValue acc = zero_block(kind);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    acc = combine(acc, 1.0, s.frame[i], f(s.eigenvalues[i]));
  return acc;
}

bool is_integer(double a) { return std::floor(a) == a; }

// Applies lambda^a after validating the domain; `block` is used for the message.
double checked_power(double lambda, double a, std::size_t block) {
  if (a == 0.0) return 1.0;
  if (a == 1.0) return lambda;
  auto fail = [&](const char* why) {
    std::ostringstream msg;
    msg << "power(" << a << "): eigenvalue " << lambda << " in block " << block << " " << why;
    throw DomainError(msg.str());
  };
  if (a > 0.0) {
    if (is_integer(a)) return std::pow(lambda, a);
    if (lambda < 0.0) {
      if (lambda > -tol::kRoundoffNegative) return 0.0;
      fail("is negative");
    }
    return std::pow(lambda, a);
  }
  if (is_integer(a)) {
    if (lambda == 0.0) fail("is zero");
    return std::pow(lambda, a);
  }
  if (lambda <= 0.0) fail("is not positive");
  return std::pow(lambda, a);
}

}  // namespace

// ---------------------------------------------------------------------------
// BlockKind / ConeStructure

BlockKind::BlockKind(Type type, int size) : type_(type), size_(size) {
  if (size < 1) throw std::invalid_argument("BlockKind: size must be >= 1");
}

BlockKind BlockKind::orthant(int k) { return BlockKind(Type::Orthant, k); }
BlockKind BlockKind::soc(int k) { return BlockKind(Type::Soc, k); }
BlockKind BlockKind::sym(int n) { return BlockKind(Type::Sym, n); }

int BlockKind::dimension() const noexcept {
  switch (type_) {
    case Type::Orthant:
      return size_;
    case Type::Soc:
      return size_ + 1;
    case Type::Sym:
      return size_ * (size_ + 1) / 2;
  }
  return 0;
}

int BlockKind::rank() const noexcept {
  switch (type_) {
    case Type::Orthant:
      return size_;
    case Type::Soc:
      return 2;
    case Type::Sym:
      return size_;
  }
  return 0;
}

std::string to_string(const BlockKind& kind) {
  switch (kind.type()) {
    case BlockKind::Type::Orthant:
      return "orthant:" + std::to_string(kind.size());
    case BlockKind::Type::Soc:
      return "soc:" + std::to_string(kind.size());
    case BlockKind::Type::Sym:
      return "psd:" + std::to_string(kind.size());
  }
  return "?";
}

ConeStructure::ConeStructure(std::vector<BlockKind> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("ConeStructure: no blocks");
  offsets_.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    offsets_.push_back(dimension_);
    dimension_ += b.dimension();
    rank_ += b.rank();
  }
}

// ---------------------------------------------------------------------------
// Element

Element::Element(Unchecked, ConeStructure structure, std::vector<BlockValue> blocks)
    : structure_(std::move(structure)), blocks_(std::move(blocks)) {}

Element::Element(ConeStructure structure, std::vector<BlockValue> blocks)
    : structure_(std::move(structure)), blocks_(std::move(blocks)) {
  if (blocks_.size() != structure_.num_blocks())
    throw StructureMismatch("Element: block count does not match structure");
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const BlockKind& kind = structure_.block(b);
    const Eigen::Index n = kind.size();
    auto bad = [&](const char* why) {
      throw StructureMismatch("Element: block " + std::to_string(b) + " (" + to_string(kind) +
                              ") " + why);
    };
    switch (kind.type()) {
      case BlockKind::Type::Orthant: {
        auto* v = std::get_if<OrthantValue>(&blocks_[b]);
        if (!v || v->v.size() != n) bad("has the wrong shape");
        if (!v->v.allFinite()) bad("has non-finite entries");
        break;
      }
      case BlockKind::Type::Soc: {
        auto* v = std::get_if<SocValue>(&blocks_[b]);
        if (!v || v->x.size() != n) bad("has the wrong shape");
        if (!std::isfinite(v->t) || !v->x.allFinite()) bad("has non-finite entries");
        break;
      }
      case BlockKind::Type::Sym: {
        auto* v = std::get_if<SymValue>(&blocks_[b]);
        if (!v || v->m.rows() != n || v->m.cols() != n) bad("has the wrong shape");
        if (!v->m.allFinite()) bad("has non-finite entries");
        const double asym = (v->m - v->m.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-10 * (1.0 + v->m.cwiseAbs().maxCoeff())) bad("is not symmetric");
        v->m = symmetrized(v->m);
        break;
      }
    }
  }
}

Element Element::zero(const ConeStructure& structure) {
  std::vector<BlockValue> blocks;
  for (const auto& kind : structure.blocks()) blocks.push_back(zero_block(kind));
  return Element(Unchecked{}, structure, std::move(blocks));
}

Element Element::unflatten(const ConeStructure& structure, const Eigen::VectorXd& coords) {
  if (coords.size() != structure.dimension())
    throw StructureMismatch("unflatten: expected " + std::to_string(structure.dimension()) +
                            " coordinates, got " + std::to_string(coords.size()));
  std::vector<BlockValue> blocks;
  for (std::size_t b = 0; b < structure.num_blocks(); ++b) {
    const BlockKind& kind = structure.block(b);
    const int off = structure.offset(b);
    const int n = kind.size();
    switch (kind.type()) {
      case BlockKind::Type::Orthant:
        blocks.push_back(OrthantValue{coords.segment(off, n)});
        break;
      case BlockKind::Type::Soc:
        blocks.push_back(SocValue{coords(off) / kSqrt2, coords.segment(off + 1, n) / kSqrt2});
        break;
      case BlockKind::Type::Sym: {
        Eigen::MatrixXd m(n, n);
        int idx = off;
        for (int i = 0; i < n; ++i) {
          m(i, i) = coords(idx++);
          for (int j = i + 1; j < n; ++j) {
            m(i, j) = coords(idx++) / kSqrt2;
            m(j, i) = m(i, j);
          }
        }
        blocks.push_back(SymValue{std::move(m)});
        break;
      }
    }
  }
  return Element(structure, std::move(blocks));
}

Eigen::VectorXd Element::flatten() const {
  Eigen::VectorXd out(structure_.dimension());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const int off = structure_.offset(b);
    std::visit(
        [&](const auto& xv) {
          using T = std::decay_t<decltype(xv)>;
          if constexpr (std::is_same_v<T, OrthantValue>) {
            out.segment(off, xv.v.size()) = xv.v;
          } else if constexpr (std::is_same_v<T, SocValue>) {
            out(off) = kSqrt2 * xv.t;
            out.segment(off + 1, xv.x.size()) = kSqrt2 * xv.x;
          } else {
            const Eigen::Index n = xv.m.rows();
            int idx = off;
            for (Eigen::Index i = 0; i < n; ++i) {
              out(idx++) = xv.m(i, i);
              for (Eigen::Index j = i + 1; j < n; ++j) out(idx++) = kSqrt2 * xv.m(i, j);
            }
          }
        },
        blocks_[b]);
  }
  return out;
}

double Element::norm() const { return std::sqrt(std::max(0.0, inner(*this, *this))); }

Element Element::operator+(const Element& other) const {
  require_same_structure(*this, other, "operator+");
  return Element(Unchecked{}, structure_, zip_blocks(*this, other, [](const auto& a, const auto& b) {
                   return combine(a, 1.0, b, 1.0);
                 }));
}

Element Element::operator-(const Element& other) const {
  require_same_structure(*this, other, "operator-");
  return Element(Unchecked{}, structure_, zip_blocks(*this, other, [](const auto& a, const auto& b) {
                   return combine(a, 1.0, b, -1.0);
                 }));
}

Element Element::operator*(double s) const {
  std::vector<BlockValue> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(combine(b, s, b, 0.0));
  return Element(Unchecked{}, structure_, std::move(out));
}

void require_same_structure(const Element& x, const Element& y, const char* op) {
  if (!(x.structure() == y.structure()))
    throw StructureMismatch(std::string(op) + ": operands have different cone structures");
}

// ---------------------------------------------------------------------------
// Algebra

Element identity(const ConeStructure& structure) {
  std::vector<BlockValue> blocks;
  for (const auto& kind : structure.blocks()) {
    const int n = kind.size();
    switch (kind.type()) {
      case BlockKind::Type::Orthant:
        blocks.push_back(OrthantValue{Eigen::VectorXd::Ones(n)});
        break;
      case BlockKind::Type::Soc:
        blocks.push_back(SocValue{1.0, Eigen::VectorXd::Zero(n)});
        break;
      case BlockKind::Type::Sym:
        blocks.push_back(SymValue{Eigen::MatrixXd::Identity(n, n)});
        break;
    }
  }
  return Element(structure, std::move(blocks));
}

Element jordan_product(const Element& x, const Element& y) {
  require_same_structure(x, y, "jordan_product");
  return Element(x.structure(), zip_blocks(x, y, block_jordan));
}

double trace(const Element& x) {
  double sum = 0.0;
  for (const auto& b : x.blocks()) sum += block_trace(b);
  return sum;
}

double inner(const Element& x, const Element& y) {
  require_same_structure(x, y, "inner");
  double sum = 0.0;
  for (std::size_t b = 0; b < x.num_blocks(); ++b) {
    sum += std::visit(
        [&](const auto& xv) -> double {
          using T = std::decay_t<decltype(xv)>;
          const T& yv = std::get<T>(y.block(b));
          if constexpr (std::is_same_v<T, OrthantValue>) {
            return xv.v.dot(yv.v);
          } else if constexpr (std::is_same_v<T, SocValue>) {
            return 2.0 * (xv.t * yv.t + xv.x.dot(yv.x));
          } else {
            return xv.m.cwiseProduct(yv.m).sum();
          }
        },
        x.block(b));
  }
  return sum;
}

SpectralDecomposition spectral(const Element& x) {
  SpectralDecomposition d{x.structure(), {}};
  d.blocks.reserve(x.num_blocks());
  for (const auto& b : x.blocks()) d.blocks.push_back(block_spectrum(b));
  return d;
}

Element SpectralDecomposition::reconstruct() const {
  std::vector<BlockValue> out;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    out.push_back(block_spectral_map(blocks[b], structure.block(b), [](double l) { return l; }));
  return Element(structure, std::move(out));
}

Element SpectralDecomposition::frame_element(std::size_t b, std::size_t i) const {
  std::vector<BlockValue> out;
  for (std::size_t k = 0; k < structure.num_blocks(); ++k)
    out.push_back(k == b ? blocks[b].frame.at(i) : zero_block(structure.block(k)));
  return Element(structure, std::move(out));
}

Element power(const SpectralDecomposition& d, double a) {
  std::vector<BlockValue> out;
  out.reserve(d.blocks.size());
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    out.push_back(block_spectral_map(d.blocks[b], d.structure.block(b),
                                     [&](double l) { return checked_power(l, a, b); }));
  }
  return Element(d.structure, std::move(out));
}

Element power(const Element& x, double a) {
  if (a == 1.0) return x;
  if (a == 0.0) return identity(x.structure());
  return power(spectral(x), a);
}

Element quad_apply(const Element& x, const Element& y) {
  require_same_structure(x, y, "quad_apply");
  return Element(x.structure(), zip_blocks(x, y, [](const BlockValue& xb, const BlockValue& yb) -> BlockValue {
                   if (auto* xm = std::get_if<SymValue>(&xb)) {
                     const Eigen::MatrixXd& m = xm->m;
                     return SymValue{symmetrized(m * std::get<SymValue>(yb).m * m)};
                   }
                   if (auto* xo = std::get_if<OrthantValue>(&xb)) {
                     return OrthantValue{xo->v.cwiseProduct(xo->v).cwiseProduct(std::get<OrthantValue>(yb).v)};
                   }
                   // 2 x o (x o y) - (x o x) o y
                   const BlockValue xy = block_jordan(xb, yb);
                   const BlockValue xx = block_jordan(xb, xb);
                   return combine(block_jordan(xb, xy), 2.0, block_jordan(xx, yb), -1.0);
                 }));
}

OperatorMatrix lyapunov_matrix(const Element& x) {
  const ConeStructure& s = x.structure();
  const int d = s.dimension();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t b = 0; b < s.num_blocks(); ++b) {
    const int off = s.offset(b);
    const int bd = s.block(b).dimension();
    for (int j = 0; j < bd; ++j) {
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(d);
      unit(off + j) = 1.0;
      const Eigen::VectorXd col = jordan_product(x, Element::unflatten(s, unit)).flatten();
      m.block(off, off + j, bd, 1) = col.segment(off, bd);
    }
  }
  return OperatorMatrix{s, symmetrized(m)};
}

OperatorMatrix quad_matrix(const Element& x) {
  const Eigen::MatrixXd l = lyapunov_matrix(x).matrix;
  const Eigen::MatrixXd l2 = lyapunov_matrix(jordan_product(x, x)).matrix;
  return OperatorMatrix{x.structure(), symmetrized(2.0 * l * l - l2)};
}

Element OperatorMatrix::apply(const Element& y) const {
  if (!(y.structure() == structure))
    throw StructureMismatch("OperatorMatrix::apply: structure mismatch");
  return Element::unflatten(structure, matrix * y.flatten());
}

Element geometric_mean(const Element& x, const Element& y, double tol) {
  require_same_structure(x, y, "geometric_mean");
  const SpectralDecomposition dx = spectral(x);
  for (std::size_t b = 0; b < dx.blocks.size(); ++b) {
    for (double l : dx.blocks[b].eigenvalues) {
      if (!(l > tol))
        throw DomainError("geometric_mean: first argument not interior (eigenvalue " +
                          std::to_string(l) + " in block " + std::to_string(b) + ")");
    }
  }
  if (!(min_eigenvalue(y) > tol))
    throw DomainError("geometric_mean: second argument not interior (min eigenvalue " +
                      std::to_string(min_eigenvalue(y)) + ")");
  const Element root = power(dx, 0.5);
  const Element inv_root = power(dx, -0.5);
  return quad_apply(root, power(quad_apply(inv_root, y), 0.5));
}

double min_eigenvalue(const Element& x) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : x.blocks()) {
    std::visit(
        [&](const auto& xv) {
          using T = std::decay_t<decltype(xv)>;
          if constexpr (std::is_same_v<T, OrthantValue>) {
            lo = std::min(lo, xv.v.minCoeff());
          } else if constexpr (std::is_same_v<T, SocValue>) {
            lo = std::min(lo, xv.t - xv.x.norm());
          } else {
            lo = std::min(lo, jacobi_eigen(xv.m, tol::kJacobiRelative).values(0));
          }
        },
        b);
  }
  return lo;
}

bool in_cone(const Element& x, double tol) { return min_eigenvalue(x) >= -tol; }
bool in_interior(const Element& x, double tol) { return min_eigenvalue(x) > tol; }

Element random_interior(const ConeStructure& structure, double scale, std::mt19937_64& rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("random_interior: scale must be positive");
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<BlockValue> blocks;
  for (const auto& kind : structure.blocks()) {
    const int n = kind.size();
    switch (kind.type()) {
      case BlockKind::Type::Orthant: {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = unif(rng) * scale;
        blocks.push_back(OrthantValue{std::move(v)});
        break;
      }
      case BlockKind::Type::Soc: {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = normal(rng);
        const double t = x.norm() + unif(rng) * scale;
        blocks.push_back(SocValue{t, std::move(x)});
        break;
      }
      case BlockKind::Type::Sym: {
        Eigen::MatrixXd g(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
        Eigen::MatrixXd m = g * g.transpose() / n;
        m.diagonal().array() += 0.1 * scale;
        blocks.push_back(SymValue{symmetrized(m)});
        break;
      }
    }
  }
  return Element(structure, std::move(blocks));
}

}  // namespace conefact
