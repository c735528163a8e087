#pragma once

// Euclidean Jordan algebra arithmetic over direct sums of orthant,
// second-order-cone and real-symmetric-matrix blocks.
//
// Coordinates exposed through flatten()/unflatten() are isometric: the
// Euclidean dot product of two flattened elements equals the canonical trace
// inner product tr(x o y). Per block:
//   Orthant(k)  raw entries
//   Soc(k)      sqrt(2) * (t, x_1, ..., x_k)
//   Sym(n)      upper triangle row by row; diagonal raw, off-diagonal * sqrt(2)

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace conefact {

namespace tol {
// Eigenvalues in (-kRoundoffNegative, 0) are treated as zero for fractional
// nonnegative powers.
inline constexpr double kRoundoffNegative = 1e-12;
// ||x|| below this (times max(1,|t|)) makes a Soc element a multiple of e.
inline constexpr double kSocDegenerate = 1e-14;
inline constexpr double kJacobiRelative = 1e-14;
}  // namespace tol

class BlockKind {
 public:
  enum class Type { Orthant, Soc, Sym };

  static BlockKind orthant(int k);
  static BlockKind soc(int k);
  static BlockKind sym(int n);

  Type type() const noexcept { return type_; }
  int size() const noexcept { return size_; }
  // Number of isometric coordinates.
  int dimension() const noexcept;
  int rank() const noexcept;

  friend bool operator==(const BlockKind&, const BlockKind&) = default;

 private:
  BlockKind(Type type, int size);
  Type type_;
  int size_;
};

class ConeStructure {
 public:
  explicit ConeStructure(std::vector<BlockKind> blocks);

  const std::vector<BlockKind>& blocks() const noexcept { return blocks_; }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  const BlockKind& block(std::size_t i) const { return blocks_.at(i); }
  int dimension() const noexcept { return dimension_; }
  int rank() const noexcept { return rank_; }
  // Offset of block i inside flattened coordinates.
  int offset(std::size_t i) const { return offsets_.at(i); }

  friend bool operator==(const ConeStructure& a, const ConeStructure& b) {
    return a.blocks_ == b.blocks_;
  }

 private:
  std::vector<BlockKind> blocks_;
  std::vector<int> offsets_;
  int dimension_ = 0;
  int rank_ = 0;
};

struct OrthantValue {
  Eigen::VectorXd v;
};
struct SocValue {
  double t = 0.0;
  Eigen::VectorXd x;
};
struct SymValue {
  Eigen::MatrixXd m;
};
using BlockValue = std::variant<OrthantValue, SocValue, SymValue>;

class Element {
 public:
  // Validates shapes against `structure` and that every entry is finite.
  // Symmetric blocks are symmetrized; gross asymmetry is rejected.
  Element(ConeStructure structure, std::vector<BlockValue> blocks);

  static Element zero(const ConeStructure& structure);
  static Element unflatten(const ConeStructure& structure, const Eigen::VectorXd& coords);

  const ConeStructure& structure() const noexcept { return structure_; }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  const BlockValue& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<BlockValue>& blocks() const noexcept { return blocks_; }

  Eigen::VectorXd flatten() const;
  // Norm induced by the trace inner product.
  double norm() const;

  Element operator+(const Element& other) const;
  Element operator-(const Element& other) const;
  Element operator*(double s) const;
  friend Element operator*(double s, const Element& x) { return x * s; }

 private:
  struct Unchecked {};
  Element(Unchecked, ConeStructure structure, std::vector<BlockValue> blocks);

  ConeStructure structure_;
  std::vector<BlockValue> blocks_;
};

struct BlockSpectrum {
  std::vector<double> eigenvalues;  // ascending for Sym and Soc blocks
  std::vector<BlockValue> frame;    // primitive idempotents, one per eigenvalue
};

struct SpectralDecomposition {
  ConeStructure structure;
  std::vector<BlockSpectrum> blocks;

  // Sum of lambda_i c_i.
  Element reconstruct() const;
  // Frame element c_i of block `b` embedded into the full algebra.
  Element frame_element(std::size_t b, std::size_t i) const;
};

struct OperatorMatrix {
  ConeStructure structure;
  Eigen::MatrixXd matrix;  // d x d in isometric coordinates

  Element apply(const Element& y) const;
};

Element identity(const ConeStructure& structure);
Element jordan_product(const Element& x, const Element& y);
double trace(const Element& x);
double inner(const Element& x, const Element& y);

SpectralDecomposition spectral(const Element& x);
Element power(const Element& x, double a);
// x^a built from an existing decomposition of x.
Element power(const SpectralDecomposition& decomposition, double a);

Element quad_apply(const Element& x, const Element& y);
OperatorMatrix lyapunov_matrix(const Element& x);
OperatorMatrix quad_matrix(const Element& x);

// x # y = P(x^{1/2}) (P(x^{-1/2}) y)^{1/2}. Both arguments must have strictly
// positive eigenvalues (min eigenvalue > tol).
Element geometric_mean(const Element& x, const Element& y, double tol = 0.0);

double min_eigenvalue(const Element& x);
bool in_cone(const Element& x, double tol);
bool in_interior(const Element& x, double tol);

// Orthant: uniform(0.1, 1) * scale entries. Soc: x standard normal,
// t = ||x|| + uniform(0.1, 1) * scale. Sym: G G^T / n + 0.1 * scale * I with G
// standard normal.
Element random_interior(const ConeStructure& structure, double scale, std::mt19937_64& rng);

// Throws StructureMismatch unless x and y share a structure.
void require_same_structure(const Element& x, const Element& y, const char* op);

std::string to_string(const BlockKind& kind);

}  // namespace conefact
