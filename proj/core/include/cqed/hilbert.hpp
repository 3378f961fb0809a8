#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cqed {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;

/// What a tensor factor represents. Atom factors carry the number of ground
/// levels; every level at or above that index counts as one excitation.
enum class FactorKind { atom, mode };

struct Factor {
  std::string label;
  int dim = 1;
  FactorKind kind = FactorKind::mode;
  int ground_levels = 0;  ///< atom factors only

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Ordered tensor product of labelled factors. The first factor is the most
/// significant digit of the product-basis index.
class HilbertSpace {
 public:
  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<Factor> factors);

  /// atom(20) x mode_z(n_z + 1) x mode_y(n_y + 1).
  static HilbertSpace cavity_qed(int n_z, int n_y);
  /// Two-level atom x mode_z(n + 1).
  static HilbertSpace jaynes_cummings(int n);
  /// Single factor, used for operators defined on one subsystem.
  static HilbertSpace single(std::string label, int dim, FactorKind kind = FactorKind::mode,
                             int ground_levels = 0);

  const std::vector<Factor>& factors() const { return factors_; }
  int total_dim() const { return total_dim_; }
  bool has(const std::string& label) const;
  int position(const std::string& label) const;
  const Factor& factor(const std::string& label) const;

  /// Per-factor indices of a product-basis state.
  std::vector<int> digits(int index) const;
  int index(const std::vector<int>& digits) const;
  /// Total excitation count (photons plus atomic excitation) of a basis state.
  int excitations(int index) const;
  /// Largest n such that every state with n excitations is representable.
  int complete_manifold_limit() const;

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  std::vector<Factor> factors_;
  int total_dim_ = 1;
};

/// Sparse operator bound to the space it acts on.
class Operator {
 public:
  Operator() = default;
  Operator(HilbertSpace space, SparseMatrix matrix);

  static Operator zero(const HilbertSpace& space);
  static Operator identity(const HilbertSpace& space);

  const HilbertSpace& space() const { return space_; }
  const SparseMatrix& matrix() const { return matrix_; }
  int dim() const { return space_.total_dim(); }

  Operator adjoint() const;
  DenseMatrix dense() const { return DenseMatrix(matrix_); }
  Complex trace() const;
  /// Frobenius norm.
  double norm() const;
  bool is_hermitian(double tol = 1e-12) const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex s);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Operator lhs, Complex s) { return lhs *= s; }
  friend Operator operator*(Complex s, Operator rhs) { return rhs *= s; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  void require_same_space(const Operator& rhs) const;

  HilbertSpace space_;
  SparseMatrix matrix_;
};

Operator commutator(const Operator& a, const Operator& b);

/// Kronecker product with deterministic (row-major sorted, duplicate-summed) assembly.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

/// Single-mode lowering operator on {|0>, ..., |n_max>}; throws for n_max < 1.
Operator annihilation(int n_max);

/// Lift an operator on one factor into `space`, identity elsewhere.
Operator embed(const Operator& op, const std::string& target, const HilbertSpace& space);
Operator embed(const SparseMatrix& op, const std::string& target, const HilbertSpace& space);

/// Diagonal operator counting photons in every mode plus atomic excitation.
Operator excitation_number(const HilbertSpace& space);

}  // namespace cqed
