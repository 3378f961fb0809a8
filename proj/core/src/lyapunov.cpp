#include "cqed/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

// OpenBLAS spawns its own threads per call; sweeps already run one solve per
// worker, so keep BLAS single-threaded when the symbol is available.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace cqed {

namespace {
const bool kSerialBlas = [] {
  if (openblas_set_num_threads) openblas_set_num_threads(1);
  return true;
}();
}  // namespace

LyapunovSolver::LyapunovSolver(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("LyapunovSolver: matrix must be square");
  Eigen::ComplexSchur<DenseMatrix> schur(a);
  if (schur.info() != Eigen::Success) throw std::runtime_error("LyapunovSolver: Schur decomposition failed");
  q_ = schur.matrixU();
  t_ = schur.matrixT();
}

double LyapunovSolver::separation() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < t_.rows(); ++i) {
    lo = std::min(lo, std::abs(2.0 * t_(i, i).real()));
    hi = std::max(hi, std::abs(t_(i, i)));
  }
  return hi > 0.0 ? lo / hi : 0.0;
}

DenseMatrix LyapunovSolver::solve(const DenseMatrix& y) const {
  const Eigen::Index n = t_.rows();
  if (y.rows() != n || y.cols() != n) throw std::invalid_argument("LyapunovSolver::solve: dimension mismatch");

  // In the Schur basis: T Z + Z T^H = W. Column j of Z T^H only involves columns k >= j
  // of Z, so columns are solved last to first with a shifted upper-triangular system.
  const DenseMatrix w = q_.adjoint() * y * q_;
  DenseMatrix z(n, n);
  Eigen::VectorXcd x(n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    x = w.col(j);
    const Eigen::Index tail = n - 1 - j;
    if (tail > 0) x.noalias() -= z.rightCols(tail) * t_.row(j).tail(tail).adjoint();
    const Complex shift = std::conj(t_(j, j));
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      x[i] /= t_(i, i) + shift;
      if (i > 0) x.head(i).noalias() -= x[i] * t_.col(i).head(i);
    }
    z.col(j) = x;
  }
  return q_ * z * q_.adjoint();
}

}  // namespace cqed
