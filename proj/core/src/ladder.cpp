#include "cqed/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cqed {

std::vector<int> manifold_basis(const HilbertSpace& space, int n) {
  if (n < 0) throw std::invalid_argument("manifold_basis: negative excitation number");
  if (n > space.complete_manifold_limit())
    throw std::invalid_argument("manifold_basis: photon cutoffs cannot represent the n=" + std::to_string(n) +
                                " manifold");
  std::vector<int> idx;
  for (int i = 0; i < space.total_dim(); ++i)
    if (space.excitations(i) == n) idx.push_back(i);
  return idx;
}

int EigenReport::k_of(std::size_t i) const {
  const int count = static_cast<int>(factors.size());
  return count % 2 == 1 ? static_cast<int>(i) - count / 2 : static_cast<int>(i);
}

EigenReport eigen_table(const Operator& h, int n, double g0, double cluster_tol) {
  if (!(g0 > 0.0)) throw std::invalid_argument("eigen_table: g0 must be > 0");
  if (!h.is_hermitian()) throw std::invalid_argument("eigen_table: Hamiltonian is not Hermitian");
  const auto& space = h.space();
  const auto basis = manifold_basis(space, n);

  const SparseMatrix& m = h.matrix();
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (std::abs(it.value()) > 0.0 && space.excitations(static_cast<int>(it.row())) !=
                                            space.excitations(static_cast<int>(it.col())))
        throw std::invalid_argument("eigen_table: Hamiltonian does not conserve excitation number");

  const int dim = static_cast<int>(basis.size());
  DenseMatrix block(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) block(i, j) = m.coeff(basis[i], basis[j]);

  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(block);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen_table: eigensolver failed");
  const Eigen::VectorXd values = solver.eigenvalues();

  EigenReport report;
  report.n = n;
  report.manifold_dim = dim;
  for (int i = 0; i < dim; ++i) {
    const double r = (block * solver.eigenvectors().col(i) - values[i] * solver.eigenvectors().col(i)).norm();
    report.max_residual = std::max(report.max_residual, r);
  }

  // Values arrive sorted; a new cluster starts when the gap exceeds the tolerance.
  for (int i = 0; i < dim; ++i) {
    const double eps = values[i] / g0;
    if (!report.factors.empty()) {
      const double gap = eps - values[i - 1] / g0;
      if (gap <= cluster_tol) {
        auto& last = report.factors.back();
        last.epsilon += (eps - last.epsilon) / (last.degeneracy + 1);
        ++last.degeneracy;
        continue;
      }
      if (gap < 100.0 * cluster_tol) report.ambiguous = true;
    }
    report.factors.push_back({eps, 1});
  }
  for (auto& f : report.factors)
    if (std::abs(f.epsilon) <= cluster_tol) f.epsilon = 0.0;
  return report;
}

}  // namespace cqed
