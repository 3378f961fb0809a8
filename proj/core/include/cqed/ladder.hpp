#pragma once

#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

struct EigenFactor {
  double epsilon = 0.0;  ///< eigenvalue / g0
  int degeneracy = 0;
};

/// Distinct eigenvalue factors of one excitation manifold, sorted ascending.
struct EigenReport {
  int n = 0;
  int manifold_dim = 0;
  std::vector<EigenFactor> factors;
  double max_residual = 0.0;  ///< max ||H v - lambda v|| over eigenpairs (same units as H)
  bool ambiguous = false;     ///< some gap between clusters is comparable to the tolerance

  /// Signed index k for factor i: centred on the middle factor when the count is odd.
  int k_of(std::size_t i) const;
};

/// Product-basis indices holding exactly n excitations. Throws when the
/// photon cutoffs cannot represent the whole manifold.
std::vector<int> manifold_basis(const HilbertSpace& space, int n);

/// Diagonalize H restricted to the n-excitation manifold and cluster eigenvalues
/// (divided by g0) whose neighbours lie within cluster_tol. H must conserve
/// excitation number.
EigenReport eigen_table(const Operator& h, int n, double g0, double cluster_tol = 1e-6);

}  // namespace cqed
