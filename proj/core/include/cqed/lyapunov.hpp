#pragma once

#include "cqed/hilbert.hpp"

namespace cqed {

/// Solves A X + X A^H = Y for fixed A by Bartels-Stewart on the complex Schur
/// form A = Q T Q^H. The factorization is computed once; each solve is O(n^3).
class LyapunovSolver {
 public:
  explicit LyapunovSolver(const DenseMatrix& a);

  DenseMatrix solve(const DenseMatrix& y) const;

  /// min |2 Re lambda_i| / max |lambda_i|; zero when the operator is singular.
  double separation() const;
  int dim() const { return static_cast<int>(t_.rows()); }

 private:
  DenseMatrix q_;
  DenseMatrix t_;
};

}  // namespace cqed
