#pragma once

#include <string>
#include <vector>

#include "cqed/hilbert.hpp"
#include "cqed/model.hpp"

namespace cqed {

/// Hermitian, unit-trace, positive semidefinite state. Construction validates
/// the invariants and throws NumericalError when they fail.
class DensityMatrix {
 public:
  struct Tolerances {
    double trace = 1e-10;
    double hermiticity = 1e-10;
    double min_eigenvalue = -1e-8;
  };

  DensityMatrix(HilbertSpace space, DenseMatrix matrix) : DensityMatrix(std::move(space), std::move(matrix), Tolerances{}) {}
  DensityMatrix(HilbertSpace space, DenseMatrix matrix, Tolerances tol);

  /// Pure state |psi><psi| (psi is normalized here).
  static DensityMatrix pure(const HilbertSpace& space, const Eigen::VectorXcd& psi);

  const HilbertSpace& space() const { return space_; }
  const DenseMatrix& matrix() const { return matrix_; }
  Complex expectation(const Operator& op) const;
  double min_eigenvalue() const;

 private:
  HilbertSpace space_;
  DenseMatrix matrix_;
};

/// Lindblad generator L(rho) = -i[H, rho] + sum_c (c rho c^H - {c^H c, rho}/2).
/// Stored as the non-Hermitian effective generator A = -iH - sum_c c^H c / 2, so
/// that L(rho) = A rho + rho A^H + sum_c c rho c^H.
class Liouvillian {
 public:
  Liouvillian(Operator hamiltonian, std::vector<Operator> collapse_ops);

  const HilbertSpace& space() const { return h_.space(); }
  const Operator& hamiltonian() const { return h_; }
  const std::vector<Operator>& collapse_ops() const { return collapse_; }
  const SparseMatrix& effective_generator() const { return a_; }

  DenseMatrix apply(const DenseMatrix& rho) const;
  /// Jump part sum_c c rho c^H.
  DenseMatrix apply_jumps(const DenseMatrix& rho) const;

  /// Superoperator on column-stacked vec(rho), dimension total_dim^2.
  SparseMatrix superoperator() const;

 private:
  Operator h_;
  std::vector<Operator> collapse_;
  SparseMatrix a_;
  SparseMatrix a_adj_;
  std::vector<SparseMatrix> c_;
  std::vector<SparseMatrix> c_adj_;
};

/// Decay channels implied by the factors of `space`: sqrt(2 kappa) a for every
/// mode, sqrt(2 gamma) D_q (q = -1, 0, 1) for a 20-level atom, sqrt(2 gamma)
/// sigma_- for a two-level atom.
std::vector<Operator> collapse_operators(const SystemParams& params, const HilbertSpace& space);

Liouvillian build_liouvillian(const Operator& h_total, const SystemParams& params);

enum class SteadyStateMethod { automatic, direct, krylov };

struct SteadyStateOptions {
  SteadyStateMethod method = SteadyStateMethod::automatic;
  double residual_tol = 1e-10;  ///< on ||L(rho)||_F, internal units
  int max_iterations = 3000;    ///< Krylov only
  int restart = 150;            ///< Krylov only
  int direct_max_dim = 100;     ///< automatic picks direct up to this Hilbert dimension
};

struct SteadyState {
  DensityMatrix rho;
  double residual = 0.0;
  int iterations = 0;
  std::string method;
};

/// Unique stationary state with unit trace.
///
/// Direct route: sparse LU of the superoperator with one equation replaced by
/// the trace constraint, plus iterative refinement. Krylov route: GMRES on the
/// jump-map fixed point, preconditioned by the Lyapunov solve of A, followed by
/// residual-correction sweeps. Throws NumericalError (with a condition estimate
/// for the direct route) when the kernel is degenerate or the residual target
/// is missed.
SteadyState steady_state(const Liouvillian& l, const SteadyStateOptions& options = {});

struct PropagationOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  long max_steps = 10'000'000;
};

/// exp(L t) rho0 by adaptive Dormand-Prince 5(4). rho0 need not have unit trace.
DenseMatrix propagate(const Liouvillian& l, const DenseMatrix& rho0, double t, const PropagationOptions& options = {});

/// States at each time of an ascending grid (grid points are hit exactly).
std::vector<DenseMatrix> propagate_grid(const Liouvillian& l, const DenseMatrix& rho0, const std::vector<double>& times,
                                        const PropagationOptions& options = {});

struct G2Point {
  double tau = 0.0;
  double g2 = 0.0;
};

/// g2(tau) = Tr[n exp(L tau)(a rho a^H)] / Tr[n rho]^2 with a = detect_op, n = a^H a.
std::vector<G2Point> g2_tau(const Liouvillian& l, const DensityMatrix& rho_ss, const Operator& detect_op,
                            const std::vector<double>& tau_grid, const PropagationOptions& options = {});

}  // namespace cqed
