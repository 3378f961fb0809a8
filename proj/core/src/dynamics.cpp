#include "cqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <suitesparse/umfpack.h>

#include "cqed/angular.hpp"
#include "cqed/error.hpp"
#include "cqed/lyapunov.hpp"

namespace cqed {

namespace {

Complex frobenius_inner(const DenseMatrix& x, const DenseMatrix& y) {
  return (x.array().conjugate() * y.array()).sum();
}

DenseMatrix hermitized(const DenseMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

DensityMatrix::DensityMatrix(HilbertSpace space, DenseMatrix matrix, Tolerances tol)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const int n = space_.total_dim();
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw std::invalid_argument("DensityMatrix: matrix does not match the space dimension");
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << tr.real() << (tr.imag() < 0 ? "-" : "+") << std::abs(tr.imag()) << "i is not 1";
    throw NumericalError(msg.str());
  }
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity)
    throw NumericalError("DensityMatrix: not Hermitian (max deviation " + std::to_string(herm) + ")");
  const double lo = min_eigenvalue();
  if (lo < tol.min_eigenvalue)
    throw NumericalError("DensityMatrix: negative eigenvalue " + std::to_string(lo));
}

DensityMatrix DensityMatrix::pure(const HilbertSpace& space, const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("DensityMatrix::pure: zero vector");
  const Eigen::VectorXcd v = psi / norm;
  return DensityMatrix(space, v * v.adjoint());
}

Complex DensityMatrix::expectation(const Operator& op) const {
  if (op.space() != space_) throw std::invalid_argument("DensityMatrix::expectation: operator on a different space");
  // Tr[O rho] = sum_{ij} O_ij rho_ji
  Complex acc = 0.0;
  const SparseMatrix& m = op.matrix();
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) acc += it.value() * matrix_(it.col(), it.row());
  return acc;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(hermitized(matrix_), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Liouvillian::Liouvillian(Operator hamiltonian, std::vector<Operator> collapse_ops)
    : h_(std::move(hamiltonian)), collapse_(std::move(collapse_ops)) {
  if (!h_.is_hermitian(1e-9)) throw std::invalid_argument("Liouvillian: Hamiltonian is not Hermitian");
  SparseMatrix decay(h_.dim(), h_.dim());
  for (const auto& c : collapse_) {
    if (c.space() != h_.space()) throw std::invalid_argument("Liouvillian: collapse operator on a different space");
    c_.push_back(c.matrix());
    c_adj_.push_back(c.matrix().adjoint());
    decay += c_adj_.back() * c_.back();
  }
  a_ = Complex(0.0, -1.0) * h_.matrix() - 0.5 * decay;
  a_.makeCompressed();
  a_adj_ = a_.adjoint();
}

DenseMatrix Liouvillian::apply_jumps(const DenseMatrix& rho) const {
  DenseMatrix out = DenseMatrix::Zero(rho.rows(), rho.cols());
  DenseMatrix tmp;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    tmp.noalias() = c_[k] * rho;
    out.noalias() += tmp * c_adj_[k];
  }
  return out;
}

DenseMatrix Liouvillian::apply(const DenseMatrix& rho) const {
  if (rho.rows() != h_.dim() || rho.cols() != h_.dim())
    throw std::invalid_argument("Liouvillian::apply: dimension mismatch");
  DenseMatrix out = apply_jumps(rho);
  out.noalias() += a_ * rho;
  out.noalias() += rho * a_adj_;
  return out;
}

SparseMatrix Liouvillian::superoperator() const {
  // vec(A rho + rho A^H + c rho c^H) = (I x A + conj(A) x I + sum conj(c) x c) vec(rho)
  const int n = h_.dim();
  SparseMatrix id(n, n);
  id.setIdentity();
  SparseMatrix s = kron(id, a_);
  s += kron(SparseMatrix(a_.conjugate()), id);
  for (const auto& c : c_) s += kron(SparseMatrix(c.conjugate()), c);
  s.makeCompressed();
  return s;
}

std::vector<Operator> collapse_operators(const SystemParams& params, const HilbertSpace& space) {
  params.validate();
  std::vector<Operator> out;
  const double field = std::sqrt(2.0 * params.kappa);
  const double dipole = std::sqrt(2.0 * params.gamma);
  for (const auto& f : space.factors()) {
    if (f.kind == FactorKind::mode) {
      out.push_back(Complex(field) * embed(annihilation(f.dim - 1), f.label, space));
      continue;
    }
    if (f.dim == 2 && f.ground_levels == 1) {
      SparseMatrix sigma(2, 2);
      sigma.insert(0, 1) = 1.0;
      out.push_back(Complex(dipole) * embed(sigma, f.label, space));
      continue;
    }
    const auto scheme = AtomicLevelScheme::cesium_d2();
    if (f.dim != scheme.dimension() || f.ground_levels != scheme.ground_count())
      throw std::invalid_argument("collapse_operators: unsupported atomic factor '" + f.label + "'");
    const DipoleSet d = build_dipole_set(scheme);
    for (int q = -1; q <= 1; ++q) out.push_back(Complex(dipole) * embed(d.component(q), f.label, space));
  }
  return out;
}

Liouvillian build_liouvillian(const Operator& h_total, const SystemParams& params) {
  return Liouvillian(h_total, collapse_operators(params, h_total.space()));
}

namespace {

// Owns the UMFPACK symbolic and numeric objects for one complex CSC matrix.
class UmfpackFactor {
 public:
  explicit UmfpackFactor(const SparseMatrix& m) : m_(m) {
    m_.makeCompressed();
    umfpack_zi_defaults(control_);
    const int n = static_cast<int>(m_.rows());
    const double* ax = reinterpret_cast<const double*>(m_.valuePtr());
    int status = umfpack_zi_symbolic(n, n, m_.outerIndexPtr(), m_.innerIndexPtr(), ax, nullptr, &symbolic_, control_,
                                     info_);
    if (status != UMFPACK_OK) throw NumericalError("sparse LU: symbolic analysis failed (status " +
                                                   std::to_string(status) + ")");
    status = umfpack_zi_numeric(m_.outerIndexPtr(), m_.innerIndexPtr(), ax, nullptr, symbolic_, &numeric_, control_,
                                info_);
    status_ = status;
    if (status != UMFPACK_OK && status != UMFPACK_WARNING_singular_matrix)
      throw NumericalError("sparse LU: numeric factorization failed (status " + std::to_string(status) + ")");
  }
  ~UmfpackFactor() {
    if (numeric_) umfpack_zi_free_numeric(&numeric_);
    if (symbolic_) umfpack_zi_free_symbolic(&symbolic_);
  }
  UmfpackFactor(const UmfpackFactor&) = delete;
  UmfpackFactor& operator=(const UmfpackFactor&) = delete;

  bool singular() const { return status_ == UMFPACK_WARNING_singular_matrix; }
  double rcond() const { return info_[UMFPACK_RCOND]; }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) {
    Eigen::VectorXcd x(b.size());
    const double* ax = reinterpret_cast<const double*>(m_.valuePtr());
    const int status = umfpack_zi_solve(UMFPACK_A, m_.outerIndexPtr(), m_.innerIndexPtr(), ax, nullptr,
                                        reinterpret_cast<double*>(x.data()), nullptr,
                                        reinterpret_cast<const double*>(b.data()), nullptr, numeric_, control_, info_);
    if (status != UMFPACK_OK) throw NumericalError("sparse LU: solve failed (status " + std::to_string(status) + ")");
    return x;
  }

 private:
  SparseMatrix m_;
  void* symbolic_ = nullptr;
  void* numeric_ = nullptr;
  double control_[UMFPACK_CONTROL];
  double info_[UMFPACK_INFO];
  int status_ = UMFPACK_OK;
};

std::string format_rcond(double r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

SteadyState finish(const Liouvillian& l, DenseMatrix rho, int iterations, std::string method, double tol) {
  rho /= rho.trace();
  rho = hermitized(rho);
  const double residual = l.apply(rho).norm();
  if (!(residual <= tol))
    throw NumericalError("steady state (" + method + "): residual " + format_rcond(residual) + " exceeds " +
                         format_rcond(tol));
  return SteadyState{DensityMatrix(l.space(), std::move(rho)), residual, iterations, std::move(method)};
}

SteadyState steady_state_direct(const Liouvillian& l, const SteadyStateOptions& opt) {
  const int n = l.space().total_dim();
  // Replace the first equation by the trace constraint Tr rho = 1.
  SparseMatrix rows = SparseMatrix(l.superoperator().transpose());
  rows.prune([](Eigen::Index, Eigen::Index col, const Complex&) { return col != 0; });
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(rows.nonZeros()) + n);
  for (int k = 0; k < rows.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(rows, k); it; ++it) trip.emplace_back(it.col(), it.row(), it.value());
  for (int i = 0; i < n; ++i) trip.emplace_back(0, i * n + i, 1.0);
  SparseMatrix system(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n);
  system.setFromTriplets(trip.begin(), trip.end());

  UmfpackFactor lu(system);
  if (lu.singular() || !(lu.rcond() > 1e-15))
    throw NumericalError("steady state: stationary state is not unique (reciprocal condition estimate " +
                         format_rcond(lu.rcond()) + ")");

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n) * n);
  rhs[0] = 1.0;
  Eigen::VectorXcd x = lu.solve(rhs);
  int sweeps = 1;
  for (; sweeps < 4; ++sweeps) {
    const Eigen::VectorXcd r = rhs - system * x;
    if (r.norm() <= 1e-3 * opt.residual_tol) break;
    x += lu.solve(r);
  }
  DenseMatrix rho = Eigen::Map<const DenseMatrix>(x.data(), n, n);
  return finish(l, std::move(rho), sweeps, "direct", opt.residual_tol);
}

using LinearMap = std::function<DenseMatrix(const DenseMatrix&)>;

// Restarted GMRES with modified Gram-Schmidt (two passes) and Givens rotations.
// Solves op(x) = rhs starting from x; returns the number of operator applications.
int gmres(const LinearMap& op, const DenseMatrix& rhs, DenseMatrix& x, double abs_tol, int restart, int max_apply) {
  int applied = 0;
  while (applied < max_apply) {
    DenseMatrix r = rhs - op(x);
    ++applied;
    const double beta = r.norm();
    if (beta <= abs_tol) return applied;

    std::vector<DenseMatrix> v;
    v.push_back(r / beta);
    DenseMatrix h = DenseMatrix::Zero(restart + 1, restart);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(restart + 1);
    g[0] = beta;
    std::vector<double> cs(restart);
    std::vector<Complex> sn(restart);
    int k = 0;
    for (; k < restart && applied < max_apply; ++k) {
      DenseMatrix w = op(v[k]);
      ++applied;
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= k; ++i) {
          const Complex hik = frobenius_inner(v[i], w);
          h(i, k) += hik;
          w -= hik * v[i];
        }
      const double hnext = w.norm();
      for (int i = 0; i < k; ++i) {
        const Complex t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -std::conj(sn[i]) * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      const double denom = std::hypot(std::abs(h(k, k)), hnext);
      if (denom == 0.0) {
        ++k;
        break;
      }
      cs[k] = std::abs(h(k, k)) / denom;
      const Complex phase = std::abs(h(k, k)) > 0.0 ? h(k, k) / std::abs(h(k, k)) : Complex(1.0);
      sn[k] = phase * hnext / denom;
      h(k, k) = phase * denom;
      g[k + 1] = -std::conj(sn[k]) * g[k];
      g[k] = cs[k] * g[k];
      if (std::abs(g[k + 1]) <= abs_tol || hnext == 0.0) {
        ++k;
        break;
      }
      v.push_back(w / hnext);
    }
    const Eigen::VectorXcd y =
        h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    for (int i = 0; i < k; ++i) x += y[i] * v[i];
  }
  return applied;
}

SteadyState steady_state_krylov(const Liouvillian& l, const LyapunovSolver& lyap, const SteadyStateOptions& opt) {
  const int n = l.space().total_dim();
  // With P = -(A . + . A^H)^{-1} and rho = P y, L(rho) = 0 becomes y = J(P y), J the
  // jump map. J P preserves the trace, so GMRES from I/n stays in that affine slice.
  auto precond = [&](const DenseMatrix& y) -> DenseMatrix { return -lyap.solve(y); };
  const LinearMap op = [&](const DenseMatrix& y) -> DenseMatrix { return y - l.apply_jumps(precond(y)); };

  const double scale = l.effective_generator().norm();
  DenseMatrix y = DenseMatrix::Identity(n, n) / static_cast<double>(n);
  int applied = gmres(op, DenseMatrix::Zero(n, n), y, 1e-13, opt.restart, opt.max_iterations);
  DenseMatrix rho = precond(y);
  rho /= rho.trace();
  rho = hermitized(rho);

  // Residual correction: L(rho + P z) = 0  <=>  (I - J P) z = L(rho). Observables
  // such as g2 are ratios of small moments, so sweeps continue well below the
  // acceptance tolerance until the residual stops improving.
  double last = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 8 && applied < opt.max_iterations; ++sweep) {
    const DenseMatrix r = l.apply(rho);
    const double rn = r.norm();
    if (rn <= 1e-4 * opt.residual_tol || rn > 0.5 * last) break;
    last = rn;
    DenseMatrix z = DenseMatrix::Zero(n, n);
    applied += gmres(op, r, z, std::max(1e-3 * rn, 1e-16 * scale), opt.restart, opt.max_iterations - applied);
    const DenseMatrix candidate = hermitized((rho + precond(z)) / (rho + precond(z)).trace());
    if (l.apply(candidate).norm() >= rn) break;
    rho = candidate;
  }
  return finish(l, std::move(rho), applied, "krylov", opt.residual_tol);
}

}  // namespace

SteadyState steady_state(const Liouvillian& l, const SteadyStateOptions& opt) {
  if (!(opt.residual_tol > 0.0)) throw std::invalid_argument("steady_state: residual_tol must be > 0");
  const int n = l.space().total_dim();
  if (opt.method == SteadyStateMethod::direct ||
      (opt.method == SteadyStateMethod::automatic && n <= opt.direct_max_dim))
    return steady_state_direct(l, opt);

  const LyapunovSolver lyap{DenseMatrix(l.effective_generator())};
  if (lyap.separation() < 1e-12) {
    if (opt.method == SteadyStateMethod::krylov)
      throw NumericalError("steady state (krylov): effective generator is singular; use the direct method");
    return steady_state_direct(l, opt);
  }
  return steady_state_krylov(l, lyap, opt);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

class DormandPrince {
 public:
  DormandPrince(const Liouvillian& l, const PropagationOptions& opt) : l_(l), opt_(opt) {
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw std::invalid_argument("propagate: tolerances must be > 0");
  }

  // Advance y from t to t_end in place.
  void advance(DenseMatrix& y, double t, double t_end) {
    if (t_end < t) throw std::invalid_argument("propagate: times must be ascending");
    if (t_end == t) return;
    if (!have_k1_) {
      k1_ = l_.apply(y);
      have_k1_ = true;
    }
    if (h_ <= 0.0) h_ = initial_step(y, k1_, t_end - t);
    while (t < t_end) {
      if (++steps_ > opt_.max_steps) throw NumericalError("propagate: step limit exceeded");
      const bool last = t + h_ >= t_end;
      const double h = last ? t_end - t : h_;
      k2_ = l_.apply(y + h * a21 * k1_);
      k3_ = l_.apply(y + h * (a31 * k1_ + a32 * k2_));
      k4_ = l_.apply(y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_));
      k5_ = l_.apply(y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_));
      k6_ = l_.apply(y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_));
      y_new_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
      k7_ = l_.apply(y_new_);
      err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

      const double scale_y = std::max(y.cwiseAbs().maxCoeff(), y_new_.cwiseAbs().maxCoeff());
      const double err = err_.cwiseAbs().maxCoeff() / (opt_.atol + opt_.rtol * scale_y);
      if (!std::isfinite(err)) throw NumericalError("propagate: non-finite state");
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        t = last ? t_end : t + h;
        y.swap(y_new_);
        k1_.swap(k7_);
        // A clipped final step says nothing about the natural step size.
        if (!last || h == h_) h_ *= factor;
      } else {
        h_ = h * std::min(1.0, factor);
        if (h_ < 1e-14 * std::max(1.0, std::abs(t))) throw NumericalError("propagate: step size underflow");
      }
    }
  }

 private:
  double initial_step(const DenseMatrix& y, const DenseMatrix& f, double span) const {
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = f.cwiseAbs().maxCoeff();
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, span);
  }

  const Liouvillian& l_;
  PropagationOptions opt_;
  double h_ = 0.0;
  long steps_ = 0;
  bool have_k1_ = false;
  DenseMatrix k1_, k2_, k3_, k4_, k5_, k6_, k7_, y_new_, err_;
};

}  // namespace

DenseMatrix propagate(const Liouvillian& l, const DenseMatrix& rho0, double t, const PropagationOptions& options) {
  if (t < 0.0) throw std::invalid_argument("propagate: negative time");
  DenseMatrix y = rho0;
  DormandPrince(l, options).advance(y, 0.0, t);
  return y;
}

std::vector<DenseMatrix> propagate_grid(const Liouvillian& l, const DenseMatrix& rho0, const std::vector<double>& times,
                                        const PropagationOptions& options) {
  std::vector<DenseMatrix> out;
  out.reserve(times.size());
  DormandPrince stepper(l, options);
  DenseMatrix y = rho0;
  double t = 0.0;
  for (double target : times) {
    if (target < t) throw std::invalid_argument("propagate_grid: times must be nonnegative and ascending");
    stepper.advance(y, t, target);
    t = target;
    out.push_back(y);
  }
  return out;
}

std::vector<G2Point> g2_tau(const Liouvillian& l, const DensityMatrix& rho_ss, const Operator& detect_op,
                            const std::vector<double>& tau_grid, const PropagationOptions& options) {
  const Operator n_op = detect_op.adjoint() * detect_op;
  const double mean = rho_ss.expectation(n_op).real();
  if (!(mean > 0.0)) throw NumericalError("g2_tau: detected photon number is zero");
  const DenseMatrix sigma = detect_op.matrix() * rho_ss.matrix() * SparseMatrix(detect_op.matrix().adjoint());
  const auto states = propagate_grid(l, sigma, tau_grid, options);
  std::vector<G2Point> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    Complex acc = 0.0;
    const SparseMatrix& m = n_op.matrix();
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) acc += it.value() * states[i](it.col(), it.row());
    out.push_back({tau_grid[i], acc.real() / (mean * mean)});
  }
  return out;
}

}  // namespace cqed
