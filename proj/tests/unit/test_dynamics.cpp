#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "cqed/dynamics.hpp"
#include "cqed/error.hpp"
#include "cqed/observables.hpp"

using namespace cqed;

namespace {

const SystemParams kParams = SystemParams::from_mhz(50, 1, 1);

// Driven, detuned empty cavity on a single truncated mode.
Liouvillian empty_cavity(double n0, double detuning, int n_max = 15) {
  const auto s = HilbertSpace::single("mode_z", n_max + 1);
  const Operator a = embed(annihilation(n_max), "mode_z", s);
  Operator h = Complex(-detuning) * (a.adjoint() * a);
  h += Complex(kParams.kappa * std::sqrt(n0)) * (a + a.adjoint());
  return build_liouvillian(h, kParams);
}

DenseMatrix random_density(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  DenseMatrix rho = m * m.adjoint();
  return rho / rho.trace();
}

Liouvillian small_jc(double detuning_over_g0, int n_max = 1) {
  const auto s = HilbertSpace::jaynes_cummings(n_max);
  const SystemParams p = kParams.with_probe_detuning(detuning_over_g0 * kParams.g0);
  const Operator h = hamiltonian_jc(p, s) + drive_term_jc(DriveConfig::cavity(DriveTarget::cavity_z, 0.05), p, s);
  return build_liouvillian(h, p);
}

}  // namespace

TEST_CASE("collapse operators") {
  const auto ops = collapse_operators(kParams, HilbertSpace::cavity_qed(1, 1));
  CHECK(ops.size() == 5);
  const auto jc = collapse_operators(kParams, HilbertSpace::jaynes_cummings(2));
  REQUIRE(jc.size() == 2);
  // sqrt(2 gamma) sigma_-
  CHECK(jc[0].norm() == doctest::Approx(std::sqrt(2.0 * kParams.gamma) * std::sqrt(3.0)));
  CHECK_THROWS(collapse_operators(kParams, HilbertSpace::single("atom", 5, FactorKind::atom, 2)));
}

TEST_CASE("liouvillian preserves trace and hermiticity") {
  const Liouvillian l = small_jc(-0.7, 2);
  const int n = l.space().total_dim();
  const DenseMatrix out = l.apply(DenseMatrix::Identity(n, n) / double(n));
  CHECK(std::abs(out.trace()) < 1e-10);
  CHECK((out - out.adjoint()).norm() < 1e-10);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMatrix rho = random_density(n, rng);
    CHECK(std::abs(l.apply(rho).trace()) < 1e-10);
  }
}

TEST_CASE("superoperator agrees with the matrix form") {
  const Liouvillian l = small_jc(0.3, 2);
  const int n = l.space().total_dim();
  std::mt19937 rng(9);
  const DenseMatrix rho = random_density(n, rng);
  const SparseMatrix s = l.superoperator();
  CHECK(s.rows() == n * n);
  const Eigen::VectorXcd v = s * Eigen::Map<const Eigen::VectorXcd>(rho.data(), n * n);
  const DenseMatrix via_super = Eigen::Map<const DenseMatrix>(v.data(), n, n);
  CHECK((via_super - l.apply(rho)).norm() < 1e-9);
}

TEST_CASE("liouvillian spectrum is contractive") {
  const Liouvillian l = small_jc(-1.0, 1);
  REQUIRE(l.space().total_dim() <= 4);
  Eigen::ComplexEigenSolver<DenseMatrix> es(DenseMatrix(l.superoperator()));
  CHECK(es.eigenvalues().real().maxCoeff() <= 1e-10);
}

TEST_CASE("non-hermitian hamiltonian is rejected") {
  const auto s = HilbertSpace::single("mode_z", 3);
  CHECK_THROWS_AS(build_liouvillian(annihilation(2), kParams), std::invalid_argument);
  (void)s;
}

TEST_CASE("vacuum of the undriven cavity is stationary") {
  const auto s = HilbertSpace::single("mode_z", 4);
  const Liouvillian l = build_liouvillian(Operator::zero(s), kParams);
  DenseMatrix vac = DenseMatrix::Zero(4, 4);
  vac(0, 0) = 1.0;
  CHECK(l.apply(vac).norm() == 0.0);
}

TEST_CASE("empty-cavity lorentzian") {
  const double n0 = 0.2;
  for (double det_over_kappa : {0.0, 1.0, -2.5}) {
    const double det = det_over_kappa * kParams.kappa;
    const Liouvillian l = empty_cavity(n0, det);
    const auto ss = steady_state(l);
    const Operator a = embed(annihilation(15), "mode_z", l.space());
    const double expected =
        kParams.kappa * kParams.kappa * n0 / (kParams.kappa * kParams.kappa + det * det);
    CAPTURE(det_over_kappa);
    CHECK(std::abs(mean_photons(ss.rho, a) / expected - 1.0) < 1e-8);
    CHECK(std::abs(g2_zero(ss.rho, a) - 1.0) < 1e-8);
    CHECK(ss.residual <= 1e-10);
  }
}

TEST_CASE("two-level saturation") {
  const auto s = HilbertSpace::single("atom", 2, FactorKind::atom, 1);
  SparseMatrix sigma(2, 2);
  sigma.insert(0, 1) = 1.0;
  const Operator sm(s, sigma);
  for (double sat : {0.1, 1.0, 7.0}) {
    const Operator h = Complex(DriveConfig::atom(sat).coefficient(kParams)) * (sm + sm.adjoint());
    const auto ss = steady_state(build_liouvillian(h, kParams));
    CAPTURE(sat);
    CHECK(std::abs(ss.rho.matrix()(1, 1).real() / two_level_excited_population(sat) - 1.0) < 1e-8);
  }
}

TEST_CASE("steady state invariants and solver agreement") {
  const auto s = HilbertSpace::cavity_qed(1, 1);
  const SystemParams p = SystemParams::from_mhz(33.9, 4.1, 2.6, 4.4, -43).with_probe_detuning(from_mhz(-20));
  const DipoleSet d = build_dipole_set(AtomicLevelScheme::cesium_d2());
  const Operator h = hamiltonian_full(p, d, s) + drive_term(DriveConfig::cavity(DriveTarget::cavity_y, 0.2), p, d, s);
  const Liouvillian l = build_liouvillian(h, p);

  SteadyStateOptions direct, krylov;
  direct.method = SteadyStateMethod::direct;
  krylov.method = SteadyStateMethod::krylov;
  const auto a = steady_state(l, direct);
  const auto b = steady_state(l, krylov);
  CHECK(a.method == "direct");
  CHECK(b.method == "krylov");
  for (const auto* ss : {&a, &b}) {
    const DenseMatrix& r = ss->rho.matrix();
    CHECK(std::abs(r.trace() - 1.0) < 1e-10);
    CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(ss->rho.min_eigenvalue() >= -1e-8);
    CHECK(l.apply(r).norm() <= 1e-10);
  }
  CHECK((a.rho.matrix() - b.rho.matrix()).norm() < 1e-10);
}

TEST_CASE("degenerate kernel is reported") {
  // No drive: every ground sublevel with empty modes is stationary.
  const auto s = HilbertSpace::cavity_qed(1, 1);
  const DipoleSet d = build_dipole_set(AtomicLevelScheme::cesium_d2());
  const Liouvillian l = build_liouvillian(hamiltonian_ideal(kParams, d, s), kParams);
  SteadyStateOptions o;
  o.method = SteadyStateMethod::direct;
  try {
    steady_state(l, o);
    FAIL("expected a NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("condition") != std::string::npos);
  }
  o.method = SteadyStateMethod::krylov;
  CHECK_THROWS_AS(steady_state(l, o), NumericalError);
}

TEST_CASE("density matrix validation") {
  const auto s = HilbertSpace::single("mode_z", 2);
  DenseMatrix m = DenseMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(s, m), NumericalError);
  m *= 0.5;
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix(s, m), NumericalError);
  m(0, 1) = m(1, 0) = 0.7;
  CHECK_THROWS_AS(DensityMatrix(s, m), NumericalError);
  m(0, 1) = m(1, 0) = 0.2;
  CHECK_NOTHROW(DensityMatrix(s, m));
  CHECK_THROWS(DensityMatrix(s, DenseMatrix::Identity(3, 3) / 3.0));
}

TEST_CASE("propagation") {
  SUBCASE("zero time is the identity") {
    const Liouvillian l = small_jc(0.2, 2);
    std::mt19937 rng(1);
    const DenseMatrix rho = random_density(l.space().total_dim(), rng);
    CHECK((propagate(l, rho, 0.0) - rho).norm() == 0.0);
    CHECK_THROWS(propagate(l, rho, -1.0));
  }

  SUBCASE("photon decay") {
    const auto s = HilbertSpace::single("mode_z", 4);
    const Liouvillian l = build_liouvillian(Operator::zero(s), kParams);
    DenseMatrix rho = DenseMatrix::Zero(4, 4);
    rho(2, 2) = 1.0;
    const std::vector<double> times = {0.01, 0.05, 0.2};
    const auto states = propagate_grid(l, rho, times);
    const Operator n = annihilation(3).adjoint() * annihilation(3);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double got = (n.dense() * states[i]).trace().real();
      CHECK(got == doctest::Approx(2.0 * std::exp(-2.0 * kParams.kappa * times[i])).epsilon(1e-7));
      CHECK(std::abs(states[i].trace() - 1.0) < 1e-8);
    }
  }

  SUBCASE("excited population decays at 2 gamma") {
    const AtomicLevelScheme scheme = AtomicLevelScheme::cesium_d2();
    const auto s = HilbertSpace::single("atom", 20, FactorKind::atom, 9);
    SystemParams p = kParams;
    p.gamma = from_mhz(2.6);
    const Liouvillian l = build_liouvillian(Operator::zero(s), p);
    DenseMatrix rho = DenseMatrix::Zero(20, 20);
    rho(scheme.excited_index(2), scheme.excited_index(2)) = 1.0;
    const std::vector<double> times = {0.005, 0.02, 0.06, 0.1};
    const auto states = propagate_grid(l, rho, times);
    // Fit log P_e(t) = -rate t through the origin.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double pe = states[i].diagonal().tail(11).real().sum();
      num += -std::log(pe) * times[i];
      den += times[i] * times[i];
    }
    CHECK(num / den == doctest::Approx(2.0 * p.gamma).epsilon(1e-7));
  }

  SUBCASE("long times reach the steady state") {
    const Liouvillian l = empty_cavity(0.2, 0.5 * kParams.kappa, 10);
    const int n = l.space().total_dim();
    DenseMatrix rho = DenseMatrix::Zero(n, n);
    rho(0, 0) = 1.0;
    const DenseMatrix late = propagate(l, rho, 6.0);
    CHECK((late - steady_state(l).rho.matrix()).norm() < 1e-7);
  }

  SUBCASE("unnormalized input keeps its trace") {
    const Liouvillian l = small_jc(-1.0, 2);
    std::mt19937 rng(2);
    const DenseMatrix rho = 0.37 * random_density(l.space().total_dim(), rng);
    CHECK(std::abs(propagate(l, rho, 0.3).trace() - 0.37) < 1e-8);
  }
}

TEST_CASE("regression theorem") {
  const Liouvillian l = small_jc(-1.0, 3);
  const auto ss = steady_state(l);
  const Operator a = embed(annihilation(3), "mode_z", l.space());
  const auto g = g2_tau(l, ss.rho, a, {0.0, 0.01, 3.0});
  CHECK(std::abs(g[0].g2 / g2_zero(ss.rho, a) - 1.0) < 1e-8);
  CHECK(g[2].g2 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g[1].tau == 0.01);

  // No field in the detected mode.
  const auto s = HilbertSpace::single("mode_z", 3);
  const Liouvillian idle = build_liouvillian(Operator::zero(s), kParams);
  DenseMatrix vac = DenseMatrix::Zero(3, 3);
  vac(0, 0) = 1.0;
  CHECK_THROWS_AS(g2_tau(idle, DensityMatrix(s, vac), embed(annihilation(2), "mode_z", s), {0.0}), NumericalError);
}
