#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cqed/angular.hpp"
#include "oracles.hpp"

using namespace cqed;

TEST_CASE("cg matches the lowering-operator table") {
  for (auto [tj1, tj2] : {std::pair{8, 2}, {1, 1}, {3, 2}, {4, 4}, {5, 3}, {2, 7}}) {
    const oracle::ClebschGordanTable ref(tj1, tj2);
    for (int tJ = std::abs(tj1 - tj2); tJ <= tj1 + tj2; tJ += 2)
      for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2)
        for (int tm2 = -tj2; tm2 <= tj2; tm2 += 2) {
          const int tM = tm1 + tm2;
          if (std::abs(tM) > tJ) continue;
          CAPTURE(tj1);
          CAPTURE(tj2);
          CAPTURE(tJ);
          CAPTURE(tm1);
          CAPTURE(tm2);
          CHECK(cg_coefficient(Spin{tj1}, Spin{tj2}, Spin{tm1}, Spin{tm2}, Spin{tJ}, Spin{tM}) ==
                doctest::Approx(ref(tm1, tm2, tJ, tM)).epsilon(1e-12));
        }
  }
}

TEST_CASE("cg point values") {
  CHECK(cg_coefficient(4, 1, 4, 1, 5, 5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cg_coefficient(4, 1, 4, -1, 5, 5) == 0.0);
  CHECK(cg_coefficient(4, 1, 0, 0, 5, 0) == doctest::Approx(std::sqrt(5.0) / 3.0).epsilon(1e-15));
  CHECK(cg_coefficient(4, 1, 0, 0, 5, 0) == doctest::Approx(0.74536).epsilon(1e-5));
  // triangle rule fails
  CHECK(cg_coefficient(4, 1, 0, 0, 2, 0) == 0.0);
  CHECK(cg_coefficient(Spin::half(1), Spin::half(1), Spin::half(1), Spin::half(-1), Spin::integer(0),
                       Spin::integer(0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("cg rejects invalid arguments") {
  CHECK_THROWS_AS(cg_coefficient(4, 1, 5, 0, 5, 5), std::domain_error);
  CHECK_THROWS_AS(cg_coefficient(-1, 1, 0, 0, 1, 0), std::domain_error);
  CHECK_THROWS_AS(cg_coefficient(4, 1, 0, 0, 5, 6), std::domain_error);
  // m parity must follow j
  CHECK_THROWS_AS(cg_coefficient(Spin::integer(4), Spin::integer(1), Spin::half(1), Spin::integer(0),
                                 Spin::integer(5), Spin::half(1)),
                  std::domain_error);
}

TEST_CASE("cg table is orthogonal") {
  // Rows (J, M) and columns (m1, m2) of the 4 x 1 coupling matrix.
  std::vector<std::pair<int, int>> jm, prod;
  for (int J = 3; J <= 5; ++J)
    for (int M = -J; M <= J; ++M) jm.emplace_back(J, M);
  for (int m1 = -4; m1 <= 4; ++m1)
    for (int m2 = -1; m2 <= 1; ++m2) prod.emplace_back(m1, m2);
  REQUIRE(jm.size() == prod.size());
  Eigen::MatrixXd c(jm.size(), prod.size());
  for (std::size_t r = 0; r < jm.size(); ++r)
    for (std::size_t k = 0; k < prod.size(); ++k)
      c(r, k) = cg_coefficient(4, 1, prod[k].first, prod[k].second, jm[r].first, jm[r].second);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(jm.size(), jm.size());
  CHECK((c * c.transpose() - id).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((c.transpose() * c - id).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("level scheme") {
  const auto s = AtomicLevelScheme::cesium_d2();
  CHECK(s.ground_count() == 9);
  CHECK(s.excited_count() == 11);
  CHECK(s.dimension() == 20);
  CHECK(s.ground_m().front() == -4);
  CHECK(s.excited_m().back() == 5);
  CHECK(s.ground_index(-4) == 0);
  CHECK(s.excited_index(-5) == 9);
  CHECK(s.excited_index(5) == 19);
}

TEST_CASE("dipole operators") {
  const auto s = AtomicLevelScheme::cesium_d2();
  const DipoleSet d = build_dipole_set(s);

  SUBCASE("entries follow the coupling coefficients") {
    for (int q = -1; q <= 1; ++q) {
      const DenseMatrix m = d.component(q).dense();
      for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 20; ++c) {
          double expected = 0.0;
          if (r < 9 && c >= 9) {
            const int mg = r - 4, me = c - 14;
            if (me == mg + q) expected = cg_coefficient(4, 1, mg, q, 5, me);
          }
          CHECK(std::abs(m(r, c) - expected) < 1e-15);
        }
    }
  }

  SUBCASE("cycling transition") {
    Eigen::VectorXcd e5 = Eigen::VectorXcd::Zero(20);
    e5[s.excited_index(5)] = 1.0;
    const Eigen::VectorXcd out = d.d_plus.dense() * e5;
    CHECK(std::abs(out[s.ground_index(4)] - 1.0) < 1e-15);
    CHECK(out.norm() == doctest::Approx(1.0));
    CHECK((d.d_pi.dense() * e5).norm() == 0.0);
  }

  SUBCASE("completeness") {
    DenseMatrix sum = DenseMatrix::Zero(20, 20);
    for (int q = -1; q <= 1; ++q) sum += d.component(q).dense().adjoint() * d.component(q).dense();
    CHECK((sum - d.excited_projector().dense()).cwiseAbs().maxCoeff() < 1e-12);
    for (int me = -5; me <= 5; ++me) {
      double total = 0.0;
      for (int q = -1; q <= 1; ++q) {
        const double c = std::abs(me - q) <= 4 ? cg_coefficient(4, 1, me - q, q, 5, me) : 0.0;
        total += c * c;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("d_y") {
    const DenseMatrix expected =
        Complex(0.0, 1.0 / std::sqrt(2.0)) * (d.d_minus.dense() + d.d_plus.dense());
    CHECK((d.d_y.dense() - expected).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("two-mode emission is bounded by the excited projector") {
    const DenseMatrix dz = d.d_pi.dense(), dy = d.d_y.dense();
    const DenseMatrix diff = d.excited_projector().dense() - dy.adjoint() * dy - dz.adjoint() * dz;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(diff);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
}
