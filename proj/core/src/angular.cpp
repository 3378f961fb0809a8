#include "cqed/angular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace cqed {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void check_pair(Spin j, Spin m, const char* what) {
  if (j.twice < 0) throw std::domain_error(std::string("cg_coefficient: negative spin ") + what);
  if (std::abs(m.twice) > j.twice) throw std::domain_error(std::string("cg_coefficient: |m| > j for ") + what);
  if ((j.twice - m.twice) % 2 != 0) throw std::domain_error(std::string("cg_coefficient: j - m not integral for ") + what);
}

}  // namespace

double cg_coefficient(Spin j1, Spin j2, Spin m1, Spin m2, Spin J, Spin M) {
  check_pair(j1, m1, "(j1, m1)");
  check_pair(j2, m2, "(j2, m2)");
  check_pair(J, M, "(J, M)");
  if (m1.twice + m2.twice != M.twice) return 0.0;
  if (J.twice < std::abs(j1.twice - j2.twice) || J.twice > j1.twice + j2.twice) return 0.0;
  if ((j1.twice + j2.twice + J.twice) % 2 != 0) return 0.0;

  // All arguments below are integers once halved.
  const int a = (j1.twice + j2.twice - J.twice) / 2;  // j1 + j2 - J
  const int b = (j1.twice - m1.twice) / 2;            // j1 - m1
  const int c = (j2.twice + m2.twice) / 2;            // j2 + m2
  const int d = (J.twice - j2.twice + m1.twice) / 2;  // J - j2 + m1
  const int e = (J.twice - j1.twice - m2.twice) / 2;  // J - j1 - m2

  cpp_rational sum = 0;
  const int k_min = std::max({0, -d, -e});
  const int k_max = std::min({a, b, c});
  for (int k = k_min; k <= k_max; ++k) {
    cpp_int denom = factorial(k) * factorial(a - k) * factorial(b - k) * factorial(c - k) * factorial(d + k) *
                    factorial(e + k);
    cpp_rational term(cpp_int(1), denom);
    sum += (k % 2 == 0) ? term : -term;
  }
  if (sum == 0) return 0.0;

  const cpp_int prefactor_num = cpp_int(J.twice + 1) * factorial(a) * factorial((j1.twice - j2.twice + J.twice) / 2) *
                                factorial((-j1.twice + j2.twice + J.twice) / 2) *
                                factorial((j1.twice + m1.twice) / 2) * factorial(b) * factorial(c) *
                                factorial((j2.twice - m2.twice) / 2) * factorial((J.twice + M.twice) / 2) *
                                factorial((J.twice - M.twice) / 2);
  const cpp_int prefactor_den = factorial((j1.twice + j2.twice + J.twice) / 2 + 1);

  const cpp_rational squared = cpp_rational(prefactor_num, prefactor_den) * sum * sum;
  const double magnitude = std::sqrt(static_cast<double>(squared));
  return sum > 0 ? magnitude : -magnitude;
}

double cg_coefficient(int j1, int j2, int m1, int m2, int J, int M) {
  return cg_coefficient(Spin::integer(j1), Spin::integer(j2), Spin::integer(m1), Spin::integer(m2), Spin::integer(J),
                        Spin::integer(M));
}

std::vector<int> AtomicLevelScheme::ground_m() const {
  std::vector<int> m;
  for (int v = -ground_F; v <= ground_F; ++v) m.push_back(v);
  return m;
}

std::vector<int> AtomicLevelScheme::excited_m() const {
  std::vector<int> m;
  for (int v = -excited_F; v <= excited_F; ++v) m.push_back(v);
  return m;
}

int AtomicLevelScheme::ground_index(int m) const {
  if (std::abs(m) > ground_F) throw std::out_of_range("ground_index: |m| > F");
  return m + ground_F;
}

int AtomicLevelScheme::excited_index(int m_prime) const {
  if (std::abs(m_prime) > excited_F) throw std::out_of_range("excited_index: |m'| > F'");
  return ground_count() + m_prime + excited_F;
}

const Operator& DipoleSet::component(int q) const {
  switch (q) {
    case -1: return d_minus;
    case 0: return d_pi;
    case 1: return d_plus;
    default: throw std::invalid_argument("DipoleSet::component: q must be -1, 0 or 1");
  }
}

Operator DipoleSet::excited_projector() const {
  const int n = scheme.dimension();
  SparseMatrix p(n, n);
  for (int m : scheme.excited_m()) p.insert(scheme.excited_index(m), scheme.excited_index(m)) = 1.0;
  return Operator(d_pi.space(), p);
}

DipoleSet build_dipole_set(const AtomicLevelScheme& scheme) {
  if (scheme.ground_F < 0 || scheme.excited_F != scheme.ground_F + 1)
    throw std::invalid_argument("build_dipole_set: only F -> F' = F + 1 schemes are supported");
  const int n = scheme.dimension();
  const auto space = HilbertSpace::single("atom", n, FactorKind::atom, scheme.ground_count());

  auto component = [&](int q) {
    std::vector<Eigen::Triplet<Complex>> t;
    for (int m : scheme.ground_m()) {
      const int mp = m + q;
      if (std::abs(mp) > scheme.excited_F) continue;
      const double c = cg_coefficient(scheme.ground_F, 1, m, q, scheme.excited_F, mp);
      if (c != 0.0) t.emplace_back(scheme.ground_index(m), scheme.excited_index(mp), c);
    }
    SparseMatrix d(n, n);
    d.setFromTriplets(t.begin(), t.end());
    return Operator(space, d);
  };

  DipoleSet set{scheme, component(-1), component(0), component(1), {}};
  set.d_y = Complex(0.0, 1.0 / std::sqrt(2.0)) * (set.d_minus + set.d_plus);
  return set;
}

}  // namespace cqed
