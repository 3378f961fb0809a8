#include "cqed/fock_filter.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/poisson.hpp>

namespace cqed {

namespace {

std::complex<double> coeff(const FilterSpec& spec, int n) {
  return n < static_cast<int>(spec.coeffs.size()) ? spec.coeffs[n] : std::complex<double>(0.0);
}

PhotonStatistics statistics(const std::vector<double>& p, std::complex<double> field) {
  PhotonStatistics s;
  s.p = p;
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    m1 += n * p[n];
    m2 += n * (n - 1.0) * p[n];
  }
  s.mean = m1;
  s.g2_zero = m1 > 0.0 ? m2 / (m1 * m1) : std::numeric_limits<double>::infinity();
  s.field = field;
  return s;
}

}  // namespace

double poisson_tail(double mean, int n_max) {
  if (mean < 0.0 || n_max < 0) throw std::invalid_argument("poisson_tail: invalid arguments");
  if (mean == 0.0) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::poisson_distribution<double>(mean), n_max));
}

void FilterSpec::validate() const {
  if (n_max < 1) throw std::invalid_argument("FilterSpec: n_max must be >= 1");
  if (coeffs.empty()) throw std::invalid_argument("FilterSpec: no transmission coefficients");
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (!std::isfinite(coeffs[n].real()) || !std::isfinite(coeffs[n].imag()))
      throw std::invalid_argument("FilterSpec: t_" + std::to_string(n) + " is not finite");
    if (!allow_gain && std::abs(coeffs[n]) > 1.0)
      throw std::invalid_argument("FilterSpec: |t_" + std::to_string(n) + "| > 1 (set allow_gain to permit)");
  }
  const double tail = poisson_tail(std::norm(alpha), n_max);
  if (tail >= 1e-12)
    throw std::invalid_argument("FilterSpec: Poisson tail above n_max is " + std::to_string(tail) +
                                "; raise n_max");
}

FilterOutput filter_output(const FilterSpec& spec) {
  spec.validate();
  FilterOutput out;
  out.tail_mass = poisson_tail(std::norm(spec.alpha), spec.n_max);
  std::vector<std::complex<double>> c(spec.n_max + 1);
  std::complex<double> power = 1.0;
  double inv_sqrt_fact = 1.0;
  double norm2 = 0.0;
  for (int n = 0; n <= spec.n_max; ++n) {
    if (n > 0) {
      power *= spec.alpha;
      inv_sqrt_fact /= std::sqrt(static_cast<double>(n));
    }
    c[n] = coeff(spec, n) * power * inv_sqrt_fact;
    norm2 += std::norm(c[n]);
  }
  if (!(norm2 > 0.0)) throw std::invalid_argument("filter_output: output state vanishes");
  const double scale = 1.0 / std::sqrt(norm2);
  std::vector<double> p(c.size());
  std::complex<double> field = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    c[n] *= scale;
    p[n] = std::norm(c[n]);
    if (n > 0) field += std::sqrt(static_cast<double>(n)) * std::conj(c[n - 1]) * c[n];
  }
  out.amplitudes = c;
  out.pure = statistics(p, field);
  out.dephased = statistics(p, 0.0);
  return out;
}

BlockadeVerdict classify(const FilterSpec& spec) {
  if (spec.coeffs.size() < 3) throw std::invalid_argument("classify: coefficients for n >= 2 are required");
  BlockadeVerdict v;
  const double t1 = std::abs(spec.coeffs[1]);
  v.efficiency = t1 * t1;
  v.blockade = true;
  for (std::size_t n = 2; n < spec.coeffs.size(); ++n) {
    const bool ok = std::abs(spec.coeffs[n]) < std::pow(t1, static_cast<double>(n));
    v.satisfied.push_back(ok);
    v.blockade = v.blockade && ok;
  }
  return v;
}

double weak_field_g2(const FilterSpec& spec) {
  const double t0 = std::abs(coeff(spec, 0));
  const double t1 = std::abs(coeff(spec, 1));
  const double t2 = std::abs(coeff(spec, 2));
  if (!(t1 > 0.0)) throw std::invalid_argument("weak_field_g2: t_1 must be nonzero");
  return t0 * t0 * t2 * t2 / (t1 * t1 * t1 * t1);
}

}  // namespace cqed
