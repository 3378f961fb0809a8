#pragma once

#include <complex>
#include <vector>

namespace cqed {

/// Fock-state transmission model: |n> -> t_n |n> applied to a coherent input |alpha>.
/// Coefficients beyond coeffs.size() are taken as zero.
struct FilterSpec {
  std::vector<std::complex<double>> coeffs;  ///< t_0, t_1, ...
  std::complex<double> alpha = 0.0;
  int n_max = 10;
  bool allow_gain = false;  ///< permit |t_n| > 1

  /// Throws std::invalid_argument on |t_n| > 1 without allow_gain, n_max < 1,
  /// or a Poisson tail above n_max that is not negligible.
  void validate() const;
};

struct PhotonStatistics {
  std::vector<double> p;  ///< p_n, n = 0..n_max
  double mean = 0.0;
  double g2_zero = 0.0;   ///< infinite when the mean vanishes
  std::complex<double> field = 0.0;  ///< <a>
};

struct FilterOutput {
  std::vector<std::complex<double>> amplitudes;  ///< normalized output state
  PhotonStatistics pure;      ///< coherent superposition
  PhotonStatistics dephased;  ///< same populations, coherences removed
  double tail_mass = 0.0;     ///< Poisson weight of |alpha|^2 above n_max
};

/// Poisson probability mass above n_max for mean |alpha|^2.
double poisson_tail(double mean, int n_max);

/// Throws std::invalid_argument when every t_n alpha^n / sqrt(n!) vanishes.
FilterOutput filter_output(const FilterSpec& spec);

struct BlockadeVerdict {
  std::vector<bool> satisfied;  ///< entry i is n = i + 2: |t_n| < |t_1|^n
  bool blockade = false;
  double efficiency = 0.0;  ///< |t_1|^2
};

/// Throws std::invalid_argument when no coefficient for n >= 2 is given.
BlockadeVerdict classify(const FilterSpec& spec);

/// Small-|alpha| limit of g2(0): |t_0|^2 |t_2|^2 / |t_1|^4.
double weak_field_g2(const FilterSpec& spec);

}  // namespace cqed
