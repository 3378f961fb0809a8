#pragma once

#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

/// Angular momentum quantum number stored as twice its value, so half-integers
/// are exact. `Spin::integer(4)` is j = 4, `Spin::half(3)` is j = 3/2.
struct Spin {
  int twice = 0;

  static constexpr Spin integer(int j) { return Spin{2 * j}; }
  static constexpr Spin half(int twice_j) { return Spin{twice_j}; }
  constexpr double value() const { return 0.5 * twice; }
  friend constexpr bool operator==(Spin, Spin) = default;
};

/// Exact Condon-Shortley Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>.
///
/// The Racah sum is evaluated in exact rational arithmetic; only the final
/// square root is taken in floating point. Returns 0 when M != m1 + m2 or the
/// triangle rule fails. Throws std::domain_error for negative spins, projections
/// outside [-j, j], or projections whose parity does not match their spin.
double cg_coefficient(Spin j1, Spin j2, Spin m1, Spin m2, Spin J, Spin M);

/// Integer-spin convenience overload.
double cg_coefficient(int j1, int j2, int m1, int m2, int J, int M);

/// Ground F and excited F' hyperfine levels of a dipole transition. Level
/// index order is ground m = -F..F first, then excited m' = -F'..F'.
struct AtomicLevelScheme {
  int ground_F = 4;
  int excited_F = 5;

  /// The Cs 6S1/2 F=4 -> 6P3/2 F'=5 scheme.
  static AtomicLevelScheme cesium_d2() { return {}; }

  int ground_count() const { return 2 * ground_F + 1; }
  int excited_count() const { return 2 * excited_F + 1; }
  int dimension() const { return ground_count() + excited_count(); }
  std::vector<int> ground_m() const;
  std::vector<int> excited_m() const;

  int ground_index(int m) const;
  int excited_index(int m_prime) const;
};

/// Lowering dipole operators D_q (excited -> ground) on the atomic factor.
struct DipoleSet {
  AtomicLevelScheme scheme;
  Operator d_minus;  ///< q = -1 (sigma-)
  Operator d_pi;     ///< q = 0
  Operator d_plus;   ///< q = +1 (sigma+)
  Operator d_y;      ///< i/sqrt(2) (D_-1 + D_+1)

  const Operator& component(int q) const;
  /// Projector onto the excited manifold, on the atomic factor.
  Operator excited_projector() const;
};

/// D_q has entry <g, m| D_q |e, m+q> = <F m; 1 q | F' m+q>. Requires F' = F + 1.
DipoleSet build_dipole_set(const AtomicLevelScheme& scheme);

}  // namespace cqed
