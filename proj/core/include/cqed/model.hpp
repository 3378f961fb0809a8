#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "cqed/angular.hpp"
#include "cqed/hilbert.hpp"

namespace cqed {

// Internal units: angular frequency in rad/us, time in us. User-facing values
// are frequencies in MHz (omega / 2 pi) and times in ns.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double from_mhz(double f_mhz) { return kTwoPi * f_mhz; }
inline constexpr double to_mhz(double omega) { return omega / kTwoPi; }
inline constexpr double ns_to_internal(double t_ns) { return t_ns * 1e-3; }
inline constexpr double internal_to_ns(double t) { return t * 1e3; }

/// FORT-induced excited-state shift coefficients for Cs 6P3/2 F'=5, indexed by m' + 5.
inline constexpr std::array<double, 11> kCesiumStarkBeta = {0.18,  0.06,  -0.03, -0.10, -0.14, -0.15,
                                                            -0.14, -0.10, -0.03, 0.06,  0.18};

/// Physical rates and frequency offsets, all angular (rad/us) and measured
/// from a common reference omega_0. kappa and gamma are field/dipole decay
/// rates (half widths).
struct SystemParams {
  double g0 = cqed::from_mhz(50.0);
  double kappa = cqed::from_mhz(1.0);
  double gamma = cqed::from_mhz(1.0);
  double omega_a = 0.0;   ///< unshifted atomic transition
  double omega_cz = 0.0;  ///< z-polarized cavity mode
  double omega_cy = 0.0;  ///< y-polarized cavity mode
  double u0 = 0.0;        ///< FORT depth (signed)
  std::array<double, 11> stark_beta = kCesiumStarkBeta;
  double probe_detuning = 0.0;  ///< omega_p - omega_0

  /// Build from MHz values. delta_omega_c1 = omega_cz - omega_cy; omega_cz = omega_a = 0.
  static SystemParams from_mhz(double g0_mhz, double kappa_mhz, double gamma_mhz, double delta_omega_c1_mhz = 0.0,
                               double u0_mhz = 0.0);

  double birefringent_splitting() const { return omega_cz - omega_cy; }
  /// omega_{m'} = omega_A + U0 beta_{m'}.
  double excited_frequency(int m_prime) const;
  /// Copy with degenerate modes and no Stark shifts.
  SystemParams without_corrections() const;
  SystemParams with_probe_detuning(double detuning) const;

  /// Throws ConfigError when a rate is nonpositive or beta is not symmetric in m'.
  void validate() const;
};

enum class DriveTarget { cavity_z, cavity_y, atom_z };

std::string to_string(DriveTarget t);
DriveTarget drive_target_from_string(const std::string& s);

/// Empty-cavity resonant photon number n0; drive amplitude kappa sqrt(n0).
struct PhotonNumber {
  double n0 = 0.0;
  friend bool operator==(const PhotonNumber&, const PhotonNumber&) = default;
};
/// Two-level saturation parameter s; Rabi frequency gamma sqrt(2 s).
struct Saturation {
  double s = 0.0;
  friend bool operator==(const Saturation&, const Saturation&) = default;
};
/// Coefficient of the drive operator, in rad/us, with no reference normalization.
struct RawAmplitude {
  double value = 0.0;
  friend bool operator==(const RawAmplitude&, const RawAmplitude&) = default;
};

using DriveStrength = std::variant<PhotonNumber, Saturation, RawAmplitude>;

struct DriveConfig {
  DriveTarget target = DriveTarget::cavity_y;
  DriveStrength strength = PhotonNumber{0.05};

  static DriveConfig cavity(DriveTarget target, double n0);
  static DriveConfig atom(double s);

  /// Coefficient multiplying (X + X^dagger): epsilon for cavity drives, Omega / 2 for the atom.
  double coefficient(const SystemParams& params) const;
  void validate() const;
  friend bool operator==(const DriveConfig&, const DriveConfig&) = default;
};

/// Rotating-frame (probe frequency) Hamiltonian of the degenerate two-mode
/// model. Requires omega_cz == omega_cy and no excited-state shifts.
Operator hamiltonian_ideal(const SystemParams& params, const DipoleSet& dipoles, const HilbertSpace& space);

/// Same coupling with per-m' Stark-shifted excited levels and birefringent modes.
Operator hamiltonian_full(const SystemParams& params, const DipoleSet& dipoles, const HilbertSpace& space);

/// Two-level atom coupled to mode_z.
Operator hamiltonian_jc(const SystemParams& params, const HilbertSpace& space);

/// Classical drive term for the multilevel atom / two-mode cavity.
Operator drive_term(const DriveConfig& config, const SystemParams& params, const DipoleSet& dipoles,
                    const HilbertSpace& space);

/// Classical drive term for the Jaynes-Cummings space (cavity_z or atom_z).
Operator drive_term_jc(const DriveConfig& config, const SystemParams& params, const HilbertSpace& space);

/// Resonant excited population of a lone two-level atom, (s/2)/(1+s).
double two_level_excited_population(double s);
/// Saturation parameter giving a resonant excited population p; inverse of the above.
double saturation_for_population(double p);

}  // namespace cqed
