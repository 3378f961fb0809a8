#include "cqed/model.hpp"

#include <cmath>
#include <stdexcept>

#include "cqed/error.hpp"

namespace cqed {

namespace {

void require_two_mode_space(const DipoleSet& dipoles, const HilbertSpace& space) {
  if (!space.has("atom") || !space.has("mode_z") || !space.has("mode_y"))
    throw std::invalid_argument("expected an atom x mode_z x mode_y space");
  if (space.factor("atom").dim != dipoles.scheme.dimension())
    throw std::invalid_argument("atom factor dimension does not match the dipole set");
}

Operator mode_operator(const HilbertSpace& space, const std::string& label) {
  return embed(annihilation(space.factor(label).dim - 1), label, space);
}

// Shared by the ideal and full builders: per-m' excited energies, per-mode energies, coupling.
Operator two_mode_hamiltonian(const SystemParams& p, const DipoleSet& dipoles, const HilbertSpace& space) {
  require_two_mode_space(dipoles, space);
  const int n_atom = dipoles.scheme.dimension();
  const double omega_p = p.probe_detuning;

  SparseMatrix atom(n_atom, n_atom);
  for (int m : dipoles.scheme.excited_m()) {
    const double e = p.excited_frequency(m) - omega_p;
    if (e != 0.0) atom.insert(dipoles.scheme.excited_index(m), dipoles.scheme.excited_index(m)) = e;
  }

  const Operator a = mode_operator(space, "mode_z");
  const Operator b = mode_operator(space, "mode_y");
  const Operator dz = embed(dipoles.d_pi, "atom", space);
  const Operator dy = embed(dipoles.d_y, "atom", space);

  Operator h = embed(atom, "atom", space);
  h += Complex(p.omega_cz - omega_p) * (a.adjoint() * a);
  h += Complex(p.omega_cy - omega_p) * (b.adjoint() * b);
  const Operator coupling = a.adjoint() * dz + b.adjoint() * dy;
  h += Complex(p.g0) * (coupling + coupling.adjoint());
  return h;
}

}  // namespace

SystemParams SystemParams::from_mhz(double g0_mhz, double kappa_mhz, double gamma_mhz, double delta_omega_c1_mhz,
                                    double u0_mhz) {
  SystemParams p;
  p.g0 = cqed::from_mhz(g0_mhz);
  p.kappa = cqed::from_mhz(kappa_mhz);
  p.gamma = cqed::from_mhz(gamma_mhz);
  p.omega_a = 0.0;
  p.omega_cz = 0.0;
  p.omega_cy = -cqed::from_mhz(delta_omega_c1_mhz);
  p.u0 = cqed::from_mhz(u0_mhz);
  return p;
}

double SystemParams::excited_frequency(int m_prime) const {
  if (std::abs(m_prime) > 5) throw std::out_of_range("excited_frequency: |m'| > 5");
  return omega_a + u0 * stark_beta[static_cast<std::size_t>(m_prime + 5)];
}

SystemParams SystemParams::without_corrections() const {
  SystemParams p = *this;
  p.omega_cy = p.omega_cz;
  p.u0 = 0.0;
  return p;
}

SystemParams SystemParams::with_probe_detuning(double detuning) const {
  SystemParams p = *this;
  p.probe_detuning = detuning;
  return p;
}

void SystemParams::validate() const {
  if (!(g0 > 0.0)) throw ConfigError("g0 must be > 0");
  if (!(kappa > 0.0)) throw ConfigError("kappa must be > 0");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  for (int m = 1; m <= 5; ++m)
    if (stark_beta[static_cast<std::size_t>(5 + m)] != stark_beta[static_cast<std::size_t>(5 - m)])
      throw ConfigError("stark_beta must be symmetric in m'");
}

std::string to_string(DriveTarget t) {
  switch (t) {
    case DriveTarget::cavity_z: return "cavity_z";
    case DriveTarget::cavity_y: return "cavity_y";
    case DriveTarget::atom_z: return "atom_z";
  }
  return "?";
}

DriveTarget drive_target_from_string(const std::string& s) {
  if (s == "cavity_z") return DriveTarget::cavity_z;
  if (s == "cavity_y") return DriveTarget::cavity_y;
  if (s == "atom_z") return DriveTarget::atom_z;
  throw ConfigError("unknown drive target '" + s + "' (expected cavity_z, cavity_y or atom_z)");
}

DriveConfig DriveConfig::cavity(DriveTarget target, double n0) {
  if (target == DriveTarget::atom_z) throw std::invalid_argument("DriveConfig::cavity: target must be a cavity mode");
  return DriveConfig{target, PhotonNumber{n0}};
}

DriveConfig DriveConfig::atom(double s) { return DriveConfig{DriveTarget::atom_z, Saturation{s}}; }

void DriveConfig::validate() const {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PhotonNumber>) {
          if (!(v.n0 > 0.0)) throw ConfigError("drive n0 must be > 0");
        } else if constexpr (std::is_same_v<T, Saturation>) {
          if (!(v.s > 0.0)) throw ConfigError("drive saturation parameter s must be > 0");
        } else {
          if (!(v.value > 0.0)) throw ConfigError("raw drive amplitude must be > 0");
        }
      },
      strength);
}

double DriveConfig::coefficient(const SystemParams& params) const {
  validate();
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PhotonNumber>) {
          return params.kappa * std::sqrt(v.n0);
        } else if constexpr (std::is_same_v<T, Saturation>) {
          return 0.5 * params.gamma * std::sqrt(2.0 * v.s);
        } else {
          return v.value;
        }
      },
      strength);
}

Operator hamiltonian_ideal(const SystemParams& params, const DipoleSet& dipoles, const HilbertSpace& space) {
  if (params.omega_cz != params.omega_cy)
    throw std::invalid_argument("hamiltonian_ideal: cavity modes must be degenerate");
  for (int m : dipoles.scheme.excited_m())
    if (params.excited_frequency(m) != params.omega_a)
      throw std::invalid_argument("hamiltonian_ideal: excited-state shifts must vanish");
  return two_mode_hamiltonian(params, dipoles, space);
}

Operator hamiltonian_full(const SystemParams& params, const DipoleSet& dipoles, const HilbertSpace& space) {
  return two_mode_hamiltonian(params, dipoles, space);
}

Operator hamiltonian_jc(const SystemParams& params, const HilbertSpace& space) {
  if (!space.has("atom") || !space.has("mode_z") || space.factor("atom").dim != 2)
    throw std::invalid_argument("hamiltonian_jc: expected a two-level atom x mode_z space");
  SparseMatrix sigma(2, 2);
  sigma.insert(0, 1) = 1.0;
  SparseMatrix excited(2, 2);
  excited.insert(1, 1) = 1.0;

  const Operator a = mode_operator(space, "mode_z");
  const Operator s = embed(sigma, "atom", space);
  Operator h = Complex(params.omega_a - params.probe_detuning) * embed(excited, "atom", space);
  h += Complex(params.omega_cz - params.probe_detuning) * (a.adjoint() * a);
  const Operator coupling = a.adjoint() * s;
  h += Complex(params.g0) * (coupling + coupling.adjoint());
  return h;
}

Operator drive_term(const DriveConfig& config, const SystemParams& params, const DipoleSet& dipoles,
                    const HilbertSpace& space) {
  require_two_mode_space(dipoles, space);
  const double c = config.coefficient(params);
  Operator x;
  switch (config.target) {
    case DriveTarget::cavity_z: x = mode_operator(space, "mode_z"); break;
    case DriveTarget::cavity_y: x = mode_operator(space, "mode_y"); break;
    case DriveTarget::atom_z: x = embed(dipoles.d_pi, "atom", space); break;
  }
  return Complex(c) * (x + x.adjoint());
}

Operator drive_term_jc(const DriveConfig& config, const SystemParams& params, const HilbertSpace& space) {
  const double c = config.coefficient(params);
  Operator x;
  switch (config.target) {
    case DriveTarget::cavity_z: x = mode_operator(space, "mode_z"); break;
    case DriveTarget::atom_z: {
      SparseMatrix sigma(2, 2);
      sigma.insert(0, 1) = 1.0;
      x = embed(sigma, "atom", space);
      break;
    }
    case DriveTarget::cavity_y: throw std::invalid_argument("drive_term_jc: the Jaynes-Cummings system has no y mode");
  }
  return Complex(c) * (x + x.adjoint());
}

double two_level_excited_population(double s) { return 0.5 * s / (1.0 + s); }

double saturation_for_population(double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("saturation_for_population: p must lie in (0, 1/2)");
  return 2.0 * p / (1.0 - 2.0 * p);
}

}  // namespace cqed
