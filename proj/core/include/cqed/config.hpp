#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cqed/dynamics.hpp"
#include "cqed/fock_filter.hpp"
#include "cqed/model.hpp"

namespace cqed {

enum class SystemKind { ideal, full, jc };

std::string to_string(SystemKind k);
SystemKind system_kind_from_string(const std::string& s);

/// Evenly spaced grid including both ends; a single point sits at `start`.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int points = 1;

  std::vector<double> values() const;
  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Complete description of a run. Frequencies are MHz (omega / 2 pi), times ns.
struct RunConfig {
  SystemKind system = SystemKind::ideal;

  double g0_mhz = 50.0;
  double kappa_mhz = 1.0;
  double gamma_mhz = 1.0;
  double delta_omega_c1_mhz = 0.0;
  double u0_mhz = 0.0;

  /// A raw amplitude is given in MHz here; drive_config() converts it.
  DriveConfig drive = DriveConfig::cavity(DriveTarget::cavity_y, 0.05);

  Grid sweep{-2.0, 2.0, 81};               ///< probe detuning / g0
  double probe_detuning_over_g0 = -1.0;    ///< single-point runs (g2tau, convergence-check)
  int n_z = 2;
  int n_y = 2;
  Grid tau_grid_ns{0.0, 300.0, 301};

  int eigen_max_n = 2;
  double eigen_cluster_tol = 1e-6;

  double convergence_threshold = 0.02;

  std::vector<std::complex<double>> filter_coeffs{1.0, 0.1, 0.0};
  std::complex<double> filter_alpha = 0.1;
  int filter_n_max = 10;
  bool filter_allow_gain = false;

  SteadyStateMethod solver = SteadyStateMethod::automatic;
  double residual_tol = 1e-10;

  std::string output_path;  ///< empty: standard output
  std::string output_format = "csv";
  int workers = 0;          ///< 0: hardware concurrency

  SystemParams system_params() const;
  DriveConfig drive_config() const;
  FilterSpec filter_spec() const;
  /// Throws ConfigError on any inconsistency.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);

/// Apply "dotted.key=value" to a JSON document. The value is parsed as JSON
/// when possible and taken as a string otherwise; null removes the key.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Read a JSON file (or nothing, for an empty path), apply overrides, parse and validate.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace cqed
