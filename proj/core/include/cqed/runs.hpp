#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cqed/config.hpp"
#include "cqed/fock_filter.hpp"
#include "cqed/ladder.hpp"

namespace cqed {

/// One detected quantity from one steady-state solve.
struct Detection {
  double transmission = std::numeric_limits<double>::quiet_NaN();
  double g2_zero = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  std::string method;
  std::string error;  ///< empty on success
  bool ok() const { return error.empty(); }
};

/// zz and yz follow g2_{drive,detect} for cavity-driven spectra and name only the
/// detected mode (z, y) for atom-driven spectra.
struct SweepRow {
  double detuning_over_g0 = 0.0;
  Detection zz;
  Detection yz;
  bool has_yz = true;  ///< false for the Jaynes-Cummings system
  std::string flags() const;
  bool failed() const;  ///< every requested solve failed
};

struct SweepTable {
  std::string kind;
  std::vector<SweepRow> rows;
  int failed_points() const;
};

struct TauResult {
  double detuning_over_g0 = 0.0;
  Detection steady;
  std::vector<G2Point> points;  ///< tau in ns
  std::optional<double> first_crossing_ns;  ///< first tau > 0 with g2 >= 1, linearly interpolated
};

struct ConvergenceResult {
  double detuning_over_g0 = 0.0;
  int n_z = 0, n_y = 0;
  int n_z_raised = 0, n_y_raised = 0;
  double g2_base = 0.0;
  double g2_raised = 0.0;
  double relative_change = 0.0;
  double threshold = 0.0;
  bool converged = false;
};

struct FilterResult {
  FilterSpec spec;
  FilterOutput output;
  std::optional<BlockadeVerdict> verdict;
  double weak_field_g2 = std::numeric_limits<double>::quiet_NaN();
};

/// Full (drive + system) Hamiltonian for the configured system at one probe detuning.
Operator build_hamiltonian(const RunConfig& config, const HilbertSpace& space, const DriveConfig& drive,
                           double detuning_over_g0);
HilbertSpace build_space(const RunConfig& config, int n_z, int n_y);

/// Eigenvalue factors of manifolds 0..eigen.max_n of the resonant undriven Hamiltonian.
std::vector<EigenReport> run_eigen(const RunConfig& config);

/// Cavity drive on z and on y, detecting z, at every sweep point.
SweepTable run_spectrum(const RunConfig& config);

/// Atom drive, detecting z and y, normalized to s/2.
SweepTable run_atom_drive(const RunConfig& config);

/// g2(tau) of mode z with the configured drive at probe_detuning_over_g0.
TauResult run_g2tau(const RunConfig& config);

/// g2_yz(0) (g2 of mode z for the jc system) at fock cutoffs and cutoffs + 1.
ConvergenceResult run_convergence_check(const RunConfig& config);

FilterResult run_filter(const RunConfig& config);

void write_eigen(std::ostream& out, const RunConfig& config, const std::vector<EigenReport>& reports);
void write_sweep(std::ostream& out, const RunConfig& config, const SweepTable& table);
void write_tau(std::ostream& out, const RunConfig& config, const TauResult& result);
void write_convergence(std::ostream& out, const RunConfig& config, const ConvergenceResult& result);
/// Always JSON.
void write_filter(std::ostream& out, const RunConfig& config, const FilterResult& result);

/// Run fn(i) for i in [0, count) on `workers` threads (0: hardware concurrency).
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace cqed
