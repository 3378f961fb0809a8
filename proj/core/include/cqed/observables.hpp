#pragma once

#include <string>

#include "cqed/dynamics.hpp"
#include "cqed/model.hpp"

namespace cqed {

/// <a^H a>.
double mean_photons(const DensityMatrix& rho, const Operator& mode_op);

/// <a>.
Complex mean_field(const DensityMatrix& rho, const Operator& mode_op);

/// <a^H a^H a a> / <a^H a>^2. Throws NumericalError when <a^H a> = 0.
double g2_zero(const DensityMatrix& rho, const Operator& mode_op);

/// Detected photon number normalized to the drive reference: n0 for a cavity
/// drive, s/2 for an atom drive. A raw-amplitude drive has no reference and throws.
double transmission(const DensityMatrix& rho, const Operator& mode_op, const DriveConfig& drive);

struct SpectrumPoint {
  double probe_detuning_over_g0 = 0.0;
  double transmission = 0.0;
  double g2_zero = 0.0;
  DriveTarget drive_target = DriveTarget::cavity_y;
  std::string detect_mode = "mode_z";
};

/// Transmission and g2(0) of `detect_mode` in the steady state.
SpectrumPoint spectrum_point(const DensityMatrix& rho, const std::string& detect_mode, const DriveConfig& drive,
                             double probe_detuning_over_g0);

}  // namespace cqed
