#include "cqed/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "cqed/error.hpp"

namespace cqed {

double mean_photons(const DensityMatrix& rho, const Operator& mode_op) {
  return rho.expectation(mode_op.adjoint() * mode_op).real();
}

Complex mean_field(const DensityMatrix& rho, const Operator& mode_op) { return rho.expectation(mode_op); }

double g2_zero(const DensityMatrix& rho, const Operator& mode_op) {
  const Operator ad = mode_op.adjoint();
  const double n = rho.expectation(ad * mode_op).real();
  if (!(n > 0.0)) throw NumericalError("g2_zero: mean photon number is zero");
  const double pairs = rho.expectation(ad * ad * mode_op * mode_op).real();
  return std::max(pairs, 0.0) / (n * n);
}

double transmission(const DensityMatrix& rho, const Operator& mode_op, const DriveConfig& drive) {
  const double n = mean_photons(rho, mode_op);
  if (const auto* p = std::get_if<PhotonNumber>(&drive.strength)) return n / p->n0;
  if (const auto* s = std::get_if<Saturation>(&drive.strength)) return n / (0.5 * s->s);
  throw std::invalid_argument("transmission: a raw-amplitude drive has no normalization reference");
}

SpectrumPoint spectrum_point(const DensityMatrix& rho, const std::string& detect_mode, const DriveConfig& drive,
                             double probe_detuning_over_g0) {
  const HilbertSpace& space = rho.space();
  const Operator a = embed(annihilation(space.factor(detect_mode).dim - 1), detect_mode, space);
  SpectrumPoint p;
  p.probe_detuning_over_g0 = probe_detuning_over_g0;
  p.transmission = transmission(rho, a, drive);
  p.g2_zero = g2_zero(rho, a);
  p.drive_target = drive.target;
  p.detect_mode = detect_mode;
  return p;
}

}  // namespace cqed
