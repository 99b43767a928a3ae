#include "tribeam/optics.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace tribeam::optics {

using hilbert::Complex;
using hilbert::ModeBasis;
using hilbert::StateVector;
using hilbert::Vector;

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

BeamGeometry BeamGeometry::from(double width, double fold_angle_deg) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw ConfigurationError("beam width must be a positive finite length");
  }
  if (!(fold_angle_deg > 45.0 && fold_angle_deg < 90.0)) {
    throw ConfigurationError(
        "fold angle " + circuitspec::format_number(fold_angle_deg) +
        " degrees degenerates the interference region (must lie strictly inside (45, 90))");
  }
  const double tilt = (90.0 - fold_angle_deg) * kDegToRad;
  const double width_prime = width / std::cos(tilt);
  return {width, fold_angle_deg, width_prime, 1.0 / std::sqrt(width),
          1.0 / std::sqrt(width_prime)};
}

BeamGeometry BeamGeometry::from_circuit(const circuitspec::CircuitSpec& spec) {
  return from(spec.source.width, spec.fold_angle_deg());
}

WeakSourceState WeakSourceState::from_output_state(const StateVector& psi, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigurationError("source strength epsilon must be positive and finite");
  }
  return {epsilon, Complex(2.0) * psi};
}

bool PathConfig::is_plc_compensated(double tol) const {
  const auto a = path_lengths.find("a");
  const auto b = path_lengths.find("b");
  if (a == path_lengths.end() || b == path_lengths.end()) return false;
  const double cycles = wavenumber * (a->second - b->second) / (2.0 * std::numbers::pi);
  return std::abs(cycles - std::round(cycles)) <= tol;
}

PathConfig PathConfig::compensated(double extra_phase) {
  PathConfig cfg;
  cfg.wavenumber = 2.0 * std::numbers::pi;  // unit wavelength
  cfg.path_lengths = {{"a", 1.0}, {"b", 1.0}, {"h", 1.0}};
  cfg.extra_phase = extra_phase;
  return cfg;
}

PathConfig PathConfig::from_circuit(const circuitspec::CircuitSpec& spec) {
  PathConfig cfg = compensated(spec.phase_phi());
  cfg.path_lengths["a"] += spec.plc_compensation("a");
  cfg.path_lengths["b"] += spec.plc_compensation("b");
  return cfg;
}

hilbert::StateVector build_output_state(const circuitspec::CircuitSpec& spec) {
  const auto* bs1 = spec.find_splitter("BS1");
  if (bs1 == nullptr) {
    throw ConfigurationError("circuit has no splitter BS1; no output state exists");
  }
  const auto* bs2 = spec.find_splitter("BS2");
  for (const auto& s : spec.splitters) {
    if (!(s.ratio > 0.0 && s.ratio < 1.0)) {
      throw ConfigurationError("splitter " + s.id + " has non-unitary ratio " +
                               circuitspec::format_number(s.ratio));
    }
  }
  const double upper = bs1->ratio;  // power fraction routed toward BS2
  Vector amps(3);
  if (bs2 != nullptr) {
    amps << Complex(std::sqrt(upper * bs2->ratio)),
        Complex(std::sqrt(upper * (1.0 - bs2->ratio))), Complex(std::sqrt(1.0 - upper));
  } else {
    amps << Complex(std::sqrt(upper)), Complex(0.0), Complex(std::sqrt(1.0 - upper));
  }
  return {ModeBasis::beams(), std::move(amps)};
}

std::vector<StateVector> detector_field_modes(DetectorPlacement placement,
                                              const PathConfig& config) {
  const auto basis = ModeBasis::beams();
  if (placement == DetectorPlacement::DA1) {
    return {StateVector::basis_state(basis, "a"), StateVector::basis_state(basis, "b")};
  }
  const auto a = config.path_lengths.find("a");
  const auto b = config.path_lengths.find("b");
  if (a == config.path_lengths.end() || b == config.path_lengths.end()) {
    throw ConfigurationError("placement DA2 requires both legs a and b to be routed");
  }
  const double relative = config.wavenumber * (a->second - b->second) + config.extra_phase;
  Vector amps = Vector::Zero(3);
  amps(basis.index_of("a")) = std::polar(1.0, relative);
  amps(basis.index_of("b")) = Complex(1.0);
  return {StateVector(basis, std::move(amps))};
}

double first_order_correlation(const WeakSourceState& state, const StateVector& field,
                               double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw ConfigurationError("detector width must be positive and finite");
  }
  // density^2 * width = 1 for the top-hat profile, so the z-integral is
  // exactly the squared overlap scaled by the source strength.
  const Complex overlap = hilbert::inner_product(field, state.relative_amplitudes);
  return state.epsilon * state.epsilon * std::norm(overlap);
}

}  // namespace tribeam::optics
