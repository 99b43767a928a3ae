#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tribeam/circuitspec.hpp"
#include "tribeam/hilbert.hpp"

namespace tribeam::optics {

/// Beam cross-section bookkeeping. The interference region is wider than the
/// source beam by the secant of the wavefront tilt, and the linear amplitude
/// density of a top-hat beam of width w is 1/sqrt(w), so that
/// lambda^2 * w = 1 identically.
struct BeamGeometry {
  double width;
  double fold_angle_deg;
  double width_prime;   // w * sec(90 deg - fold angle)
  double lambda;        // 1 / sqrt(w)
  double lambda_prime;  // 1 / sqrt(w')

  /// Throws ConfigurationError unless w > 0 and the fold angle lies strictly
  /// inside (45, 90) degrees; at the boundary the region degenerates.
  static BeamGeometry from(double width, double fold_angle_deg);
  static BeamGeometry from_circuit(const circuitspec::CircuitSpec& spec);
};

/// Weak-source field state |vac> + epsilon * sum_X c_X |X>, the at-most-one-
/// photon approximation. `relative_amplitudes` holds the c_X on the beam
/// basis; for the two-50/50-splitter circuit they are (1, 1, sqrt 2).
struct WeakSourceState {
  double epsilon = 0.01;
  hilbert::StateVector relative_amplitudes;

  /// Builds c = 2 * psi from a normalized output state, which undoes the two
  /// splitter factors on the doubly split legs and makes the total squared
  /// relative amplitude equal 4 for every unitary circuit. The input photon
  /// rate then corresponds to 4 epsilon^2 regardless of splitter ratios.
  static WeakSourceState from_output_state(const hilbert::StateVector& psi,
                                           double epsilon = 0.01);
};

enum class DetectorPlacement { DA1, DA2 };

/// Optical path bookkeeping for the detector plane.
struct PathConfig {
  double wavenumber = 0.0;
  std::map<std::string, double> path_lengths;  // leg label -> distance to detector
  double extra_phase = 0.0;                    // phase shifter on leg a, radians

  /// Leg lengths equal modulo a whole number of wavelengths.
  bool is_plc_compensated(double tol = hilbert::kDefaultTol) const;

  /// Unit-wavelength compensated paths (r_a = r_b), optional shifter phase.
  static PathConfig compensated(double extra_phase = 0.0);
  static PathConfig from_circuit(const circuitspec::CircuitSpec& spec);
};

/// Mode-space state of a photon leaving the splitter chain, on the beam
/// basis {a, b, h}. Leg phases are not part of the output state; they enter
/// through the detector field modes. For the two-50/50 layout the
/// amplitudes are exactly (1/2, 1/2, 1/sqrt 2).
/// Throws ConfigurationError when BS1 is absent or a ratio is non-unitary.
hilbert::StateVector build_output_state(const circuitspec::CircuitSpec& spec);

/// Field modes seen by the movable detector, global phases dropped.
/// DA1 registers the legs separately: {|a>, |b>}. DA2 superposes them into
/// the single unnormalized mode e^{i(k dr + phi)}|a> + |b>, which requires
/// both legs to be routed (ConfigurationError otherwise).
std::vector<hilbert::StateVector> detector_field_modes(DetectorPlacement placement,
                                                       const PathConfig& config);

/// Count rate at a detector whose field mode is `field`: the intensity
/// integrated over the detector width. Under the top-hat idealization the
/// amplitude density squared times the width is 1, so the result reduces to
/// epsilon^2 |<field|c>|^2 and `width` only participates as a contract.
double first_order_correlation(const WeakSourceState& state, const hilbert::StateVector& field,
                               double width);

}  // namespace tribeam::optics
