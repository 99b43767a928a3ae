#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tribeam::circuitspec {

struct Source {
  double width = 1.0;
  double rate = 1.0;
  bool operator==(const Source&) const = default;
};

struct Splitter {
  std::string id;
  double ratio = 0.5;
  bool operator==(const Splitter&) const = default;
};

struct Mirror {
  std::string id;
  double angle_deg = 45.0;
  bool operator==(const Mirror&) const = default;
};

struct Plc {
  std::string leg;
  double compensation = 0.0;  // added optical path on this leg, in wavelengths
  bool operator==(const Plc&) const = default;
};

struct PhaseShifter {
  std::string leg;
  double phi = 0.0;  // radians
  bool operator==(const PhaseShifter&) const = default;
};

enum class AlicePlacement { DA1, DA2 };

std::string_view to_string(AlicePlacement placement);

/// Parsed interferometer description. Element lists are kept sorted by id,
/// so structurally equal circuits compare equal regardless of statement
/// order in the source text.
struct CircuitSpec {
  Source source;
  std::vector<Splitter> splitters;
  std::vector<Mirror> mirrors;
  std::vector<Plc> plcs;
  std::vector<PhaseShifter> phase_shifters;
  AlicePlacement alice_placement = AlicePlacement::DA2;
  std::string bob_arm = "h";

  /// Angle of the steepest declared mirror pair, the one folding the beams
  /// onto the interference region; 60 degrees when no mirrors are declared.
  double fold_angle_deg() const;
  /// Net relative phase shift of leg a versus leg b, radians.
  double phase_phi() const;
  /// Net compensator path added on `leg`, in wavelengths.
  double plc_compensation(std::string_view leg) const;

  const Splitter* find_splitter(std::string_view id) const;

  /// The named preset `paper-fig1`: width-1 unit-rate source, two 50/50
  /// splitters, default 60-degree fold, movable detector at DA2, Bob on h.
  static CircuitSpec paper_fig1();

  bool operator==(const CircuitSpec&) const = default;
};

struct ParseError {
  int line = 1;    // 1-based
  int column = 1;  // 1-based, start of the offending token
  std::string message;
  std::string offending_token;
};

using ParseResult = std::variant<CircuitSpec, ParseError>;

/// Parses a circuit document: one statement per line, `#` comments, LF or
/// CRLF line endings. Never throws; every malformed input maps to a
/// ParseError positioned at the first violation.
ParseResult parse(std::string_view text);

/// Canonical text form. parse(serialize(s)) == s for every valid spec.
std::string serialize(const CircuitSpec& spec);

struct Violation {
  std::string rule;
  std::string message;
  bool operator==(const Violation&) const = default;
};

/// Physical-setup checks beyond the grammar: unitary element chain,
/// reachable detectors, non-degenerate fold geometry. Empty result means
/// the spec is realizable.
std::vector<Violation> validate(const CircuitSpec& spec);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_number(double value);

}  // namespace tribeam::circuitspec
