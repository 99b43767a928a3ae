#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tribeam/circuitspec.hpp"

namespace tribeam::report {

inline constexpr std::string_view kToolName = "tribeam";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kGeneratorName = "philox4x32-10";

/// Reports use insertion-ordered JSON with shortest-round-trip floats, so a
/// rerun with identical flags and seed is byte-identical and diffable.
using Json = nlohmann::ordered_json;

struct SimulateOptions {
  std::uint64_t n = 100000;
  std::uint64_t seed = 0;
};

/// Full analytic + Monte Carlo report for the placement configured in the
/// spec. Every report embeds the renormalization factor and the
/// completeness deviation of the active model; DA2 reports additionally
/// carry the conservation audit.
Json simulation_report(const circuitspec::CircuitSpec& spec, const SimulateOptions& options);

struct SweepOptions {
  std::vector<double> phis;
  std::uint64_t n_per_point = 100000;
  std::uint64_t seed = 0;
};

std::string sweep_csv(const circuitspec::CircuitSpec& spec, const SweepOptions& options);
Json sweep_report(const circuitspec::CircuitSpec& spec, const SweepOptions& options);

Json doubleslit_report(const circuitspec::CircuitSpec& spec, int n_points);

struct DoubleslitCsv {
  std::string table;
  double integrated_weight;
};

DoubleslitCsv doubleslit_csv(const circuitspec::CircuitSpec& spec, int n_points);

struct SignalOptions {
  std::string bits;  // '0' = complete basis, '1' = coherent incomplete basis
  std::uint64_t n_per_bit = 10000;
  std::uint64_t seed = 0;
};

Json signal_report(const circuitspec::CircuitSpec& spec, const SignalOptions& options);
std::string signal_csv(const circuitspec::CircuitSpec& spec, const SignalOptions& options);

/// "path:line:column: error: message near 'token'".
std::string render_parse_error(std::string_view path, const circuitspec::ParseError& error);
std::string render_violations(std::string_view path,
                              const std::vector<circuitspec::Violation>& violations);

/// Parses "start:stop:count" into a left-closed grid of count points.
/// Throws ConfigurationError on malformed text, count < 1 or a non-finite
/// range.
std::vector<double> parse_phi_grid(std::string_view text);

}  // namespace tribeam::report
