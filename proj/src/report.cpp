#include "tribeam/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "tribeam/hilbert.hpp"
#include "tribeam/measurement.hpp"
#include "tribeam/montecarlo.hpp"
#include "tribeam/optics.hpp"

namespace tribeam::report {

using circuitspec::AlicePlacement;
using circuitspec::CircuitSpec;
using circuitspec::format_number;
using measurement::MeasurementModel;

namespace {

Json tool_block() {
  return Json{{"name", kToolName}, {"version", kToolVersion}, {"rng", kGeneratorName}};
}

Json circuit_block(const CircuitSpec& spec) {
  Json splitters = Json::array();
  for (const auto& s : spec.splitters) {
    splitters.push_back(Json{{"id", s.id}, {"ratio", s.ratio}});
  }
  const auto geometry = optics::BeamGeometry::from_circuit(spec);
  return Json{
      {"source", Json{{"w", spec.source.width}, {"rate", spec.source.rate}}},
      {"splitters", splitters},
      {"fold_angle_deg", spec.fold_angle_deg()},
      {"geometry", Json{{"w", geometry.width},
                        {"w_prime", geometry.width_prime},
                        {"lambda", geometry.lambda},
                        {"lambda_prime", geometry.lambda_prime}}},
      {"plc_compensation_b", spec.plc_compensation("b")},
      {"phi", spec.phase_phi()},
      {"alice_placement", circuitspec::to_string(spec.alice_placement)},
      {"bob_arm", spec.bob_arm},
  };
}

MeasurementModel active_model(const CircuitSpec& spec) {
  if (spec.alice_placement == AlicePlacement::DA1) return measurement::CompleteDA1{};
  return measurement::CoherentIncompleteDA2{spec.phase_phi()};
}

Json labeled_block(const std::vector<std::string>& labels, const std::vector<double>& values) {
  Json out = Json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]] = values[i];
  return out;
}

Json counts_block(const montecarlo::CountSummary& summary) {
  Json counts = Json::object();
  Json frequencies = Json::object();
  for (std::size_t i = 0; i < summary.labels.size(); ++i) {
    counts[summary.labels[i]] = summary.counts[i];
    frequencies[summary.labels[i]] =
        static_cast<double>(summary.counts[i]) / static_cast<double>(summary.n_trials);
  }
  return Json{{"n", summary.n_trials},
              {"seed", summary.seed},
              {"stream", summary.stream},
              {"counts", counts},
              {"frequencies", frequencies}};
}

std::string csv_number(double value) { return format_number(value); }

}  // namespace

Json simulation_report(const CircuitSpec& spec, const SimulateOptions& options) {
  const auto psi = optics::build_output_state(spec);
  const auto model = active_model(spec);
  const auto dist = measurement::outcome_distribution(psi, model);
  const double input_rate = spec.source.rate;

  Json analytic = Json{{"weights", labeled_block(dist.labels(), dist.weights())},
                       {"renorm_beta", dist.renorm_beta()},
                       {"probabilities", labeled_block(dist.labels(), dist.probabilities())},
                       {"bob_rate", input_rate * dist.probability("p")}};

  Json audits = Json{{"completeness_deviation",
                      measurement::model_completeness_deviation(model, psi.basis())}};
  if (spec.alice_placement == AlicePlacement::DA2) {
    const auto audit = measurement::causality_audit(psi, spec.phase_phi());
    audits["causality"] = Json{{"phi", audit.phi},
                               {"alice_rate_unrenormalized", input_rate * audit.alice_weight},
                               {"bob_rate_pinned", input_rate * audit.bob_weight},
                               {"total_rate", input_rate * audit.total},
                               {"excess_rate", input_rate * audit.excess},
                               {"violates_conservation", audit.violates_conservation}};
  }

  const auto clicks = montecarlo::sample_clicks(dist, options.n, options.seed);

  return Json{{"tool", tool_block()},
              {"command", "simulate"},
              {"seed", options.seed},
              {"circuit", circuit_block(spec)},
              {"model", Json{{"name", measurement::model_name(model)},
                             {"phi", spec.alice_placement == AlicePlacement::DA2
                                         ? Json(spec.phase_phi())
                                         : Json(nullptr)}}},
              {"analytic", analytic},
              {"audits", audits},
              {"monte_carlo", counts_block(clicks)}};
}

namespace {

std::vector<montecarlo::SweepPoint> run_sweep(const CircuitSpec& spec,
                                              const SweepOptions& options) {
  if (spec.alice_placement != AlicePlacement::DA2) {
    throw ConfigurationError("phase sweep requires placement DA2");
  }
  const auto psi = optics::build_output_state(spec);
  return montecarlo::phase_sweep(psi, options.phis, options.n_per_point, options.seed);
}

double binomial_stderr(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

std::string sweep_csv(const CircuitSpec& spec, const SweepOptions& options) {
  const auto table = run_sweep(spec, options);
  std::ostringstream out;
  out << "phi,analytic_bob_rate,empirical_bob_rate,stderr\n";
  for (const auto& row : table) {
    out << csv_number(row.phi) << ',' << csv_number(row.analytic_rate) << ','
        << csv_number(row.empirical_rate) << ','
        << csv_number(binomial_stderr(row.analytic_rate, options.n_per_point)) << '\n';
  }
  return out.str();
}

Json sweep_report(const CircuitSpec& spec, const SweepOptions& options) {
  const auto table = run_sweep(spec, options);
  Json rows = Json::array();
  for (const auto& row : table) {
    rows.push_back(Json{{"phi", row.phi},
                        {"analytic_bob_rate", row.analytic_rate},
                        {"empirical_bob_rate", row.empirical_rate},
                        {"stderr", binomial_stderr(row.analytic_rate, options.n_per_point)}});
  }
  return Json{{"tool", tool_block()},
              {"command", "sweep"},
              {"seed", options.seed},
              {"n_per_point", options.n_per_point},
              {"circuit", circuit_block(spec)},
              {"rows", rows}};
}

Json doubleslit_report(const CircuitSpec& spec, int n_points) {
  const auto psi = optics::build_output_state(spec);
  const auto pattern = measurement::double_slit_screen(psi, n_points);
  const auto control = measurement::outcome_distribution(psi, measurement::StandardSumControl{});

  Json points = Json::array();
  for (std::size_t j = 0; j < pattern.deltas.size(); ++j) {
    points.push_back(Json{{"delta", pattern.deltas[j]}, {"intensity", pattern.intensities[j]}});
  }
  return Json{{"tool", tool_block()},
              {"command", "doubleslit"},
              {"circuit", circuit_block(spec)},
              {"n_points", n_points},
              {"integrated_weight", pattern.integrated_weight},
              {"sum_control_weight", control.probability("k")},
              {"screen_completeness_deviation",
               measurement::screen_completeness_deviation(n_points)},
              {"points", points}};
}

DoubleslitCsv doubleslit_csv(const CircuitSpec& spec, int n_points) {
  const auto psi = optics::build_output_state(spec);
  const auto pattern = measurement::double_slit_screen(psi, n_points);
  std::ostringstream out;
  out << "index,delta,intensity\n";
  for (std::size_t j = 0; j < pattern.deltas.size(); ++j) {
    out << j << ',' << csv_number(pattern.deltas[j]) << ',' << csv_number(pattern.intensities[j])
        << '\n';
  }
  return {out.str(), pattern.integrated_weight};
}

namespace {

struct SignalRow {
  std::size_t index;
  int sent;
  AlicePlacement placement;
  std::uint64_t bob_counts;
  montecarlo::SignalDecision decision;
};

std::vector<SignalRow> run_signal(const CircuitSpec& spec, const SignalOptions& options) {
  if (options.bits.empty()) {
    throw ConfigurationError("signal transmission needs a nonempty bit string");
  }
  for (const char c : options.bits) {
    if (c != '0' && c != '1') {
      throw ConfigurationError("bit string may contain only '0' and '1'");
    }
  }
  const auto psi = optics::build_output_state(spec);
  const auto complete = measurement::outcome_distribution(psi, measurement::CompleteDA1{});
  const auto coherent = measurement::outcome_distribution(
      psi, measurement::CoherentIncompleteDA2{spec.phase_phi()});

  std::vector<SignalRow> rows;
  rows.reserve(options.bits.size());
  for (std::size_t i = 0; i < options.bits.size(); ++i) {
    const int sent = options.bits[i] - '0';
    const auto& dist = sent == 0 ? complete : coherent;
    const auto clicks = montecarlo::sample_clicks(dist, options.n_per_bit, options.seed, i);
    const auto counts = clicks.count("p");
    rows.push_back({i, sent, sent == 0 ? AlicePlacement::DA1 : AlicePlacement::DA2, counts,
                    montecarlo::distinguish_bit(counts, options.n_per_bit)});
  }
  return rows;
}

}  // namespace

Json signal_report(const CircuitSpec& spec, const SignalOptions& options) {
  const auto rows = run_signal(spec, options);
  Json bits = Json::array();
  std::size_t errors = 0;
  std::string decoded;
  for (const auto& row : rows) {
    if (row.decision.decided_bit != row.sent) ++errors;
    decoded.push_back(static_cast<char>('0' + row.decision.decided_bit));
    bits.push_back(Json{{"index", row.index},
                        {"sent", row.sent},
                        {"alice_placement", circuitspec::to_string(row.placement)},
                        {"bob_counts", row.bob_counts},
                        {"decoded", row.decision.decided_bit},
                        {"log_likelihood_ratio", row.decision.log_likelihood_ratio},
                        {"error_bound", row.decision.error_bound}});
  }
  return Json{{"tool", tool_block()},
              {"command", "signal"},
              {"seed", options.seed},
              {"n_per_bit", options.n_per_bit},
              {"circuit", circuit_block(spec)},
              {"sent_bits", options.bits},
              {"decoded_bits", decoded},
              {"bit_errors", errors},
              {"bit_error_rate", static_cast<double>(errors) / static_cast<double>(rows.size())},
              {"hoeffding_bound_per_bit", rows.front().decision.error_bound},
              {"threshold", rows.front().decision.threshold},
              {"bits", bits}};
}

std::string signal_csv(const CircuitSpec& spec, const SignalOptions& options) {
  const auto rows = run_signal(spec, options);
  std::ostringstream out;
  out << "index,sent,alice_placement,bob_counts,decoded,log_likelihood_ratio,error_bound\n";
  for (const auto& row : rows) {
    out << row.index << ',' << row.sent << ',' << circuitspec::to_string(row.placement) << ','
        << row.bob_counts << ',' << row.decision.decided_bit << ','
        << csv_number(row.decision.log_likelihood_ratio) << ','
        << csv_number(row.decision.error_bound) << '\n';
  }
  return out.str();
}

std::string render_parse_error(std::string_view path, const circuitspec::ParseError& error) {
  std::ostringstream out;
  out << path << ':' << error.line << ':' << error.column << ": error: " << error.message;
  if (!error.offending_token.empty()) out << " near '" << error.offending_token << "'";
  return out.str();
}

std::string render_violations(std::string_view path,
                              const std::vector<circuitspec::Violation>& violations) {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << path << ": violation [" << v.rule << "]: " << v.message << '\n';
  }
  return out.str();
}

std::vector<double> parse_phi_grid(std::string_view text) {
  const auto fail = [&] {
    throw ConfigurationError("malformed phi grid '" + std::string(text) +
                             "' (expected START:STOP:COUNT)");
  };
  double bounds[2] = {0.0, 0.0};
  std::size_t pos = 0;
  for (double& bound : bounds) {
    const std::size_t colon = text.find(':', pos);
    if (colon == std::string_view::npos) fail();
    const std::string_view part = text.substr(pos, colon - pos);
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), bound);
    if (ec != std::errc() || ptr != part.data() + part.size() || !std::isfinite(bound)) fail();
    pos = colon + 1;
  }
  const std::string_view part = text.substr(pos);
  unsigned long long count = 0;
  const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), count);
  if (ec != std::errc() || ptr != part.data() + part.size() || count == 0) fail();

  std::vector<double> grid;
  grid.reserve(count);
  const double step = (bounds[1] - bounds[0]) / static_cast<double>(count);
  for (unsigned long long i = 0; i < count; ++i) {
    grid.push_back(bounds[0] + step * static_cast<double>(i));
  }
  return grid;
}

}  // namespace tribeam::report
