#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "tribeam/circuitspec.hpp"
#include "tribeam/errors.hpp"
#include "tribeam/report.hpp"

namespace {

// Exit codes: 0 success, 2 parse/validation/usage, 3 runtime contract violation.
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitRuntime = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct LoadedSpec {
  tribeam::circuitspec::CircuitSpec spec;
};

std::variant<LoadedSpec, int> load_spec(const std::string& path, bool run_validation = true) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read spec file '" << path << "'\n";
    return kExitInvalid;
  }
  auto parsed = tribeam::circuitspec::parse(*text);
  if (const auto* error = std::get_if<tribeam::circuitspec::ParseError>(&parsed)) {
    std::cerr << tribeam::report::render_parse_error(path, *error) << '\n';
    return kExitInvalid;
  }
  auto spec = std::get<tribeam::circuitspec::CircuitSpec>(parsed);
  if (run_validation) {
    const auto violations = tribeam::circuitspec::validate(spec);
    if (!violations.empty()) {
      std::cerr << tribeam::report::render_violations(path, violations);
      return kExitInvalid;
    }
  }
  return LoadedSpec{std::move(spec)};
}

int emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file '" << out_path << "'\n";
    return kExitRuntime;
  }
  out << payload;
  return kExitOk;
}

std::string dumped(const tribeam::report::Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-beam interferometer simulator: detection statistics under "
               "complete and coherent-incomplete measurement bases"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  std::string format;
  std::string phi_grid_text = "0:6.283185307179586:64";
  std::string bits;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;

  auto* simulate = app.add_subcommand("simulate", "Analytic report plus seeded click statistics");
  simulate->add_option("--spec", spec_path, "circuit description file")->required();
  simulate->add_option("--n", n, "Monte Carlo trials (default 100000)");
  simulate->add_option("--seed", seed, "RNG seed (default 0)");
  simulate->add_option("--format", format, "json");
  simulate->add_option("--out", out_path, "output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Bob's rate across a phase-shifter grid");
  sweep->add_option("--spec", spec_path, "circuit description file")->required();
  sweep->add_option("--phi-grid", phi_grid_text,
                    "START:STOP:COUNT, left-closed (default one turn, 64 points)");
  sweep->add_option("--n", n, "clicks per grid point (default 100000)");
  sweep->add_option("--seed", seed, "RNG seed (default 0)");
  sweep->add_option("--format", format, "csv (default) or json");
  sweep->add_option("--out", out_path, "output file (default stdout)");

  auto* doubleslit =
      app.add_subcommand("doubleslit", "Fringe table of the double-slit control screen");
  doubleslit->add_option("--spec", spec_path, "circuit description file")->required();
  doubleslit->add_option("--n", n, "screen sample points (default 1024)");
  doubleslit->add_option("--format", format, "json (default) or csv");
  doubleslit->add_option("--out", out_path, "output file (default stdout)");

  auto* signal = app.add_subcommand("signal", "Transmit a bit string through basis choices");
  signal->add_option("--spec", spec_path, "circuit description file")->required();
  signal->add_option("--bits", bits, "message bits, e.g. 0110")->required();
  signal->add_option("--n", n, "clicks per bit (default 10000)");
  signal->add_option("--seed", seed, "RNG seed (default 0)");
  signal->add_option("--format", format, "json (default) or csv");
  signal->add_option("--out", out_path, "output file (default stdout)");

  auto* validate = app.add_subcommand("validate", "Check a circuit description");
  validate->add_option("--spec", spec_path, "circuit description file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  // Per-subcommand defaults. The option variables are shared, so defaults
  // are applied after parsing rather than through default_val.
  if (simulate->parsed()) {
    if (!simulate->count("--n")) n = 100000;
    if (format.empty()) format = "json";
  } else if (sweep->parsed()) {
    if (!sweep->count("--n")) n = 100000;
    if (format.empty()) format = "csv";
  } else if (doubleslit->parsed()) {
    if (!doubleslit->count("--n")) n = 1024;
    if (format.empty()) format = "json";
  } else if (signal->parsed()) {
    if (!signal->count("--n")) n = 10000;
    if (format.empty()) format = "json";
  }

  try {
    if (simulate->parsed()) {
      if (format != "json") {
        std::cerr << "error: the simulate report is JSON-only\n";
        return kExitInvalid;
      }
      auto loaded = load_spec(spec_path);
      if (const int* code = std::get_if<int>(&loaded)) return *code;
      const auto& spec = std::get<LoadedSpec>(loaded).spec;
      return emit(dumped(tribeam::report::simulation_report(spec, {n, seed})), out_path);
    }

    if (sweep->parsed()) {
      if (format != "csv" && format != "json") {
        std::cerr << "error: unknown format '" << format << "'\n";
        return kExitInvalid;
      }
      std::vector<double> grid;
      try {
        grid = tribeam::report::parse_phi_grid(phi_grid_text);
      } catch (const tribeam::ConfigurationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
      }
      auto loaded = load_spec(spec_path);
      if (const int* code = std::get_if<int>(&loaded)) return *code;
      const auto& spec = std::get<LoadedSpec>(loaded).spec;
      if (spec.alice_placement != tribeam::circuitspec::AlicePlacement::DA2) {
        std::cerr << "error: sweep requires a spec with placement DA2\n";
        return kExitInvalid;
      }
      const tribeam::report::SweepOptions options{std::move(grid), n, seed};
      const std::string payload =
          format == "csv" ? tribeam::report::sweep_csv(spec, options)
                          : dumped(tribeam::report::sweep_report(spec, options));
      return emit(payload, out_path);
    }

    if (doubleslit->parsed()) {
      if (format != "csv" && format != "json") {
        std::cerr << "error: unknown format '" << format << "'\n";
        return kExitInvalid;
      }
      if (n < 2) {
        std::cerr << "error: the screen needs at least 2 sample points\n";
        return kExitInvalid;
      }
      auto loaded = load_spec(spec_path);
      if (const int* code = std::get_if<int>(&loaded)) return *code;
      const auto& spec = std::get<LoadedSpec>(loaded).spec;
      const int points = static_cast<int>(n);
      if (format == "csv") {
        const auto result = tribeam::report::doubleslit_csv(spec, points);
        // keep the data stream clean; the summary goes to stderr
        std::cerr << "integrated_weight="
                  << tribeam::circuitspec::format_number(result.integrated_weight) << '\n';
        return emit(result.table, out_path);
      }
      return emit(dumped(tribeam::report::doubleslit_report(spec, points)), out_path);
    }

    if (signal->parsed()) {
      if (format != "csv" && format != "json") {
        std::cerr << "error: unknown format '" << format << "'\n";
        return kExitInvalid;
      }
      if (bits.empty() || bits.find_first_not_of("01") != std::string::npos) {
        std::cerr << "error: --bits must be a nonempty string of 0s and 1s\n";
        return kExitInvalid;
      }
      if (n == 0) {
        std::cerr << "error: --n must be at least 1 click per bit\n";
        return kExitInvalid;
      }
      auto loaded = load_spec(spec_path);
      if (const int* code = std::get_if<int>(&loaded)) return *code;
      const auto& spec = std::get<LoadedSpec>(loaded).spec;
      const tribeam::report::SignalOptions options{bits, n, seed};
      const std::string payload =
          format == "csv" ? tribeam::report::signal_csv(spec, options)
                          : dumped(tribeam::report::signal_report(spec, options));
      return emit(payload, out_path);
    }

    if (validate->parsed()) {
      const auto text = read_file(spec_path);
      if (!text) {
        std::cerr << "error: cannot read spec file '" << spec_path << "'\n";
        return kExitInvalid;
      }
      auto parsed = tribeam::circuitspec::parse(*text);
      if (const auto* error = std::get_if<tribeam::circuitspec::ParseError>(&parsed)) {
        std::cerr << tribeam::report::render_parse_error(spec_path, *error) << '\n';
        return kExitInvalid;
      }
      const auto& spec = std::get<tribeam::circuitspec::CircuitSpec>(parsed);
      const auto violations = tribeam::circuitspec::validate(spec);
      if (!violations.empty()) {
        std::cerr << tribeam::report::render_violations(spec_path, violations);
        return kExitInvalid;
      }
      std::cout << spec_path << ": ok\n";
      return kExitOk;
    }
  } catch (const tribeam::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  return kExitInvalid;
}
