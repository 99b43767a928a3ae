#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "tribeam/circuitspec.hpp"
#include "tribeam/errors.hpp"
#include "tribeam/report.hpp"

using namespace tribeam;
using circuitspec::CircuitSpec;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(TRIBEAM_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

class TempSpec {
 public:
  explicit TempSpec(const std::string& contents) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tribeam_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
             ".tri");
    std::ofstream out(path_);
    out << contents;
  }
  ~TempSpec() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

const char* kPresetDoc = "preset paper-fig1\n";
const char* kPresetDa1Doc = "preset paper-fig1\ndetector alice placement=DA1\n";

}  // namespace

TEST_CASE("simulate reports for both placements") {
  SUBCASE("DA1: complete basis, quarter-quarter-half") {
    TempSpec spec(kPresetDa1Doc);
    const auto run = run_cli("simulate --spec " + spec.path() + " --n 1000 --seed 3");
    REQUIRE(run.exit_code == 0);
    const auto doc = json::parse(run.output);
    CHECK(doc["model"]["name"] == "complete-da1");
    CHECK(doc["analytic"]["renorm_beta"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(doc["analytic"]["probabilities"]["l"].get<double>() ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(doc["analytic"]["probabilities"]["m"].get<double>() ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(doc["analytic"]["probabilities"]["p"].get<double>() ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(doc["audits"]["completeness_deviation"].get<double>() <= 1e-12);
    CHECK_FALSE(doc["audits"].contains("causality"));
    // renorm_beta and the completeness deviation are embedded in every report
    CHECK(doc["analytic"].contains("renorm_beta"));
  }

  SUBCASE("DA2: renormalized coherent basis with the conservation audit") {
    TempSpec spec(kPresetDoc);
    const auto run = run_cli("simulate --spec " + spec.path() + " --n 1000 --seed 3");
    REQUIRE(run.exit_code == 0);
    const auto doc = json::parse(run.output);
    CHECK(doc["analytic"]["renorm_beta"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(doc["analytic"]["probabilities"]["k"].get<double>() ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(doc["analytic"]["probabilities"]["p"].get<double>() ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(doc["audits"]["completeness_deviation"].get<double>() ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(doc["audits"]["causality"]["total_rate"].get<double>() ==
          doctest::Approx(1.5).epsilon(1e-12));
    CHECK(doc["audits"]["causality"]["violates_conservation"].get<bool>());
    const auto& mc = doc["monte_carlo"];
    CHECK(mc["counts"]["k"].get<std::uint64_t>() + mc["counts"]["p"].get<std::uint64_t>() == 1000);
  }

  SUBCASE("invalid spec exits 2 with no report") {
    TempSpec spec("splitter BS1 ratio=1.5\n");
    const auto run = run_cli("simulate --spec " + spec.path());
    CHECK(run.exit_code == 2);
    CHECK(run.output.empty());
  }

  SUBCASE("unreadable spec exits 2") {
    const auto run = run_cli("simulate --spec /nonexistent/no.tri");
    CHECK(run.exit_code == 2);
  }
}

TEST_CASE("identical invocations are byte-identical") {
  TempSpec spec(kPresetDoc);
  const std::string args = "simulate --spec " + spec.path() + " --n 20000 --seed 77";
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  REQUIRE(first.exit_code == 0);
  CHECK(first.output == second.output);

  const auto reseeded = run_cli("simulate --spec " + spec.path() + " --n 20000 --seed 78");
  CHECK(first.output != reseeded.output);

  SUBCASE("--out writes the same bytes as stdout") {
    const auto out_path = std::filesystem::temp_directory_path() /
                          ("tribeam_out_" + std::to_string(::getpid()) + ".json");
    const auto piped = run_cli(args + " --out " + out_path.string());
    REQUIRE(piped.exit_code == 0);
    CHECK(piped.output.empty());
    std::ifstream in(out_path, std::ios::binary);
    std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(written == first.output);
    std::filesystem::remove(out_path);
  }
}

TEST_CASE("sweep emits a monotone CSV table") {
  TempSpec spec(kPresetDoc);
  const auto run =
      run_cli("sweep --spec " + spec.path() + " --phi-grid 0:6.283185307179586:256 --n 200");
  REQUIRE(run.exit_code == 0);
  std::istringstream lines(run.output);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "phi,analytic_bob_rate,empirical_bob_rate,stderr");
  int rows = 0;
  double last_phi = -1.0;
  double first_analytic = 0.0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    const double phi = std::stod(line.substr(0, comma));
    CHECK(phi > last_phi);
    last_phi = phi;
    if (rows == 0) first_analytic = std::stod(line.substr(comma + 1));
    ++rows;
  }
  CHECK(rows == 256);
  CHECK(first_analytic == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  SUBCASE("sweep on a DA1 spec is rejected") {
    TempSpec da1(kPresetDa1Doc);
    CHECK(run_cli("sweep --spec " + da1.path()).exit_code == 2);
  }

  SUBCASE("malformed grid is rejected") {
    CHECK(run_cli("sweep --spec " + spec.path() + " --phi-grid 0:1").exit_code == 2);
    CHECK(run_cli("sweep --spec " + spec.path() + " --phi-grid 0:1:0").exit_code == 2);
  }
}

TEST_CASE("signal transmits and decodes a message") {
  TempSpec spec(kPresetDoc);
  const auto run = run_cli("signal --spec " + spec.path() + " --bits 01 --n 10000 --seed 9");
  REQUIRE(run.exit_code == 0);
  const auto doc = json::parse(run.output);
  CHECK(doc["decoded_bits"] == "01");
  CHECK(doc["bit_errors"].get<int>() == 0);
  CHECK(doc["bit_error_rate"].get<double>() == 0.0);
  CHECK(doc["hoeffding_bound_per_bit"].get<double>() <= 1e-60);
  CHECK(doc["bits"].size() == 2);

  SUBCASE("empty bits are a usage error") {
    CHECK(run_cli("signal --spec " + spec.path() + " --bits \"\"").exit_code == 2);
    CHECK(run_cli("signal --spec " + spec.path() + " --bits 012").exit_code == 2);
  }

  SUBCASE("single-click decision carries the weak bound") {
    const auto one = run_cli("signal --spec " + spec.path() + " --bits 0 --n 1 --seed 4");
    REQUIRE(one.exit_code == 0);
    const auto d = json::parse(one.output);
    CHECK(d["hoeffding_bound_per_bit"].get<double>() ==
          doctest::Approx(std::exp(-2.0 / 144.0)).epsilon(1e-12));
  }
}

TEST_CASE("doubleslit report") {
  TempSpec spec(kPresetDoc);
  const auto run = run_cli("doubleslit --spec " + spec.path() + " --n 1024");
  REQUIRE(run.exit_code == 0);
  const auto doc = json::parse(run.output);
  CHECK(doc["integrated_weight"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(doc["screen_completeness_deviation"].get<double>() <= 1e-12);
  CHECK(doc["points"].size() == 1024);
  CHECK(doc["sum_control_weight"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));

  SUBCASE("csv table") {
    const auto csv = run_cli("doubleslit --spec " + spec.path() + " --n 4 --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.output.rfind("index,delta,intensity\n", 0) == 0);
    CHECK(std::count(csv.output.begin(), csv.output.end(), '\n') == 5);
  }

  SUBCASE("too few points") {
    CHECK(run_cli("doubleslit --spec " + spec.path() + " --n 1").exit_code == 2);
  }
}

TEST_CASE("validate subcommand") {
  TempSpec good(kPresetDoc);
  CHECK(run_cli("validate --spec " + good.path()).exit_code == 0);

  TempSpec bad("preset paper-fig1\ndetector bob arm=a\n");
  CHECK(run_cli("validate --spec " + bad.path()).exit_code == 2);

  TempSpec malformed("laser w=1\n");
  CHECK(run_cli("validate --spec " + malformed.path()).exit_code == 2);
}

TEST_CASE("report building blocks") {
  SUBCASE("phi grid parsing") {
    const auto grid = report::parse_phi_grid("0:1:4");
    REQUIRE(grid.size() == 4);
    CHECK(grid[0] == 0.0);
    CHECK(grid[1] == doctest::Approx(0.25));
    CHECK(grid[3] == doctest::Approx(0.75));
    CHECK_THROWS_AS((void)report::parse_phi_grid("0:1"), ConfigurationError);
    CHECK_THROWS_AS((void)report::parse_phi_grid("a:b:c"), ConfigurationError);
    CHECK_THROWS_AS((void)report::parse_phi_grid("0:1:0"), ConfigurationError);
  }

  SUBCASE("parse error rendering") {
    const circuitspec::ParseError error{3, 14, "ratio out of range (0, 1)", "1.5"};
    CHECK(report::render_parse_error("demo.tri", error) ==
          "demo.tri:3:14: error: ratio out of range (0, 1) near '1.5'");
  }

  SUBCASE("reports are deterministic at the library level too") {
    const auto spec = CircuitSpec::paper_fig1();
    const auto a = report::simulation_report(spec, {5000, 11});
    const auto b = report::simulation_report(spec, {5000, 11});
    CHECK(a.dump() == b.dump());
  }
}
