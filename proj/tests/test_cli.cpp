#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "apkin/commands.hpp"
#include "apkin/stability.hpp"

using namespace apkin;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig nontrivial_config() {
  RunConfig cfg;
  cfg.command = Command::Converge;
  cfg.scheme = "DP2-A1(2,4,2)";
  cfg.eps = 1e-3;
  cfg.nx = {32, 64, 128};
  cfg.nv = 16;
  cfg.vmax = 6.5;
  cfg.t_final = 0.0375;
  cfg.cfl = 0.45;
  cfg.op = OperatorKind::Boltzmann;
  cfg.penalized = true;
  cfg.init = InitialData::NonEquilibrium;
  cfg.out = "/tmp/apkin_out";
  cfg.seed = 42;
  cfg.reference = ReferenceKind::Rk4;
  return cfg;
}

}  // namespace

TEST_CASE("config serialization round-trips exactly") {
  const RunConfig cfg = nontrivial_config();
  std::istringstream in(serialize_run_config(cfg));
  CHECK(parse_run_config(in) == cfg);

  std::istringstream dflt("");
  CHECK(parse_run_config(dflt) == RunConfig{});
}

TEST_CASE("config parsing: comments, whitespace, overrides, errors") {
  std::istringstream in(
      "# a comment line\n"
      "  eps   =  0.25   # trailing comment\n"
      "\n"
      "nx = 8, 16 ,32\n"
      "init = noneq\n"
      "eps = 0.5\n");  // later lines win
  RunConfig base;
  base.command = Command::Converge;
  const RunConfig cfg = parse_run_config(in, base);
  CHECK(cfg.command == Command::Converge);
  CHECK(cfg.eps == 0.5);
  CHECK(cfg.nx == std::vector<std::size_t>{8, 16, 32});
  CHECK(cfg.init == InitialData::NonEquilibrium);

  std::istringstream bad_key("nosuch = 1\n");
  CHECK_THROWS_AS(parse_run_config(bad_key), ConfigError);
  std::istringstream bad_val("eps = fast\n");
  CHECK_THROWS_AS(parse_run_config(bad_val), ConfigError);
  std::istringstream no_eq("eps 0.5\n");
  CHECK_THROWS_AS(parse_run_config(no_eq), ConfigError);
}

TEST_CASE("config validation enforces the documented invariants") {
  RunConfig ok;
  ok.command = Command::Simulate;
  ok.scheme = "ARS(2,2,2)";
  CHECK_NOTHROW(validate_run_config(ok));

  RunConfig c = ok;
  c.eps = 0.0;
  CHECK_THROWS_AS(validate_run_config(c), ConfigError);

  c = ok;
  c.scheme = "nosuch";
  CHECK_THROWS_AS(validate_run_config(c), ConfigError);

  c = ok;
  c.command = Command::Converge;
  c.nx = {32, 64};  // too short
  CHECK_THROWS_AS(validate_run_config(c), ConfigError);
  c.nx = {32, 64, 64};  // not strictly increasing
  CHECK_THROWS_AS(validate_run_config(c), ConfigError);
  c.nx = {32, 64, 128};
  CHECK_NOTHROW(validate_run_config(c));

  c = ok;
  c.penalized = true;  // penalized BGK is not a thing
  CHECK_THROWS_AS(validate_run_config(c), ConfigError);

  c = ok;
  c.op = OperatorKind::Boltzmann;  // and Boltzmann needs the penalization
  CHECK_THROWS_AS(validate_run_config(c), ConfigError);

  c = ok;
  c.scheme = "all";  // only analyze may take the whole registry
  CHECK_THROWS_AS(validate_run_config(c), ConfigError);
}

TEST_CASE("cmd_analyze writes the registry CSV and matches the golden file") {
  const std::filesystem::path dir = "/tmp/apkin_test_cli/analyze";
  std::filesystem::remove_all(dir);
  RunConfig cfg;
  cfg.command = Command::Analyze;
  cfg.out = dir.string();
  std::ostringstream report;
  CHECK(run_command(cfg, report, report) == 0);

  const std::string csv = slurp(dir / "analyze.csv");
  CHECK(csv == stability_report_csv(table1_report(registry())));
  // header + 11 registry rows
  std::size_t lines = 0;
  for (char ch : csv) lines += (ch == '\n');
  CHECK(lines == 12);
  CHECK(report.str().find("ARS(2,2,2)") != std::string::npos);

  CHECK(csv == slurp(std::filesystem::path(APKIN_SOURCE_DIR) / "data/golden_analyze.csv"));
}

TEST_CASE("cmd_analyze single scheme and unknown scheme exit codes") {
  const std::filesystem::path dir = "/tmp/apkin_test_cli/analyze_one";
  RunConfig cfg;
  cfg.command = Command::Analyze;
  cfg.scheme = "ARS(1,1,1)";
  cfg.out = dir.string();
  std::ostringstream report;
  CHECK(run_command(cfg, report, report) == 0);
  std::size_t lines = 0;
  for (char ch : slurp(dir / "analyze.csv")) lines += (ch == '\n');
  CHECK(lines == 2);
  // Table row: ARS(1,1,1) weak AP range is (0, 2)
  CHECK(report.str().find("weak AP range: (0,2)") != std::string::npos);

  cfg.scheme = "nosuch";
  std::ostringstream err;
  CHECK(run_command(cfg, err, err) == 2);
}

TEST_CASE("run_simulation conserves mass and is byte-deterministic") {
  RunConfig cfg;
  cfg.command = Command::Simulate;
  cfg.scheme = "ARS(2,2,2)";
  cfg.eps = 1e-6;
  cfg.nx = {8};
  cfg.nv = 16;
  cfg.t_final = 0.01;

  std::ostringstream s1, s2;
  const SimulationResult r1 = run_simulation(cfg, 8, &s1);
  const SimulationResult r2 = run_simulation(cfg, 8, &s2);
  CHECK(r1.mass_drift < 1e-10);
  CHECK(r1.steps > 1);
  CHECK(s1.str() == s2.str());

  std::size_t lines = 0;
  for (char ch : s1.str()) lines += (ch == '\n');
  CHECK(lines == 1 + 8 * (r1.steps + 1));  // header + a block per state
  CHECK(s1.str().rfind("t,x,rho,ux,uy,T\n", 0) == 0);
}

TEST_CASE("cmd_simulate writes the moment series and final snapshot") {
  const std::filesystem::path dir = "/tmp/apkin_test_cli/simulate";
  std::filesystem::remove_all(dir);
  RunConfig cfg;
  cfg.command = Command::Simulate;
  cfg.scheme = "ARS(2,2,2)";
  cfg.eps = 1e-6;
  cfg.nx = {8};
  cfg.nv = 16;
  cfg.t_final = 0.01;
  cfg.out = dir.string();
  std::ostringstream report;
  CHECK(run_command(cfg, report, report) == 0);
  CHECK(std::filesystem::exists(dir / "moments.csv"));
  const DistributionField f = read_snapshot((dir / "final_snapshot.bin").string());
  CHECK(f.nx == 8);
  CHECK(f.grid.nv == 16);
  CHECK(report.str().find("mass drift") != std::string::npos);
}

TEST_CASE("density_l1_error interpolates fine point values to coarse centers") {
  const VelocityGrid g(16, 6.0);
  const Vec unit = maxwellian_corrected({1.0, 0.0, 0.0, 1.0}, g);
  const auto profile = [](double x) { return 2.0 + std::sin(2.0 * M_PI * x); };
  const auto fill = [&](DistributionField& f) {
    for (std::size_t c = 0; c < f.nx; ++c) {
      const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(f.nx);
      for (std::size_t k = 0; k < g.size(); ++k) f.cell(c)[k] = profile(x) * unit[k];
    }
  };
  // identical smooth profile: only the interpolation error remains, O(dx^4)
  DistributionField c16(16, g), f32(32, g), f48(48, g);
  fill(c16);
  fill(f32);
  fill(f48);
  CHECK(density_l1_error(c16, f32) < 1e-4);   // even ratio: cubic interpolation
  CHECK(density_l1_error(c16, f48) < 1e-13);  // odd ratio: centers coincide

  DistributionField bad(3, g);
  CHECK_THROWS_AS(density_l1_error(bad, f32), std::invalid_argument);
}

TEST_CASE("convergence_table: second order in the stiff BGK limit") {
  RunConfig cfg;
  cfg.command = Command::Converge;
  cfg.scheme = "ARS(2,2,2)";
  cfg.eps = 1e-6;
  cfg.nx = {16, 32, 64, 128};
  cfg.nv = 16;
  cfg.t_final = 0.02;

  const auto rows = convergence_table(cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].nx == 16);
  CHECK_FALSE(rows[0].has_order);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].error < rows[i - 1].error);
    CHECK(rows[i].has_order);
  }
  CHECK(rows.back().order > 1.6);

  const std::string csv = convergence_csv(rows);
  CHECK(csv.rfind("nx,l1_density_error,observed_order\n", 0) == 0);
}

TEST_CASE("convergence_table with the RK4 reference keeps one row per nx") {
  RunConfig cfg;
  cfg.command = Command::Converge;
  cfg.scheme = "ARS(2,2,2)";
  cfg.eps = 1e-1;
  cfg.nx = {8, 16, 32};
  cfg.nv = 16;
  cfg.t_final = 0.01;
  cfg.reference = ReferenceKind::Rk4;

  const auto rows = convergence_table(cfg);
  REQUIRE(rows.size() == 3);
  for (const ConvergenceRow& r : rows) CHECK(r.error > 0.0);
  CHECK(rows.back().error < rows.front().error);
}

TEST_CASE("run_command maps runtime failures to exit code 1") {
  RunConfig cfg;
  cfg.command = Command::Converge;
  cfg.scheme = "ARS(2,2,2)";
  cfg.eps = 1e-2;
  cfg.nx = {5, 7, 9};  // valid list, but 9 is not a multiple of 5: restriction fails
  cfg.nv = 8;
  cfg.t_final = 0.005;
  cfg.out = "/tmp/apkin_test_cli/fail";
  std::ostringstream err;
  CHECK(run_command(cfg, err, err) == 1);
  CHECK(err.str().find("error:") != std::string::npos);
}
