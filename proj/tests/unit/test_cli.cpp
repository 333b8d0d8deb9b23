#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qasfg/commands.hpp"
#include "qasfg/config.hpp"
#include "qasfg/error.hpp"
#include "qasfg/export.hpp"

using namespace qasfg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qasfg_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qasfg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults") {
  const auto c = config::parse_config(json::object());
  CHECK(c.design.L_mm == 1.0);
  CHECK(c.design.target == "deltak");
  CHECK(c.material.dispersion == "gayer2008_mgo_cln_e");
  CHECK(c.simulation.steps == 20000);
  CHECK(c.sweeps.bandwidth.samples == 201);
  CHECK(c.sweeps.period.samples == 81);
  const auto o = c.design_options(1);
  CHECK(o.length == 1e-3);
  CHECK(o.kappa_max == doctest::Approx(30000.0));
}

TEST_CASE("unknown and mistyped keys are rejected") {
  CHECK_THROWS_AS(config::parse_config(json::parse(R"({"desing": {}})")), InputError);
  CHECK_THROWS_AS(config::parse_config(json::parse(R"({"design": {"L": 1}})")), InputError);
  CHECK_THROWS_AS(config::parse_config(json::parse(R"({"design": {"L_mm": "1 mm"}})")), InputError);
  CHECK_THROWS_AS(config::parse_config(json::parse(R"({"simulation": {"steps": 0}})")), InputError);
  CHECK_THROWS_AS(config::parse_config(json::parse(R"({"simulation": {"steps": 1.5}})")), InputError);
  CHECK_THROWS_AS(config::parse_config(json::parse(R"({"design": {"grid_nodes": 4000}})")), InputError);
  CHECK_THROWS_AS(config::parse_config(json::parse(R"({"design": {"target": "x"}})")), InputError);
  CHECK_THROWS_AS(config::parse_config(json::parse(R"({"material": {"epsilon0": 8.8}})")), InputError);
  CHECK_THROWS_AS(config::parse_config(json::parse(R"([1, 2])")), InputError);
}

TEST_CASE("hash tracks physics, not plumbing") {
  const auto a = config::parse_config(json::object());
  auto b = config::parse_config(json::parse(R"({"workers": 3, "output": {"directory": "x"}})"));
  CHECK(config::config_hash(a) == config::config_hash(b));
  b = config::parse_config(json::parse(R"({"design": {"L_mm": 2}})"));
  CHECK(config::config_hash(a) != config::config_hash(b));
  CHECK(config::config_hash(a).size() == 16);
}

TEST_CASE("material setup honours the switches") {
  const auto c = config::parse_config(json::parse(
      R"({"material": {"d33_pm_per_V": 27, "chi2_per_d33": 2, "epsilon0": "codata"}})"));
  const auto m = c.material_setup();
  CHECK(m.nonlinear.chi2 == doctest::Approx(54e-12));
  CHECK(m.epsilon0 == materials::kEpsilon0Codata);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.2449827360418926e-05, 6.02214076e23, 0.0}) {
    const auto s = io::format_number(v);
    CHECK(std::stod(s) == v);
  }
  CHECK_THROWS_AS(io::format_number(NAN), NumericError);
}

}

TEST_SUITE("cli") {

TEST_CASE("design, simulate and reruns") {
  const auto dir = scratch("design");
  const auto out1 = (dir / "a").string();
  const auto out2 = (dir / "b").string();
  REQUIRE(invoke({"design", "--out", out1}) == 0);
  REQUIRE(invoke({"design", "--out", out2, "--workers", "2"}) == 0);
  for (const char* f : {"design.csv", "design.json", "boundary_check.json", "profile.csv"}) {
    CHECK(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto doc = io::read_json(dir / "a" / "design.json");
  CHECK(doc["kappa_per_cm"].get<double>() == doctest::Approx(76.23).epsilon(2.0 / 76.23));
  CHECK(doc["material"]["dispersion"] == "gayer2008_mgo_cln_e");
  CHECK(doc.contains("config_hash"));
  CHECK(doc["tool_version"] == std::string(io::tool_version()));
  CHECK(slurp(dir / "a" / "design.csv").rfind("# tool=qasfg", 0) == 0);
  CHECK(io::read_json(dir / "a" / "boundary_check.json")["passed"] == true);

  const auto design = (dir / "a" / "design.json").string();
  const auto loaded = io::load_design(design);
  CHECK(loaded.design.kappa == doc["kappa_rad_per_m"].get<double>());

  REQUIRE(invoke({"simulate", "--design", design, "--out", out1}) == 0);
  CHECK(io::read_json(dir / "a" / "simulate.json")["eta"].get<double>() >= 0.99);

  const auto dep = (dir / "dep").string();
  REQUIRE(invoke({"simulate", "--design", design, "--depleted", "--ratio", "1", "--out", dep}) == 0);
  const double eta = io::read_json(dir / "dep" / "simulate.json")["eta"].get<double>();
  CHECK(eta == doctest::Approx(0.77).epsilon(0.10 / 0.77));
  const auto header = slurp(dir / "dep" / "trajectory.csv");
  CHECK(header.find("z_m,re_A1,im_A1,re_A3,im_A3,re_A2,im_A2") != std::string::npos);

  REQUIRE(invoke({"sweep", "period", "--design", design, "--out", out1}) == 0);
  const auto period = io::read_json(dir / "a" / "sweep_period.json");
  CHECK(period["tolerance_interval"][0].get<double>() <= -0.01);
  CHECK(period["tolerance_interval"][1].get<double>() >= 0.01);
}

TEST_CASE("error exit codes") {
  const auto dir = scratch("errors");
  const auto out = (dir / "o").string();
  CHECK(invoke({"sweep", "nonsense", "--out", out}) == 2);
  CHECK(invoke({"simulate", "--design", (dir / "missing.json").string(), "--out", out}) == 2);
  CHECK(invoke({"design", "--config", (dir / "missing.json").string()}) == 2);
  CHECK(invoke({"frobnicate"}) == 2);
  CHECK(invoke({}) == 2);
  CHECK(invoke({"design", "--workers", "-3", "--out", out}) == 2);

  auto cfg = write_config(dir, R"({"design": {"kappa_per_cm": 20}})");
  CHECK(invoke({"design", "--config", cfg.string(), "--out", out}) == 2);
  cfg = write_config(dir, R"({"simulation": {"steps": 0}})");
  CHECK(invoke({"simulate", "--config", cfg.string(), "--out", out}) == 2);
  cfg = write_config(dir, R"({"simulation": {"steps": 20}})");
  CHECK(invoke({"simulate", "--config", cfg.string(), "--out", out}) == 2);
  cfg = write_config(dir, "{ not json");
  CHECK(invoke({"design", "--config", cfg.string(), "--out", out}) == 2);
  cfg = write_config(dir, R"({"design": {"kappa_min_per_cm": 77, "kappa_max_per_cm": 79}})");
  CHECK(invoke({"optimize", "--config", cfg.string(), "--out", out}) == 1);

  std::ofstream(dir / "bad.json") << R"({"kappa_rad_per_m": 1})";
  CHECK(invoke({"simulate", "--design", (dir / "bad.json").string(), "--out", out}) == 2);
}

TEST_CASE("tampered design samples are rejected") {
  const auto dir = scratch("tamper");
  REQUIRE(invoke({"design", "--out", dir.string()}) == 0);
  auto text = slurp(dir / "design.csv");
  const auto pos = text.find('\n', text.find("Lambda_m")) + 1;
  text.replace(pos, text.find('\n', pos) - pos, "0,-11874.21858877396,2.3e-05");
  std::ofstream(dir / "design.csv", std::ios::binary | std::ios::trunc) << text;
  CHECK(invoke({"simulate", "--design", (dir / "design.json").string(), "--out", dir.string()}) == 2);
}

TEST_CASE("optimize writes a trace") {
  const auto dir = scratch("optimize");
  const auto cfg = write_config(dir, R"({"design": {"target": "kappa"}})");
  REQUIRE(invoke({"optimize", "--config", cfg.string(), "--out", dir.string()}) == 0);
  const auto doc = io::read_json(dir / "optimize.json");
  CHECK(doc["kappa_per_cm"].get<double>() == doctest::Approx(61.33).epsilon(2.0 / 61.33));
  const auto trace = io::read_csv(dir / "optimize.csv");
  CHECK(trace.columns == std::vector<std::string>{"kappa_per_cm", "q_value"});
  CHECK(trace.rows.size() == 400);
}

}
