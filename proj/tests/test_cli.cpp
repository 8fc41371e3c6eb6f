#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fracheat/cli.hpp"
#include "fracheat/report.hpp"

using namespace fracheat;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("fracheat_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args, std::string* log = nullptr) {
  args.insert(args.begin(), "fracheat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (log) *log = err.str();
  return rc;
}

std::string out_file(const std::string& name) { return (scratch_dir() / name).string(); }

}  // namespace

TEST_CASE("grid specs") {
  auto g = parse_grid("0:1:5");
  REQUIRE(g.times.size() == 5);
  CHECK(g.times.front() == 0.2);
  CHECK(g.times.back() == 1.0);
  CHECK(parse_grid("0.1,0.5,2").times == std::vector<double>{0.1, 0.5, 2});
  g = parse_grid("single:1,0");
  REQUIRE(g.single);
  CHECK(g.single->first == 1.0);
  CHECK(g.single->second == 0.0);
  CHECK(parse_grid("0:1:0").times.empty());
  CHECK_THROWS_AS(parse_grid("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:0:4"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:1:2.5"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0.5,0.2"), ConfigError);
  CHECK_THROWS_AS(parse_grid("a,b"), ConfigError);
  CHECK_THROWS_AS(parse_grid("single:1"), ConfigError);
}

TEST_CASE("cov writes the matrix CSV") {
  const auto path = out_file("swanson.csv");
  REQUIRE(cli({"cov", "--kernel", "swanson", "--grid", "0:1:5", "--format", "csv", "-o", path}) == 0);
  const std::string csv = slurp(path);
  CHECK(csv.rfind("t,s,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 26);
  CHECK(csv.find("\n1,1,0.56418958354775628\n") != std::string::npos);
  CHECK(csv == slurp(fs::path(GOLDEN_DIR) / "cov_swanson_0_1_5.csv"));
  CHECK_FALSE(fs::exists(path + ".tmp"));

  const auto single = out_file("rx_single.csv");
  REQUIRE(cli({"cov", "--kernel", "rx", "--H", "0.75", "--grid", "single:1,0", "-o", single}) == 0);
  CHECK(slurp(single) == "t,s,value\n1,0,0\n");

  const auto empty = out_file("empty.csv");
  REQUIRE(cli({"cov", "--grid", "0:1:0", "-o", empty}) == 0);
  CHECK(slurp(empty) == "t,s,value\n");
}

TEST_CASE("verify writes a JSON report that round-trips") {
  const auto path = out_file("verify.json");
  REQUIRE(cli({"verify", "--check", "decomposition", "--d", "1", "--H", "0.75", "--grid", "0:1:3",
               "--format", "json", "-o", path}) == 0);
  const auto j = nlohmann::json::parse(slurp(path));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["check"] == "decomposition");
  CHECK(j[0]["pass"] == true);
  const VerificationReport r = report_from_json(j[0]);
  CHECK(to_json(r) == j[0]);
  CHECK(dump_json(reports_json({r})) == slurp(path));
}

TEST_CASE("report CSV header") {
  VerificationReport r;
  r.check = "x";
  r.hurst = 0.75;
  r.worst_abs = 0.1;
  r.pass = true;
  CHECK(reports_csv({r}) == "check,H,d,worst_abs,worst_rel,t,s,pass\n"
                           "x,0.75,1,0.10000000000000001,0,0,0,true\n");
  CHECK(reports_csv({}) == "check,H,d,worst_abs,worst_rel,t,s,pass\n");
}

TEST_CASE("exit codes") {
  std::string log;
  CHECK(cli({"verify", "--check", "decomposition", "--grid", "0:1:2", "--tol", "1e-300", "-o",
             out_file("fail.csv")}, &log) == exit_code::check_failed);
  CHECK(log.find("check failed") != std::string::npos);
  CHECK(fs::exists(out_file("fail.csv")));

  CHECK(cli({"cov", "--kernel", "nope", "-o", out_file("x.csv")}, &log) == exit_code::config_error);
  CHECK(log.find("kernel") != std::string::npos);
  CHECK(cli({"cov", "--kernel", "rz", "--H", "0.7", "-o", out_file("x.csv")}) == exit_code::config_error);
  CHECK(cli({"verify", "--H", "1.2", "-o", out_file("x.csv")}, &log) == exit_code::config_error);
  CHECK(log.find("H") != std::string::npos);
  CHECK(cli({"cov", "--grid", "1:0:3"}) == exit_code::config_error);
  CHECK(cli({"frobnicate"}) == exit_code::config_error);
  CHECK(cli({"cov", "--no-such-flag"}) == exit_code::config_error);
  CHECK(cli({"spde-mc", "--L", "1"}, &log) == exit_code::config_error);
  CHECK(log.find("L:") != std::string::npos);
  CHECK(cli({"verify", "--check", "forms", "--d", "3", "--H", "0.9"}) == exit_code::config_error);
  CHECK(cli({"cov", "-o", (scratch_dir() / "missing" / "x.csv").string()}) == exit_code::io_error);
}

TEST_CASE("JSON config file, flags win") {
  const auto cfg = out_file("config.json");
  std::ofstream(cfg) << R"({"kernel": "bifbm", "H": 0.5, "K": 1, "grid": "single:1,1"})";
  const auto a = out_file("cfg_a.csv");
  REQUIRE(cli({"cov", "--config", cfg, "-o", a}) == 0);
  CHECK(slurp(a) == "t,s,value\n1,1,1\n");
  REQUIRE(cli({"cov", "--config", cfg, "--grid", "single:2,2", "-o", a}) == 0);
  CHECK(slurp(a) == "t,s,value\n2,2,2\n");

  std::ofstream(cfg) << R"({"kernal": "bifbm"})";
  std::string log;
  CHECK(cli({"cov", "--config", cfg}, &log) == exit_code::config_error);
  CHECK(log.find("kernal") != std::string::npos);
  std::ofstream(cfg) << R"({"H": "high"})";
  CHECK(cli({"cov", "--config", cfg}) == exit_code::config_error);
  std::ofstream(cfg) << "{not json";
  CHECK(cli({"cov", "--config", cfg}) == exit_code::config_error);
  CHECK(cli({"cov", "--config", out_file("absent.json")}) == exit_code::config_error);
}

TEST_CASE("default output directory from the environment") {
  const auto dir = scratch_dir() / "envdir";
  fs::create_directories(dir);
  ::setenv("FRACHEAT_OUTPUT_DIR", dir.c_str(), 1);
  REQUIRE(cli({"cov", "--grid", "single:1,1", "--format", "json"}) == 0);
  ::unsetenv("FRACHEAT_OUTPUT_DIR");
  const auto j = nlohmann::json::parse(slurp(dir / "cov.json"));
  CHECK(j[0]["value"].get<double>() == doctest::Approx(0.5641895835477563));
}

TEST_CASE("identical configurations give identical bytes") {
  const std::vector<std::vector<std::string>> runs = {
      {"sample", "--kernel", "rx", "--H", "0.7", "--grid", "0:1:4", "--n-paths", "50", "--seed", "11"},
      {"spde-mc", "--nt", "8", "--nx", "16", "--L", "4", "--n-paths", "20", "--times", "1,0.5",
       "--format", "json"},
      {"scan", "--kernels", "swanson,rx", "--hursts", "0.6,0.8", "--sizes", "4"},
  };
  int k = 0;
  for (auto args : runs) {
    const auto a = out_file("det_a" + std::to_string(k));
    const auto b = out_file("det_b" + std::to_string(k++));
    auto args_a = args, args_b = args;
    args_a.insert(args_a.end(), {"-o", a});
    args_b.insert(args_b.end(), {"-o", b});
    REQUIRE(cli(args_a) == 0);
    REQUIRE(cli(args_b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
  }
  const auto c = out_file("det_c");
  REQUIRE(cli({"sample", "--kernel", "rx", "--H", "0.7", "--grid", "0:1:4", "--n-paths", "50",
               "--seed", "12", "-o", c}) == 0);
  CHECK(slurp(c) != slurp(out_file("det_a0")));
}
