#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kuramoto2c/bifurcation.hpp"
#include "kuramoto2c/cli.hpp"
#include "kuramoto2c/errors.hpp"

using namespace kuramoto2c;

namespace {

struct Result {
  int code;
  std::string out;
  std::string log;
};

Result execute(const RunConfig& cfg) {
  std::ostringstream out;
  std::ostringstream log;
  const int code = run(cfg, out, log);
  return {code, out.str(), log.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  return rows;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> v;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) v.push_back(std::stod(cell));
  return v;
}

std::string config_echo(const std::string& text) {
  const std::string tag = "# config: ";
  const auto pos = text.find(tag);
  REQUIRE(pos != std::string::npos);
  return text.substr(pos + tag.size(), text.find('\n', pos) - pos - tag.size());
}

}  // namespace

TEST_CASE("command names") {
  for (Command c : all_commands()) CHECK(parse_command(to_string(c)) == c);
  CHECK(to_string(Command::pde_evolve) == "pde-evolve");
  CHECK_THROWS_AS(parse_command("plot"), ConfigError);
}

TEST_CASE("typed parameters") {
  auto cfg = RunConfig::defaults(Command::solve);
  CHECK(cfg.real("K") == 5.0);
  cfg.set("K", "6.5");
  CHECK(cfg.real("K") == 6.5);
  cfg.set("n", "16");
  CHECK(cfg.integer("n") == 16);
  CHECK_THROWS_AS(cfg.set("n", "1.5"), ConfigError);
  CHECK_THROWS_AS(cfg.set("K", "abc"), ConfigError);
  CHECK_THROWS_AS(cfg.set("steps", "10"), ConfigError);
  CHECK_THROWS_AS(cfg.real("psi"), ConfigError);
}

TEST_CASE("JSON round trip of defaults and presets") {
  for (Command c : all_commands()) {
    const auto cfg = RunConfig::defaults(c);
    CHECK(RunConfig::from_json(cfg.to_json()) == cfg);
  }
  for (const auto& name : preset_names()) {
    auto cfg = preset(name);
    cfg.seed = 0xffffffffffffffffULL;
    cfg.out = "x.csv";
    CHECK(RunConfig::from_json(cfg.to_json()) == cfg);
  }
  CHECK_THROWS_AS(RunConfig::from_json("{\"command\":\"solve\",\"params\":{\"bogus\":1}}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json("{\"command\":\"solve\",\"colour\":1}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json("{\"command\":\"solve\",\"params\":{\"K\":\"five\"}}"), ConfigError);
  CHECK(RunConfig::from_json("{\"command\":\"solve\"}") == RunConfig::defaults(Command::solve));
}

TEST_CASE("presets carry the figure parameters") {
  const auto f2 = preset("fig2");
  CHECK(f2.command == Command::solve);
  CHECK(f2.real("K") == 5.0);
  CHECK(f2.real("L") == -1.0);
  const auto f9 = preset("fig9");
  CHECK(f9.command == Command::simulate);
  CHECK(f9.real("K") == 7.0);
  CHECK(f9.real("L") == -2.0);
  const auto f10 = preset("fig10");
  CHECK(f10.real("K") == 5.0);
  CHECK(f10.real("L") == 2.0);
  CHECK(f10.integer("n1") == 1000);
  CHECK(f10.real("dt") == 0.01);
  CHECK(preset("fig8").command == Command::phase_diagram);
  CHECK(preset("fig3").real("L") == -2.0);
  CHECK_THROWS_AS(preset("fig11"), ConfigError);
}

TEST_CASE("the config echo re-parses to the same config") {
  auto cfg = RunConfig::defaults(Command::bifurcation_line);
  cfg.set("points", "7");
  cfg.seed = 42;
  const auto r = execute(cfg);
  REQUIRE(r.code == kExitOk);
  CHECK(RunConfig::from_json(config_echo(r.out)) == cfg);
  CHECK(r.out.find("# seed: 42") != std::string::npos);
}

TEST_CASE("bifurcation-line rows satisfy the curve") {
  auto cfg = RunConfig::defaults(Command::bifurcation_line);
  cfg.set("l_min", "-4");
  cfg.set("l_max", "-0.1");
  cfg.set("points", "200");
  const auto r = execute(cfg);
  REQUIRE(r.code == kExitOk);
  const auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 201);
  CHECK(rows[0] == "K,L,r_star,dr_dK,dL_dK");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto v = split_numbers(rows[i]);
    REQUIRE(v.size() == 5);
    CHECK(std::abs(curve_defect(v[0], v[1])) <= kOnCurveTolerance);
    CHECK(v[2] == doctest::Approx(r_star(v[0], v[1])).epsilon(1e-12));
  }
}

TEST_CASE("identical config and seed give identical bytes") {
  auto cfg = RunConfig::defaults(Command::simulate);
  cfg.set("n1", "50");
  cfg.set("n2", "50");
  cfg.set("steps", "100");
  cfg.seed = 9;
  const auto a = execute(cfg);
  const auto b = execute(cfg);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  cfg.seed = 10;
  CHECK(execute(cfg).out != a.out);
}

TEST_CASE("exit codes") {
  auto bad = RunConfig::defaults(Command::solve);
  bad.set("K", "-1");
  const auto r = execute(bad);
  CHECK(r.code == kExitConfig);
  CHECK(!r.log.empty());
  CHECK(r.out.empty());

  auto io = RunConfig::defaults(Command::bifurcation_line);
  io.out = "/nonexistent-dir/out.csv";
  CHECK(execute(io).code == kExitIo);

  auto suite = RunConfig::defaults(Command::verify);
  suite.set("suite", "nope");
  CHECK(execute(suite).code == kExitConfig);
}

TEST_CASE("output file") {
  auto cfg = RunConfig::defaults(Command::bifurcation_line);
  cfg.set("points", "4");
  const std::string path = "test_cli_out.csv";
  cfg.out = path;
  const auto r = execute(cfg);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(data_lines(text.str()).size() == 5);
  std::remove(path.c_str());
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) == 3);
  setenv("KURAMOTO2C_THREADS", "5", 1);
  CHECK(resolve_threads(0) == 5);
  CHECK(resolve_threads(2) == 2);
  unsetenv("KURAMOTO2C_THREADS");
  CHECK(resolve_threads(0) == 1);
}

TEST_CASE("verify suite through run") {
  auto cfg = RunConfig::defaults(Command::verify);
  cfg.set("suite", "bessel");
  const auto r = execute(cfg);
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
}
