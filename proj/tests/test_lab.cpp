#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hawking/ambient.hpp"
#include "hawking/lab.hpp"
#include "hawking/profile.hpp"

using namespace hawking;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text, const std::vector<std::string>& overrides = {}) {
  std::istringstream in(text);
  return parse_config(in, overrides);
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("hawking_lab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("config parsing with comments and overrides") {
  const auto c = parse("# profile run\ncommand = profile\na = 0.3, 0.6\nn_theta=65  # coarse\n", {"a=0.9", "dt=5e-3"});
  CHECK(c.command == "profile");
  REQUIRE(c.a_values.size() == 1);
  CHECK(c.a_values[0] == 0.9);
  CHECK(c.n_theta == 65);
  CHECK(c.dt == 5e-3);
  CHECK(c.number("dt", 0.0) == 5e-3);
  CHECK(c.number("s0", 0.25) == 0.25);
  CHECK(c.tolerance("drift") == default_tolerances().at("drift"));
  CHECK_THROWS_AS(c.tolerance("nonsense"), ConfigError);
}

TEST_CASE("mass is converted to the parameter a") {
  const auto c = parse("command=profile\nm=0.3\n");
  REQUIRE(c.a_values.size() == 1);
  CHECK(mass_from_a(c.a_values[0]) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("an empty override removes a key") {
  const auto c = parse("command=profile\na=0.6\nseed=7\n", {"seed="});
  CHECK_FALSE(c.seed.has_value());
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS_AS(parse("command=profile\nbogus=1\n"), ConfigError);
  CHECK_THROWS_AS(parse("command=profile\na=0.6\nm=0.2\n"), ConfigError);
  CHECK_THROWS_AS(parse("command=profile\na=abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("command=profile\nno equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse("command=profile\nseed=-3\n"), ConfigError);
}

TEST_CASE("validation") {
  CHECK_NOTHROW(validate(parse("command=profile\na=0.6\n")));
  CHECK_THROWS_AS(validate(parse("command=explode\na=0.6\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse("command=profile\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse("command=graph-sweep\na=0.6\n")), ConfigError);
  CHECK_NOTHROW(validate(parse("command=graph-sweep\na=0.6\nseed=1\n")));
  CHECK_THROWS_AS(validate(parse("command=profile\na=0.6\ntol_drift=0\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse("command=spectrum\na=0.6\nn_phi=3\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse("command=spectrum\na=0.6\nambient=bump\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse("command=cmc-foliate\nambient=table\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse("command=profile\na=0.6\nfd_steps=1e-2\n")), ConfigError);
  CHECK_NOTHROW(validate(parse("command=cmc-foliate\na=0.6\nambient=bump\n")));
}

TEST_CASE("subcommand list") {
  for (const char* name : {"profile", "slice-report", "spectrum", "variation-check", "cmc-foliate",
                           "graph-sweep", "double-check"})
    CHECK(std::find(subcommands().begin(), subcommands().end(), name) != subcommands().end());
}

TEST_CASE("runs are deterministic and write their tables") {
  unsetenv("HAWKING_LAB_OUT");
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  const std::string text = "command=graph-sweep\na=0.6\nseed=11\nsamples=4\nn_theta=33\n";
  auto c1 = parse(text, {"output_dir=" + d1.string()});
  auto c2 = parse(text, {"output_dir=" + d2.string(), "plot_data=1"});
  const auto r1 = run(c1);
  const auto r2 = run(c2);
  CHECK(r1.pass);
  CHECK(r1.summary["results"] == r2.summary["results"]);
  CHECK(fs::exists(d1 / "summary.json"));
  CHECK(fs::exists(d1 / "graph_sweep_a0.6.csv"));
  CHECK_FALSE(fs::exists(d1 / "graph_sweep_a0.6.dat"));
  CHECK(fs::exists(d2 / "graph_sweep_a0.6.dat"));
  CHECK(slurp(d1 / "graph_sweep_a0.6.csv") == slurp(d2 / "graph_sweep_a0.6.csv"));
}

TEST_CASE("the environment overrides the output directory") {
  const auto d = scratch("env");
  setenv("HAWKING_LAB_OUT", d.string().c_str(), 1);
  const auto r = run(parse("command=slice-report\na=0.6\nn_theta=33\noutput_dir=/nonexistent/never"));
  unsetenv("HAWKING_LAB_OUT");
  CHECK(r.output_dir == d);
  CHECK(fs::exists(d / "summary.json"));
  CHECK(r.pass);
}

TEST_CASE("a tabulated ambient drives a foliation") {
  unsetenv("HAWKING_LAB_OUT");
  const auto d = scratch("table");
  fs::create_directories(d);
  {
    std::ofstream f(d / "ambient.csv");
    write_ambient_table(Ambient::warped(Profile::integrate(ProfileParams::from_a(0.6))), -0.6, 0.6, 241, 65, f);
  }
  const auto r = run(parse("command=cmc-foliate\nambient=table\nn_theta=33\nt_min=-0.1\nt_max=0.1\n",
                           {"table=" + (d / "ambient.csv").string(), "output_dir=" + (d / "out").string()}));
  CHECK(r.summary["command"] == "cmc-foliate");
  CHECK(r.summary["checks"].size() > 0);
  CHECK(fs::exists(d / "out" / "summary.json"));
}

TEST_CASE("missing table is a config error") {
  unsetenv("HAWKING_LAB_OUT");
  CHECK_THROWS_AS(run(parse("command=cmc-foliate\nambient=table\ntable=/no/such/file.csv\n")), ConfigError);
}
