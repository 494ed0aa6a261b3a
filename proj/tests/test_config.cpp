#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dioph/config.hpp"
#include "dioph/errors.hpp"

using namespace dioph;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("dioph_config_" + name + ".ini");
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("coefficient specs") {
  auto r = parse_coefficient(" 355/113 ");
  CHECK(r.value.value() == Rational(355, 113));
  CHECK(r.value.is_target_rational());
  CHECK_FALSE(r.cf.has_value());

  auto g = parse_coefficient("golden(30)");
  REQUIRE(g.cf.has_value());
  CHECK(g.cf->size() == 30);
  CHECK(parse_coefficient("golden").cf->size() == 40);

  auto s = parse_coefficient("sqrt(2, 25)");
  CHECK(s.cf->quotients[1] == 2);
  CHECK(s.cf->size() == 25);

  auto c = parse_coefficient("sigma(2,12)");
  CHECK(c.value.value() == construct_with_sigma(2, 12).value.value());
  CHECK(parse_coefficient("sigma(3)").cf->size() == 10);

  auto list = parse_coefficients("golden(20), 1/3 ,sigma(2,8)");
  REQUIRE(list.size() == 3);
  CHECK(list[1].value.value() == Rational(1, 3));
  CHECK(parse_coefficients("").empty());

  CHECK_THROWS_AS(parse_coefficient("pi"), ConfigError);
  CHECK_THROWS_AS(parse_coefficient("sqrt()"), ConfigError);
  CHECK_THROWS_AS(parse_coefficient("golden(x)"), ConfigError);
  CHECK_THROWS_AS(parse_coefficient("1.5"), ConfigError);
}

TEST_CASE("load_config") {
  const std::string good = write_temp("good", R"(
[hyperplane]
n = 3
s = 2
a = golden(40)
b = sigma(2, 10)
[search]
height_cap = 10000
sigma_cap = 5000
[sampling]
count = 4
seed = 9
mode = curve
[flow]
enabled = true
steps = 11
[run]
workers = 2
output = out/run
)");
  RunConfig rc = load_config(good);
  CHECK(rc.hyperplane.n == 3);
  CHECK(rc.hyperplane.s == 2);
  CHECK(rc.hyperplane.a[0].value() == golden(40).value.value());
  CHECK(rc.experiment.height_cap == 10000);
  CHECK(rc.experiment.sigma_cap == 5000);
  CHECK(rc.experiment.samples == 4);
  CHECK(rc.experiment.seed == 9);
  CHECK(rc.experiment.sampling == ExperimentConfig::Sampling::curve);
  CHECK(rc.experiment.flow);
  CHECK(rc.experiment.flow_steps == 11);
  CHECK(rc.experiment.workers == 2);
  CHECK(rc.output_dir == "out/run");
}

TEST_CASE("load_config lists every problem") {
  const std::string missing = write_temp("missing", "[hyperplane]\ns = 1\n[sampling]\ncount = 3\n");
  try {
    load_config(missing);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const char* key : {"hyperplane.n", "hyperplane.b", "search.height_cap", "sampling.seed", "run.output"})
      CHECK(msg.find(std::string("missing key ") + key) != std::string::npos);
    CHECK(msg.find("sampling.count") == std::string::npos);
  }

  const std::string bad = write_temp("bad", R"(
[hyperplane]
n = 2
s = 1
b = golden(10)
[search]
height_cap = 100000
[sampling]
count = -3
seed = 1
mode = sphere
[run]
output = x
)");
  try {
    load_config(bad);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("guard height") != std::string::npos);
    CHECK(msg.find("sampling.count") != std::string::npos);
    CHECK(msg.find("sampling.mode") != std::string::npos);
  }
}
