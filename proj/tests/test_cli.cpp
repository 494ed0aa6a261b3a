#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs dioph_lab with stderr folded into stdout.
Run lab(const std::string& args) {
  const std::string cmd = std::string(DIOPH_LAB) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

double value_of(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 1));
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("dioph_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

const std::string fixtures = FIXTURE_DIR;

}  // namespace

TEST_CASE("cfrac subcommand") {
  Run r = lab("cfrac --rational 355/113");
  CHECK(r.code == 0);
  CHECK(r.out.find("quotients [3;7,16] (terminated)") != std::string::npos);
  CHECK(r.out.find("sigma=inf") != std::string::npos);

  r = lab("cfrac --golden --depth 20");
  CHECK(r.code == 0);
  CHECK(r.out.find("quotients [1;1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1]\n") != std::string::npos);

  const fs::path csv = scratch("cfrac.csv");
  r = lab("cfrac --construct-sigma 2 --depth 6 --csv " + csv.string());
  CHECK(r.code == 0);
  const std::string text = slurp(csv);
  CHECK(first_line(text) == "# schema=dioph-lab/cfrac v1");
  CHECK(text.find("k,a_k,p_k,q_k,v_k") != std::string::npos);

  CHECK(lab("cfrac --spec 'golden(x)'").code == 2);
  CHECK(lab("cfrac --rational 1/0").code == 2);
  CHECK(lab("nosuch").code == 2);
}

TEST_CASE("estimate subcommand") {
  Run r = lab("estimate --point 'golden(40)' --cap 100000");
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "omega") == doctest::Approx(1.0).epsilon(0.05));

  r = lab("estimate --point 1/2,1/3 --cap 1000");
  CHECK(r.code == 0);
  CHECK(r.out.find("omega=inf") != std::string::npos);
  CHECK(r.out.find("exact-dependence") != std::string::npos);

  const fs::path a = scratch("rec_a.csv"), b = scratch("rec_b.csv");
  CHECK(lab("estimate --point 'sqrt(2)','sqrt(3)' --cap 3000 --workers 1 --records " + a.string()).code == 0);
  CHECK(lab("estimate --point 'sqrt(2)','sqrt(3)' --cap 3000 --workers 2 --records " + b.string()).code == 0);
  const std::string ra = slurp(a);
  CHECK(first_line(ra) == "# schema=dioph-lab/records v1");
  CHECK(ra == slurp(b));

  r = lab("estimate --point 'sqrt(2)','sqrt(3)' --cap 100000 --budget 1000");
  CHECK(r.code == 3);
  CHECK(r.out.find("resource guard") != std::string::npos);

  // the cap may not exceed what the truncation resolves
  CHECK(lab("estimate --point 'golden(10)' --cap 100000").code == 2);
}

TEST_CASE("flow subcommand") {
  // y = 0 splits the lattice; along (1/2, 1/2) the shortest vector shrinks like e^{-t/2}
  Run r = lab("flow --y 0,0 --direction 0.5,0.5 --tmax 10 --steps 11");
  CHECK(r.code == 0);
  CHECK(first_line(r.out) == "# schema=dioph-lab/trajectory v1");
  CHECK(value_of(r.out, "tail_slope") == doctest::Approx(0.5).epsilon(0.01));

  r = lab("flow --violations --n 2 --s 1 --b 'golden(40)' --d 0.1 --tmax 15");
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "violations") == 0);

  r = lab("flow --violations --n 2 --s 1 --b 'sigma(3,8)' --d 0.3 --tmax 15");
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "violations") >= 1);
  CHECK(r.out.find("w,t,log_norm") != std::string::npos);

  CHECK(lab("flow --y 1/2,1/3,1/5,1/7,1/11,1/13 --direction 1,0,0,0,0,0 --tmax 1 --steps 2").code == 3);
  CHECK(lab("flow --y 1/2 --direction 0.5,0.6 --tmax 1 --steps 2").code == 2);
}

TEST_CASE("experiment subcommand: config validation") {
  Run r = lab("experiment " + fixtures + "/missing_keys.ini");
  CHECK(r.code == 2);
  for (const char* key : {"hyperplane.n", "hyperplane.b", "search.height_cap", "sampling.seed", "run.output"})
    CHECK_MESSAGE(r.out.find(key) != std::string::npos, key);

  r = lab("experiment " + fixtures + "/small.ini --dry-run");
  CHECK(r.code == 0);
  CHECK(r.out.find("samples=4") != std::string::npos);
  CHECK(r.out.find("height_cap=10000") != std::string::npos);
}

TEST_CASE("experiment subcommand: outputs are complete and deterministic") {
  const fs::path d1 = scratch("run1"), d2 = scratch("run2");
  Run r = lab("experiment " + fixtures + "/small.ini --out " + d1.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("points=4") != std::string::npos);

  const std::string report = slurp(d1 / "report.csv");
  CHECK(first_line(report) == "# schema=dioph-lab/report v1");
  CHECK(report.find("sample_id,x_coords,omega_est,omega_mult_est,gamma_1,gamma_2,omega_from_gamma,"
                    "flow_bridge_est,theoretical,gap,flags") != std::string::npos);
  for (int id = 0; id < 4; ++id) {
    CHECK(fs::exists(d1 / "records" / (std::to_string(id) + ".csv")));
    CHECK(first_line(slurp(d1 / "trajectories" / (std::to_string(id) + ".csv"))) ==
          "# schema=dioph-lab/trajectory v1");
  }
  CHECK(fs::exists(d1 / "summary.txt"));

  // a nonempty run directory is kept unless forced
  CHECK(lab("experiment " + fixtures + "/small.ini --out " + d1.string()).code == 2);
  CHECK(slurp(d1 / "report.csv") == report);

  REQUIRE(lab("experiment " + fixtures + "/small.ini --workers 1 --out " + d2.string()).code == 0);
  CHECK(slurp(d2 / "report.csv") == report);
  CHECK(slurp(d2 / "records" / "2.csv") == slurp(d1 / "records" / "2.csv"));
  CHECK(slurp(d2 / "trajectories" / "1.csv") == slurp(d1 / "trajectories" / "1.csv"));

  REQUIRE(lab("experiment " + fixtures + "/small.ini --force --out " + d1.string()).code == 0);
  CHECK(slurp(d1 / "report.csv") == report);
}

TEST_CASE("experiment subcommand: golden plane matches theory") {
  const fs::path d = scratch("run_a");
  Run r = lab("experiment " + fixtures + "/fixture_a.ini --out " + d.string());
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "median_abs_gap") <= 0.4);
  CHECK(r.out.find("theory_agrees=yes") != std::string::npos);
}
