// dioph_lab: command-line front end for the record search, continued
// fraction, lattice-flow and hyperplane experiment routes.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dioph/cfrac.hpp"
#include "dioph/config.hpp"
#include "dioph/errors.hpp"
#include "dioph/experiment.hpp"
#include "dioph/lattice.hpp"

namespace fs = std::filesystem;
using namespace dioph;

namespace {

enum Status { kOk = 0, kUsage = 2, kResource = 3, kInternal = 4 };

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

std::vector<double> parse_doubles(const std::string& list) {
  std::vector<double> out;
  std::stringstream in(list);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + item + "'");
    }
  }
  return out;
}

struct CfracArgs {
  bool golden = false;
  std::string sqrt_k, sigma, rational, spec, csv;
  std::size_t depth = 20;
};

int cmd_cfrac(const CfracArgs& a) {
  const int chosen = a.golden + !a.sqrt_k.empty() + !a.sigma.empty() + !a.rational.empty() + !a.spec.empty();
  if (chosen != 1) throw ConfigError("give exactly one of --golden, --sqrt, --construct-sigma, --rational, --spec");
  CFrac cf;
  bool rational_target = false;
  if (a.golden) {
    cf = golden(a.depth).cf;
  } else if (!a.sqrt_k.empty()) {
    cf = parse_coefficient("sqrt(" + a.sqrt_k + "," + std::to_string(a.depth) + ")").cf.value();
  } else if (!a.sigma.empty()) {
    cf = parse_coefficient("sigma(" + a.sigma + "," + std::to_string(a.depth) + ")").cf.value();
  } else {
    Coefficient c = parse_coefficient(a.rational.empty() ? a.spec : a.rational);
    rational_target = c.value.is_target_rational();
    cf = c.cf ? *c.cf : expand(c.value, rational_target ? std::max<std::size_t>(a.depth, 100000) : a.depth);
  }
  std::string quot = "[" + cf.quotients[0].get_str();
  for (std::size_t i = 1; i < cf.size(); ++i) quot += (i == 1 ? ";" : ",") + cf.quotients[i].get_str();
  quot += "]";
  std::printf("quotients %s%s\n", quot.c_str(), cf.terminated ? " (terminated)" : "");

  std::vector<double> v(cf.size(), 0.0);
  std::vector<bool> has_v(cf.size(), false);
  for (std::size_t k = 0; k + 1 < cf.size(); ++k)
    if (cf.q[k] >= 2) v[k] = log_abs(cf.q[k + 1]) / log_abs(cf.q[k]), has_v[k] = true;
  std::printf("%4s %24s %24s %24s %14s\n", "k", "a_k", "p_k", "q_k", "v_k");
  for (std::size_t k = 0; k < cf.size(); ++k)
    std::printf("%4zu %24s %24s %24s %14s\n", k, cf.quotients[k].get_str().c_str(), cf.p[k].get_str().c_str(),
                cf.q[k].get_str().c_str(), has_v[k] ? real_str(v[k]).c_str() : "");
  try {
    std::printf("sigma=%s\n", sigma_from_cfrac(cf, rational_target).sigma.str().c_str());
  } catch (const InsufficientData&) {
    std::printf("sigma=\n");
  }
  if (!a.csv.empty()) {
    auto out = open_out(a.csv);
    out << schema_stamp("cfrac") << "\nk,a_k,p_k,q_k,v_k\n";
    for (std::size_t k = 0; k < cf.size(); ++k)
      out << k << ',' << cf.quotients[k].get_str() << ',' << cf.p[k].get_str() << ',' << cf.q[k].get_str() << ','
          << (has_v[k] ? real_str(v[k]) : "") << '\n';
  }
  return kOk;
}

struct EstimateArgs {
  std::string point, records;
  std::uint64_t cap = 0, sup_cap = 0, budget = 0;
  unsigned workers = 1;
};

int cmd_estimate(const EstimateArgs& a) {
  const std::vector<ExactReal> y = values(parse_coefficients(a.point));
  if (y.empty()) throw ConfigError("--point needs at least one coordinate");
  SearchOptions opts;
  opts.height_cap = a.cap;
  opts.sup_cap = a.sup_cap;
  if (a.budget) opts.budget = a.budget;
  opts.workers = a.workers;
  RecordSet rs = search_records(y, opts);
  if (!a.records.empty()) {
    auto out = open_out(a.records);
    write_records_csv(out, rs);
  }
  std::vector<std::string> flags;
  if (rs.exact_dependence) flags.push_back("exact-dependence");
  std::string omega = "", mult = "";
  try {
    omega = omega_estimate(rs).str();
  } catch (const InsufficientData&) {
    flags.push_back("omega-insufficient");
  }
  try {
    mult = omega_mult_estimate(rs).str();
  } catch (const InsufficientData&) {
    flags.push_back("omega-mult-insufficient");
  }
  std::string f;
  for (const auto& x : flags) f += (f.empty() ? "" : "|") + x;
  std::printf("omega=%s, omega_mult=%s, flags=%s\n", omega.c_str(), mult.c_str(), f.c_str());
  return kOk;
}

struct FlowArgs {
  std::string y, direction, csv;
  double t_max = 30.0;
  int steps = 121;
  long bits = 256;
  bool violations = false;
  int n = 0, s = 1;
  std::string a, b;
  double d = 0.1, t_min = 5.0, t_step = 0.25;
  std::uint64_t w_budget = 100000;
};

std::ostream& csv_target(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file = open_out(path);
  return file;
}

int cmd_flow(const FlowArgs& a) {
  std::ofstream file;
  if (!a.violations) {
    const std::vector<ExactReal> y = values(parse_coefficients(a.y));
    if (y.empty()) throw ConfigError("--y is required in trajectory mode");
    std::vector<std::vector<double>> dirs;
    if (a.direction.empty())
      dirs = simplex_grid(static_cast<int>(y.size()), 4);
    else
      dirs.push_back(parse_doubles(a.direction));
    std::vector<Trajectory> trs;
    for (const auto& d : dirs) trs.push_back(flow_trajectory(y, d, a.t_max, a.steps, a.bits));
    write_trajectory_csv(csv_target(a.csv, file), trs);
    double best = 0;
    for (const auto& t : trs) best = std::max(best, t.slope);
    std::cerr << "tail_slope=" << real_str(best) << '\n';
    return kOk;
  }
  if (a.n < 1 || a.b.empty()) throw ConfigError("violation mode needs --n and --b");
  Hyperplane h(a.n, a.s, values(parse_coefficients(a.a)), parse_coefficient(a.b).value);
  std::vector<double> dir(a.n, 0.0);
  if (a.direction.empty())
    dir[a.n - 1] = 1.0;
  else
    dir = parse_doubles(a.direction);
  if (!(a.t_step > 0)) throw ConfigError("--tstep must be positive");
  std::vector<FlowParams> schedule;
  for (double t = a.t_min; t <= a.t_max + 1e-9; t += a.t_step) schedule.push_back(FlowParams::along(dir, t));
  auto found = violation_search(h, a.d, schedule, a.w_budget);
  std::ostream& out = csv_target(a.csv, file);
  out << schema_stamp("violations") << "\nw,t,log_norm\n";
  for (const auto& v : found) out << v.w.str() << ',' << real_str(v.flow.t()) << ',' << real_str(v.log_norm) << '\n';
  std::cerr << "violations=" << found.size() << '\n';
  return kOk;
}

struct ExperimentArgs {
  std::string config, out;
  bool force = false, dry_run = false;
  unsigned workers = 0;
};

int cmd_experiment(const ExperimentArgs& a) {
  RunConfig rc = load_config(a.config);
  if (!a.out.empty()) rc.output_dir = a.out;
  if (a.workers) rc.experiment.workers = a.workers;
  const auto& e = rc.experiment;
  const fs::path dir(rc.output_dir);
  if (a.dry_run) {
    std::printf("hyperplane n=%d s=%d b=%s", rc.hyperplane.n, rc.hyperplane.s, rc.b.spec.c_str());
    for (const auto& c : rc.a) std::printf(" a=%s", c.spec.c_str());
    std::printf("\nsamples=%zu mode=%s seed=%llu denominator_bits=%u\n", e.samples,
                e.sampling == ExperimentConfig::Sampling::box ? "box" : "curve",
                static_cast<unsigned long long>(e.seed), e.denominator_bits);
    SearchOptions opts;
    opts.height_cap = e.height_cap;
    opts.sup_cap = e.sup_cap;
    std::printf("height_cap=%llu sigma_cap=%llu search_cost_per_point=%llu budget=%llu\n",
                static_cast<unsigned long long>(e.height_cap), static_cast<unsigned long long>(e.sigma_cap),
                static_cast<unsigned long long>(search_cost(rc.hyperplane.n, opts)),
                static_cast<unsigned long long>(e.budget));
    std::printf("flow=%s output=%s\n", e.flow ? "on" : "off", dir.string().c_str());
    return kOk;
  }
  if (fs::exists(dir) && !fs::is_empty(dir)) {
    if (!a.force) throw ConfigError("run directory " + dir.string() + " is not empty (use --force)");
    fs::remove_all(dir);
  }
  fs::create_directories(dir / "records");
  ExperimentReport rep = run_experiment(rc.hyperplane, e);
  {
    auto out = open_out((dir / "report.csv").string());
    write_report_csv(out, rep);
  }
  for (const auto& row : rep.rows) {
    if (row.skipped) continue;
    auto out = open_out((dir / "records" / (std::to_string(row.id) + ".csv")).string());
    write_records_csv(out, row.records);
  }
  if (e.flow) {
    fs::create_directories(dir / "trajectories");
    for (const auto& row : rep.rows) {
      if (row.trajectories.empty()) continue;
      auto out = open_out((dir / "trajectories" / (std::to_string(row.id) + ".csv")).string());
      write_trajectory_csv(out, row.trajectories);
    }
  }
  {
    auto out = open_out((dir / "summary.txt").string());
    write_summary(out, rep);
  }
  write_summary(std::cout, rep);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diophantine exponent workbench"};
  app.require_subcommand(1);

  CfracArgs ca;
  auto* cfrac = app.add_subcommand("cfrac", "expand or construct a continued fraction");
  cfrac->add_flag("--golden", ca.golden, "golden ratio truncation");
  cfrac->add_option("--sqrt", ca.sqrt_k, "sqrt(k) truncation");
  cfrac->add_option("--construct-sigma", ca.sigma, "construct a number with this sigma");
  cfrac->add_option("--rational", ca.rational, "expand p/q");
  cfrac->add_option("--spec", ca.spec, "any coefficient spec");
  cfrac->add_option("--depth", ca.depth, "number of partial quotients")->check(CLI::PositiveNumber);
  cfrac->add_option("--csv", ca.csv, "write the convergent series here");

  EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate", "record search and exponent estimates for one point");
  estimate->add_option("--point", ea.point, "comma-separated coefficient specs")->required();
  estimate->add_option("--cap", ea.cap, "bound on the product height")->required();
  estimate->add_option("--sup-cap", ea.sup_cap, "bound on the sup height of the envelope");
  estimate->add_option("--budget", ea.budget, "candidate evaluation budget");
  estimate->add_option("--workers", ea.workers, "search threads")->check(CLI::PositiveNumber);
  estimate->add_option("--records", ea.records, "write the records CSV here");

  FlowArgs fa;
  auto* flow = app.add_subcommand("flow", "flow trajectories or violation search");
  flow->add_option("--y", fa.y, "point, comma-separated coefficient specs");
  flow->add_option("--direction", fa.direction, "simplex point; default: grid of mesh 4 (trajectory) or e_n");
  flow->add_option("--tmax", fa.t_max, "largest flow magnitude");
  flow->add_option("--steps", fa.steps, "trajectory grid points");
  flow->add_option("--bits", fa.bits, "working precision");
  flow->add_option("--csv", fa.csv, "output CSV (default stdout)");
  flow->add_flag("--violations", fa.violations, "search for violations of the flow condition");
  flow->add_option("--n", fa.n, "hyperplane dimension");
  flow->add_option("--s", fa.s, "hyperplane parameter count");
  flow->add_option("--a", fa.a, "coefficients a_1..a_{s-1}");
  flow->add_option("--b", fa.b, "coefficient b");
  flow->add_option("--d", fa.d, "violation level");
  flow->add_option("--tmin", fa.t_min, "smallest scheduled magnitude");
  flow->add_option("--tstep", fa.t_step, "schedule spacing");
  flow->add_option("--w-budget", fa.w_budget, "bound on |p_i|");

  ExperimentArgs xa;
  auto* experiment = app.add_subcommand("experiment", "run a hyperplane experiment from a config file");
  experiment->add_option("config", xa.config, "INI config")->required()->check(CLI::ExistingFile);
  experiment->add_option("--out", xa.out, "run directory (overrides run.output)");
  experiment->add_option("--workers", xa.workers, "worker threads (overrides run.workers)");
  experiment->add_flag("--force", xa.force, "replace a nonempty run directory");
  experiment->add_flag("--dry-run", xa.dry_run, "validate and print the plan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cfrac) return cmd_cfrac(ca);
    if (*estimate) return cmd_estimate(ea);
    if (*flow) return cmd_flow(fa);
    return cmd_experiment(xa);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource guard: " << e.what() << '\n';
    return kResource;
  } catch (const Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kResource;
  } catch (const InsufficientData& e) {
    std::cerr << "insufficient data: " << e.what() << " (raise the cap)\n";
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
