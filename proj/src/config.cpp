#include "dioph/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <regex>
#include <sstream>
#include <type_traits>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::size_t to_size(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("bad " + what + " in coefficient spec: " + s);
  }
}

}  // namespace

Coefficient parse_coefficient(const std::string& raw) {
  const std::string spec = trim(raw);
  static const std::regex call(R"(^(golden|sqrt|sigma)\s*(?:\(\s*([^,()]*?)\s*(?:,\s*([^,()]*?)\s*)?\))?$)");
  std::smatch m;
  Coefficient c;
  c.spec = spec;
  if (!std::regex_match(spec, m, call)) {
    try {
      c.value = ExactReal::parse(spec);
    } catch (const std::exception&) {
      throw ConfigError("unrecognized coefficient spec: '" + spec + "'");
    }
    return c;
  }
  const std::string name = m[1], first = m[2], second = m[3];
  Constructed k;
  if (name == "golden") {
    if (m[3].matched) throw ConfigError("golden takes one argument: " + spec);
    k = golden(first.empty() ? 40 : to_size(first, "depth"));
  } else if (name == "sqrt") {
    if (first.empty()) throw ConfigError("sqrt needs an argument: " + spec);
    k = sqrt_truncation(to_size(first, "radicand"), second.empty() ? 40 : to_size(second, "depth"));
  } else {
    if (first.empty()) throw ConfigError("sigma needs a target: " + spec);
    double target;
    try {
      target = std::stod(first);
    } catch (const std::exception&) {
      throw ConfigError("bad sigma target: " + spec);
    }
    k = construct_with_sigma(target, second.empty() ? 10 : to_size(second, "depth"));
  }
  c.value = k.value;
  c.cf = std::move(k.cf);
  return c;
}

std::vector<Coefficient> parse_coefficients(const std::string& list) {
  std::vector<Coefficient> out;
  std::string cur;
  int depth = 0;
  for (char ch : list) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(parse_coefficient(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(parse_coefficient(cur));
  return out;
}

std::vector<ExactReal> values(const std::vector<Coefficient>& cs) {
  std::vector<ExactReal> out;
  for (const auto& c : cs) out.push_back(c.value);
  return out;
}

RunConfig load_config(const std::string& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  std::vector<std::string> problems;
  auto optional = [&](const std::string& key) -> std::optional<std::string> {
    auto v = tree.get_optional<std::string>(key);
    return v ? std::optional(trim(*v)) : std::nullopt;
  };
  auto required = [&](const std::string& key) -> std::optional<std::string> {
    auto v = tree.get_optional<std::string>(key);
    if (!v) problems.push_back("missing key " + key);
    return v ? std::optional(trim(*v)) : std::nullopt;
  };
  auto number = [&](const std::string& key, auto fallback, bool must) {
    using T = decltype(fallback);
    auto v = must ? required(key) : optional(key);
    if (!v) return fallback;
    std::istringstream in(*v);
    T x{};
    in >> x;
    if (!in || !(in >> std::ws).eof() || (std::is_unsigned_v<T> && v->starts_with('-'))) {
      problems.push_back("key " + key + " is not a number: '" + *v + "'");
      return fallback;
    }
    return x;
  };

  RunConfig rc;
  ExperimentConfig& e = rc.experiment;
  const int n = number("hyperplane.n", 0, true);
  const int s = number("hyperplane.s", 0, true);
  const auto b_spec = required("hyperplane.b");
  const auto a_spec = optional("hyperplane.a");
  e.height_cap = number("search.height_cap", std::uint64_t{0}, true);
  e.sup_cap = number("search.sup_cap", e.sup_cap, false);
  e.sigma_cap = number("search.sigma_cap", e.sigma_cap, false);
  e.budget = number("search.budget", e.budget, false);
  e.gamma_grid.mesh = number("gamma.mesh", e.gamma_grid.mesh, false);
  e.samples = number("sampling.count", std::size_t{0}, true);
  e.seed = number("sampling.seed", std::uint64_t{0}, true);
  e.denominator_bits = number("sampling.denominator_bits", e.denominator_bits, false);
  const std::string mode = trim(tree.get<std::string>("sampling.mode", "box"));
  e.flow = trim(tree.get<std::string>("flow.enabled", "false")) == "true";
  e.flow_t_max = number("flow.t_max", e.flow_t_max, false);
  e.flow_steps = number("flow.steps", e.flow_steps, false);
  e.flow_mesh = number("flow.mesh", e.flow_mesh, false);
  e.flow_bits = number("flow.precision_bits", static_cast<long>(e.flow_bits), false);
  e.workers = number("run.workers", e.workers, false);
  if (auto out = required("run.output")) rc.output_dir = *out;

  if (mode == "curve")
    e.sampling = ExperimentConfig::Sampling::curve;
  else if (mode != "box")
    problems.push_back("sampling.mode must be box or curve, got '" + mode + "'");
  auto has = [&](const std::string& key) { return tree.get_optional<std::string>(key).has_value(); };
  const bool dims = has("hyperplane.n") && has("hyperplane.s");
  if (has("hyperplane.n") && n < 1) problems.push_back("hyperplane.n must be at least 1");
  if (dims && (s < 1 || s > n)) problems.push_back("hyperplane.s must satisfy 1 <= s <= n");
  if (dims && n + 1 > kMaxLatticeDim && e.flow) problems.push_back("flow needs n + 1 <= 6");
  if (has("search.height_cap") && e.height_cap < 2) problems.push_back("search.height_cap must be at least 2");
  if (has("sampling.count") && e.samples < 1) problems.push_back("sampling.count must be positive");
  if (e.denominator_bits < 2) problems.push_back("sampling.denominator_bits must be at least 2");
  if (e.flow_steps < 2) problems.push_back("flow.steps must be at least 2");
  if (e.flow_bits < 64) problems.push_back("flow.precision_bits must be at least 64");
  if (e.gamma_grid.mesh < 1 || e.flow_mesh < 1) problems.push_back("meshes must be positive");
  if (e.workers < 1) problems.push_back("run.workers must be positive");
  if (dims && e.sampling == ExperimentConfig::Sampling::curve && n < 3) problems.push_back("curve sampling needs n >= 3");

  auto parse_into = [&](const std::string& spec, auto& dst) {
    try {
      dst = parse_coefficient(spec);
    } catch (const Error& err) {
      problems.push_back(err.what());
    }
  };
  if (b_spec) parse_into(*b_spec, rc.b);
  if (a_spec) {
    try {
      rc.a = parse_coefficients(*a_spec);
    } catch (const Error& err) {
      problems.push_back(err.what());
    }
  }
  if (dims && s >= 1 && static_cast<int>(rc.a.size()) != s - 1)
    problems.push_back("hyperplane.a must list s-1 = " + std::to_string(std::max(0, s - 1)) + " coefficients");
  for (const auto& c : rc.a)
    if (c.value.value() == 0) problems.push_back("hyperplane.a entries must be nonzero");

  // Heights must stay inside every constructed coefficient's guard.
  std::vector<const Coefficient*> all;
  for (const auto& c : rc.a) all.push_back(&c);
  if (b_spec) all.push_back(&rc.b);
  for (const Coefficient* c : all) {
    const auto& g = c->value.guard_height();
    if (!g) continue;
    if (BigInt(std::to_string(e.height_cap)) > *g)
      problems.push_back("search.height_cap exceeds the guard height " + g->get_str() + " of " + c->spec);
    if (s > 1 && BigInt(std::to_string(e.sigma_cap)) > *g)
      problems.push_back("search.sigma_cap exceeds the guard height " + g->get_str() + " of " + c->spec);
  }

  if (!problems.empty()) {
    std::string msg = "invalid config " + path + ":";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  rc.hyperplane = Hyperplane(n, s, values(rc.a), rc.b.value);
  return rc;
}

}  // namespace dioph
