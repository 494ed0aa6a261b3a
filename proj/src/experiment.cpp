#include "dioph/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include "dioph/cfrac.hpp"
#include "dioph/errors.hpp"
#include "dioph/fit.hpp"

namespace dioph {

namespace {

constexpr double kGammaBridgeTol = 0.3;
constexpr double kTheoryTol = 0.4;

BigInt random_bits(std::mt19937_64& rng, unsigned bits) {
  BigInt r = 0;
  for (unsigned done = 0; done < bits; done += 64) {
    const unsigned take = std::min(64u, bits - done);
    std::uint64_t w = rng();
    if (take < 64) w &= (std::uint64_t{1} << take) - 1;
    r <<= take;
    r += BigInt(std::to_string(w));
  }
  return r;
}

BigInt random_prime(std::mt19937_64& rng, unsigned bits) {
  while (true) {
    BigInt r = random_bits(rng, bits - 1) + (BigInt(1) << (bits - 1));
    BigInt p;
    mpz_nextprime(p.get_mpz_t(), r.get_mpz_t());
    if (mpz_sizeinbase(p.get_mpz_t(), 2) == bits) return p;
  }
}

// Uniform-ish rational in (0,1) with a prime denominator of exactly `bits` bits.
Rational random_unit(std::mt19937_64& rng, unsigned bits) {
  BigInt q = random_prime(rng, bits);
  BigInt p = random_bits(rng, bits + 64) % (q - 1) + 1;
  return Rational(p, q);
}

void check_bits(unsigned bits) {
  if (bits < 2) throw DomainError("denominators need at least 2 bits");
}

double max_gamma(const std::vector<GammaEstimate>& g) {
  double m = 0;
  for (const auto& x : g) m = std::max(m, x.value);
  return m;
}

}  // namespace

Exponent theoretical_exponent(const Hyperplane& h, std::uint64_t sigma_cap) {
  Exponent sigma;
  if (h.s == 1) {
    if (h.b.is_target_rational()) {
      sigma.infinite = true;
    } else {
      CFrac cf = expand(h.b, 100000);
      sigma = sigma_from_cfrac(cf).sigma;
    }
  } else {
    std::vector<ExactReal> col(h.a.begin(), h.a.end());
    col.push_back(h.b);
    sigma = sigma_vector_estimate(col, sigma_cap).sigma;
  }
  Exponent out;
  if (sigma.infinite) {
    out.infinite = true;
    return out;
  }
  out.value = std::max<double>(h.n, static_cast<double>(h.n) / h.s * sigma.value);
  return out;
}

std::vector<Sample> sample_box(const Hyperplane& h, std::size_t count, unsigned denominator_bits, std::uint64_t seed) {
  if (count < 1) throw DomainError("sample count must be positive");
  check_bits(denominator_bits);
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < count; ++i) {
    Sample s;
    for (int j = 0; j + 1 < h.n; ++j) s.x.emplace_back(random_unit(rng, denominator_bits));
    s.y = point_on(h, s.x);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Sample> sample_curve(const Hyperplane& h, std::size_t count, std::uint64_t seed, unsigned denominator_bits) {
  if (h.n < 3)
    throw Unsupported("a curve is nondegenerate in the (n-1)-dimensional parameter space only when n >= 3");
  if (count < 1) throw DomainError("sample count must be positive");
  check_bits(denominator_bits);
  std::mt19937_64 rng(seed);
  std::set<Rational> seen;
  std::vector<Sample> out;
  while (out.size() < count) {
    Rational tau = random_unit(rng, denominator_bits);
    if (!seen.insert(tau).second) continue;
    Sample s;
    Rational pw = tau;
    for (int j = 0; j + 1 < h.n; ++j) {
      s.x.emplace_back(pw);
      pw *= tau;
    }
    s.y = point_on(h, s.x);
    out.push_back(std::move(s));
  }
  return out;
}

SandwichResult sandwich_check(int n, const Exponent& omega, const Exponent& omega_mult, double tol) {
  SandwichResult r;
  if (omega.infinite || omega_mult.infinite) {
    r.skipped = true;
    return r;
  }
  r.ok = omega.value - tol <= omega_mult.value && omega_mult.value <= n * omega.value + tol;
  return r;
}

PointResult evaluate_point(const Sample& s, int n, const ExperimentConfig& cfg) {
  PointResult pr;
  pr.sample = s;
  SearchOptions opts;
  opts.height_cap = cfg.height_cap;
  opts.sup_cap = cfg.sup_cap;
  opts.budget = cfg.budget;
  try {
    pr.records = search_records(s.y, opts);
  } catch (const ResourceLimit& e) {
    pr.skipped = true;
    pr.skip_reason = e.what();
    pr.flags.push_back("skipped");
    return pr;
  }
  if (pr.records.exact_dependence) pr.flags.push_back("exact-dependence");
  try {
    pr.omega = omega_estimate(pr.records);
  } catch (const InsufficientData&) {
    pr.flags.push_back("omega-insufficient");
  }
  try {
    pr.omega_mult = omega_mult_estimate(pr.records);
  } catch (const InsufficientData&) {
    pr.flags.push_back("omega-mult-insufficient");
  }
  pr.gammas = gamma_estimates(pr.records, cfg.gamma_grid);
  pr.omega_from_gamma = omega_from_gamma(pr.gammas);
  if (std::any_of(pr.gammas.begin(), pr.gammas.end(), [](const auto& g) { return g.saturated; }))
    pr.flags.push_back("gamma-saturated");

  if (pr.omega && pr.omega_mult) {
    SandwichResult sw = sandwich_check(n, *pr.omega, *pr.omega_mult);
    if (sw.skipped)
      pr.flags.push_back("sandwich-skipped");
    else if (!sw.ok)
      pr.flags.push_back("sandwich");
  }
  if (pr.omega_mult && !pr.omega_mult->infinite && !pr.omega_from_gamma->infinite &&
      std::abs(pr.omega_mult->value - pr.omega_from_gamma->value) > kGammaBridgeTol)
    pr.flags.push_back("gamma-bridge");

  if (cfg.flow) {
    try {
      double best = 0;
      for (const auto& d : simplex_grid(n, cfg.flow_mesh)) {
        pr.trajectories.push_back(flow_trajectory(s.y, d, cfg.flow_t_max, cfg.flow_steps, cfg.flow_bits));
        best = std::max(best, pr.trajectories.back().slope);
      }
      pr.flow_bridge = best;
      if (std::abs(best - max_gamma(pr.gammas)) > kBridgeTol) pr.flags.push_back("flow-bridge");
    } catch (const Unsupported&) {
      pr.trajectories.clear();
      pr.flags.push_back("flow-unsupported");
    }
  }
  return pr;
}

ExperimentSummary summarize(const std::vector<PointResult>& rows, const Exponent& theoretical) {
  ExperimentSummary s;
  s.points = rows.size();
  std::vector<double> est, gaps, abs_gaps;
  for (const auto& r : rows) {
    if (r.skipped) {
      ++s.skipped;
      continue;
    }
    for (const auto& f : r.flags)
      if (f == "sandwich") ++s.sandwich_violations;
    if (!r.omega_mult || r.omega_mult->infinite) continue;
    est.push_back(r.omega_mult->value);
    if (r.gap) {
      gaps.push_back(*r.gap);
      abs_gaps.push_back(std::abs(*r.gap));
    }
    if (!r.omega_from_gamma->infinite && std::abs(r.omega_from_gamma->value - r.omega_mult->value) <= kGammaBridgeTol)
      ++s.bridge_agreements;
    if (r.flow_bridge) {
      ++s.flow_points;
      if (std::abs(*r.flow_bridge - max_gamma(r.gammas)) <= kBridgeTol) ++s.flow_agreements;
    }
  }
  if (!est.empty()) {
    s.median_omega_mult = median(est);
    s.iqr_omega_mult = quantile(est, 0.75) - quantile(est, 0.25);
  }
  if (!gaps.empty()) {
    s.median_gap = median(gaps);
    s.median_abs_gap = median(abs_gaps);
    s.theory_agrees = !theoretical.infinite && s.median_abs_gap <= kTheoryTol;
  }
  return s;
}

ExperimentReport run_experiment(const Hyperplane& h, const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.h = h;
  rep.config = cfg;
  rep.theoretical = theoretical_exponent(h, cfg.sigma_cap);
  const std::vector<Sample> samples = cfg.sampling == ExperimentConfig::Sampling::curve
                                          ? sample_curve(h, cfg.samples, cfg.seed, cfg.denominator_bits)
                                          : sample_box(h, cfg.samples, cfg.denominator_bits, cfg.seed);
  rep.rows.resize(samples.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < samples.size();) {
      rep.rows[i] = evaluate_point(samples[i], h.n, cfg);
      rep.rows[i].id = i;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, samples.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& r : rep.rows)
    if (r.omega_mult && !r.omega_mult->infinite && !rep.theoretical.infinite)
      r.gap = r.omega_mult->value - rep.theoretical.value;
  rep.summary = summarize(rep.rows, rep.theoretical);
  return rep;
}

namespace {

std::string opt_str(const std::optional<Exponent>& e) { return e ? e->str() : ""; }

std::string join(const std::vector<std::string>& xs, char sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

}  // namespace

std::string schema_stamp(const std::string& kind) {
  return "# schema=dioph-lab/" + kind + " v" + std::to_string(kSchemaVersion);
}

void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  out << schema_stamp("report") << '\n';
  out << "sample_id,x_coords,omega_est,omega_mult_est";
  for (int k = 1; k <= r.h.n; ++k) out << ",gamma_" << k;
  out << ",omega_from_gamma,flow_bridge_est,theoretical,gap,flags\n";
  for (const auto& row : r.rows) {
    std::vector<std::string> xs;
    for (const auto& x : row.sample.x) xs.push_back(rational_str(x.value()));
    out << row.id << ',' << join(xs, ';') << ',' << opt_str(row.omega) << ','
        << (row.omega_mult ? row.omega_mult->str() : "");
    for (int k = 0; k < r.h.n; ++k)
      out << ',' << (k < static_cast<int>(row.gammas.size()) ? real_str(row.gammas[k].value) : "");
    out << ',' << opt_str(row.omega_from_gamma) << ',' << (row.flow_bridge ? real_str(*row.flow_bridge) : "") << ','
        << r.theoretical.str() << ',' << (row.gap ? real_str(*row.gap) : "") << ',' << join(row.flags, '|') << '\n';
  }
}

void write_records_csv(std::ostream& out, const RecordSet& rs) {
  // Union of the per-support fronts and the sup envelope, one line per q.
  std::map<std::pair<int, std::string>, const ApproxRecord*> all;
  auto add = [&](const ApproxRecord& rec) {
    std::string key = rec.mult_h.get_str();
    key = std::string(64 - std::min<std::size_t>(64, key.size()), '0') + key + ' ' + rec.q.str();
    all.emplace(std::make_pair(rec.k, key), &rec);
  };
  for (const auto& [mask, recs] : rs.by_support)
    for (const auto& rec : recs) add(rec);
  for (const auto& rec : rs.sup_records) add(rec);
  out << schema_stamp("records") << '\n';
  out << "class_k,q_entries,p,residual,sup_h,mult_h\n";
  for (const auto& [key, rec] : all)
    out << rec->k << ',' << rec->q.str() << ',' << rec->p.get_str() << ',' << rational_str(rec->residual) << ','
        << rec->sup_h.get_str() << ',' << rec->mult_h.get_str() << '\n';
}

void write_trajectory_csv(std::ostream& out, const std::vector<Trajectory>& trajectories) {
  out << schema_stamp("trajectory") << '\n';
  out << "direction_id,t,shortest_norm,slope\n";
  for (std::size_t d = 0; d < trajectories.size(); ++d)
    for (const auto& p : trajectories[d].points)
      out << d << ',' << real_str(p.t) << ',' << real_str(p.norm) << ',' << (p.t > 0 ? real_str(p.delta / p.t) : "")
          << '\n';
}

void write_summary(std::ostream& out, const ExperimentReport& r) {
  const auto& s = r.summary;
  out << "n=" << r.h.n << " s=" << r.h.s << '\n';
  out << "theoretical=" << r.theoretical.str() << '\n';
  out << "points=" << s.points << " skipped=" << s.skipped << '\n';
  out << "median_omega_mult=" << real_str(s.median_omega_mult) << '\n';
  out << "iqr_omega_mult=" << real_str(s.iqr_omega_mult) << '\n';
  out << "median_gap=" << real_str(s.median_gap) << '\n';
  out << "median_abs_gap=" << real_str(s.median_abs_gap) << '\n';
  out << "sandwich_violations=" << s.sandwich_violations << '\n';
  out << "gamma_bridge_agreements=" << s.bridge_agreements << '\n';
  out << "flow_agreements=" << s.flow_agreements << '/' << s.flow_points << '\n';
  out << "theory_agrees=" << (s.theory_agrees ? "yes" : "no") << '\n';
}

}  // namespace dioph
