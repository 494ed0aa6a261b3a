#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "dioph/fit.hpp"

namespace dioph {

namespace {

constexpr std::size_t kMinFitPoints = 3;

std::vector<Point> sup_points(const RecordSet& rs) {
  std::vector<Point> pts;
  for (const auto& r : rs.sup_records)
    if (r.sup_h >= 2 && r.residual > 0) pts.push_back({log_abs(r.sup_h), -log_abs(r.residual)});
  return pts;
}

// Log of the number of candidates with k nonzero entries and height at most
// h, counted up to sign. Using this rank as abscissa removes the
// log^(k-1) density factor of the hyperbolic cross from the slope.
double log_rank(int k, std::uint64_t h) {
  return std::log(divisor_count(k, h).get_d()) + (k - 1) * std::log(2.0);
}

// Among competing families, the one whose slope is most reliably large wins:
// ranking by the lower quartile keeps a single noisy family from setting a max.
struct Pick {
  bool any = false;
  SlopeFit fit;
  unsigned family = 0;
  std::size_t points = 0;
};

void offer(Pick& p, std::span<const Point> pts, unsigned family) {
  if (pts.size() < kMinFitPoints) return;
  SlopeFit f = slope_fit(pts);
  if (!p.any || f.lower > p.fit.lower) p = {true, f, family, pts.size()};
}

// Simplex directions with mesh 1/m supported exactly on `mask`.
std::vector<std::vector<double>> directions(int n, unsigned mask, int mesh) {
  std::vector<int> idx;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1) idx.push_back(i);
  const int k = static_cast<int>(idx.size());
  std::vector<std::vector<double>> out;
  if (mesh < k) mesh = k;
  std::vector<int> parts(k);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == k - 1) {
      parts[i] = left;
      std::vector<double> d(n, 0.0);
      for (int j = 0; j < k; ++j) d[idx[j]] = static_cast<double>(parts[j]) / mesh;
      out.push_back(std::move(d));
      return;
    }
    for (int v = 1; v <= left - (k - 1 - i); ++v) {
      parts[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, mesh);
  return out;
}

struct Corner {
  double t;
  double level;
};

// Each record (q, r) and direction d trace a tent
//   t -> -log max(e^t r, max_i e^{-t d_i} |q_i|)
// with rising pieces t d_i - log|q_i| and the falling line -t - log r. Its
// apex sits where the falling line meets the lowest rising piece. Corners of
// the upper envelope over all records and directions are kept.
std::vector<Corner> envelope_corners(const std::vector<ApproxRecord>& recs,
                                     const std::vector<std::vector<double>>& dirs) {
  struct Tent {
    std::vector<std::pair<double, double>> rising;  // (slope, -log|q_i|)
    double lr;                                      // log r
  };
  std::vector<Tent> tents;
  for (const auto& r : recs) {
    if (r.mult_h < 2) continue;
    for (const auto& d : dirs) {
      Tent t;
      t.lr = log_abs(r.residual);
      for (std::size_t i = 0; i < d.size(); ++i)
        if (r.q[i] != 0) t.rising.emplace_back(d[i], -log_abs(r.q[i]));
      tents.push_back(std::move(t));
    }
  }
  auto value = [](const Tent& t, double x) {
    double v = -x - t.lr;
    for (auto [s, c] : t.rising) v = std::min(v, s * x + c);
    return v;
  };
  std::vector<Corner> out;
  for (const auto& t : tents) {
    double ts = 0.0;
    for (auto [s, c] : t.rising) ts = std::max(ts, (-c - t.lr) / (1.0 + s));
    double level = -ts - t.lr;
    bool visible = ts > 0;
    for (std::size_t j = 0; visible && j < tents.size(); ++j)
      if (&tents[j] != &t && value(tents[j], ts) > level + 1e-12) visible = false;
    if (visible) out.push_back({ts, level});
  }
  std::sort(out.begin(), out.end(), [](const Corner& a, const Corner& b) { return a.t < b.t; });
  return out;
}

}  // namespace

std::string support_str(unsigned mask) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if (mask >> i & 1) {
      if (!first) s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
  return s + "}";
}

Exponent omega_estimate(const RecordSet& rs) {
  if (rs.exact_dependence) return {0.0, true};
  auto pts = sup_points(rs);
  if (pts.size() < kMinFitPoints) throw InsufficientData("fewer than 3 sup-norm records of height >= 2");
  double v = slope_fit(pts).slope;
  // A single-coordinate front is the complete sup-norm envelope of that
  // coordinate up to the full cap, and omega(y) >= omega(y_i).
  for (const auto& [mask, recs] : rs.by_support) {
    if (std::popcount(mask) != 1) continue;
    std::vector<Point> one;
    for (const auto& r : recs)
      if (r.sup_h >= 2) one.push_back({log_abs(r.sup_h), -log_abs(r.residual)});
    if (one.size() >= kMinFitPoints) v = std::max(v, slope_fit(one).slope);
  }
  return {v, false};
}

MultEstimate omega_mult_estimate(const RecordSet& rs) {
  MultEstimate out;
  if (rs.exact_dependence) {
    out.infinite = true;
    return out;
  }
  Pick pick;
  for (const auto& [mask, recs] : rs.by_support) {
    std::vector<Point> pts;
    for (const auto& r : recs)
      if (r.mult_h >= 2) pts.push_back({log_rank(r.k, r.mult_h.get_ui()), -log_abs(r.residual)});
    offer(pick, pts, mask);
  }
  bool any = pick.any;
  if (any) {
    out.value = rs.n * pick.fit.lower;
    out.family = support_str(pick.family);
  }
  // Every sup-norm witness is a multiplicative one, since prod_mult(q) <= sup_norm(q)^n.
  if (auto pts = sup_points(rs); pts.size() >= kMinFitPoints) {
    double v = slope_fit(pts).slope;
    if (!any || v > out.value) {
      out.value = v;
      out.family = "sup";
      any = true;
    }
  }
  if (!any) throw InsufficientData("fewer than 3 records of height >= 2");
  return out;
}

double c_k(double v, int k, int n) {
  if (n < 1 || k < 1 || k > n) throw DomainError("class index out of range");
  if (!(v >= n)) throw DomainError("c_k needs v >= n");
  return (v - n) / (k * v + n);
}

double v_from_c(double c, int k, int n) {
  if (n < 1 || k < 1 || k > n) throw DomainError("class index out of range");
  if (!(c >= 0.0 && c * k < 1.0)) throw DomainError("v_from_c needs 0 <= c < 1/k");
  return (n + n * c) / (1.0 - k * c);
}

GammaEstimate gamma_k_estimate(const RecordSet& rs, int k, const GammaGrid& grid) {
  if (k < 1 || k > rs.n) throw DomainError("class index out of range");
  GammaEstimate out;
  const double cap = 1.0 / k;
  Pick pick;
  double sparse = 0.0;
  bool any_records = false;
  for (const auto& [mask, recs] : rs.by_support) {
    if (std::popcount(mask) != k || recs.empty()) continue;
    any_records = true;
    if (std::any_of(recs.begin(), recs.end(), [](const ApproxRecord& r) { return r.residual == 0; })) {
      out.value = cap;
      out.saturated = true;
      out.support = mask;
      return out;
    }
    // Sup-norm witnesses are lattice vectors of this class too.
    std::vector<ApproxRecord> vecs = recs;
    for (const auto& r : rs.sup_records)
      if (r.q.support_mask() == mask) vecs.push_back(r);
    auto corners = envelope_corners(vecs, directions(rs.n, mask, grid.mesh));
    if (grid.t_max > 0) std::erase_if(corners, [&](const Corner& c) { return c.t > grid.t_max; });
    std::vector<Point> pts;
    for (const auto& c : corners) {
      pts.push_back({c.t, c.level});
      sparse = std::max(sparse, c.level / c.t);
    }
    offer(pick, pts, mask);
  }
  if (!any_records) {
    out.empty = true;
    return out;
  }
  // With fewer than three corners in every support, the best single corner ratio stands in.
  out.value = pick.any ? pick.fit.lower : sparse;
  out.support = pick.family;
  out.corners = pick.points;
  out.value = std::max(out.value, 0.0);
  if (out.value >= cap) {
    out.value = cap;
    out.saturated = true;
  }
  return out;
}

std::vector<GammaEstimate> gamma_estimates(const RecordSet& rs, const GammaGrid& grid) {
  std::vector<GammaEstimate> g;
  for (int k = 1; k <= rs.n; ++k) g.push_back(gamma_k_estimate(rs, k, grid));
  return g;
}

Exponent omega_from_gamma(std::span<const double> gammas) {
  const int n = static_cast<int>(gammas.size());
  if (n == 0) throw DomainError("no class exponents given");
  double best = 0.0;
  for (int k = 1; k <= n; ++k) {
    double g = gammas[k - 1];
    if (g < 0) throw DomainError("class exponents must be nonnegative");
    if (g * k >= 1.0) return {0.0, true};
    best = std::max(best, (n + n * g) / (1.0 - k * g));
  }
  return {best, false};
}

Exponent omega_from_gamma(const std::vector<GammaEstimate>& gammas) {
  std::vector<double> g;
  for (const auto& e : gammas) {
    if (e.saturated) return {0.0, true};
    g.push_back(e.value);
  }
  return omega_from_gamma(g);
}

}  // namespace dioph
