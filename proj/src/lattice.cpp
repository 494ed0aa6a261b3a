#include "dioph/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dioph/errors.hpp"
#include "dioph/fit.hpp"

namespace dioph {

namespace {

constexpr double kDelta = 0.99;
constexpr long double kRadiusSlack = 1e-9L;

void check_dim(int d) {
  if (d < 1) throw DomainError("empty lattice basis");
  if (d > kMaxLatticeDim) throw Unsupported("lattice dimension " + std::to_string(d) + " exceeds the guard of 6");
}

Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Real sup(const std::vector<Real>& v) {
  Real m(0);
  for (const auto& x : v) m = std::max(m, abs(x));
  return m;
}

// LLL-reduced columns together with their coordinates in the input basis.
struct Reduced {
  std::vector<std::vector<Real>> b;
  std::vector<std::vector<BigInt>> u;
  std::vector<std::vector<Real>> mu;
  std::vector<Real> bsq;

  void gram_schmidt() {
    const std::size_t d = b.size();
    std::vector<std::vector<Real>> star(d);
    mu.assign(d, std::vector<Real>(d, Real(0)));
    bsq.assign(d, Real(0));
    for (std::size_t i = 0; i < d; ++i) {
      star[i] = b[i];
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], star[j]) / bsq[j];
        for (std::size_t r = 0; r < star[i].size(); ++r) star[i][r] -= mu[i][j] * star[j][r];
      }
      bsq[i] = dot(star[i], star[i]);
      if (bsq[i].is_zero()) throw DomainError("lattice basis is degenerate");
    }
  }
};

Reduced lll(const ScaledBasis& sb) {
  const int d = sb.dim();
  Reduced red;
  red.b = sb.columns;
  red.u.assign(d, std::vector<BigInt>(d, 0));
  for (int i = 0; i < d; ++i) red.u[i][i] = 1;
  red.gram_schmidt();
  const Real delta(kDelta);
  int k = 1;
  for (long iter = 0; k < d; ++iter) {
    if (iter > 1000000) throw Error("LLL did not terminate");
    for (int j = k - 1; j >= 0; --j) {
      BigInt r = red.mu[k][j].round();
      if (r == 0) continue;
      Real rr(r);
      for (std::size_t i = 0; i < red.b[k].size(); ++i) red.b[k][i] -= rr * red.b[j][i];
      for (int i = 0; i < d; ++i) red.u[k][i] -= r * red.u[j][i];
      for (int l = 0; l < j; ++l) red.mu[k][l] -= rr * red.mu[j][l];
      red.mu[k][j] -= rr;
    }
    const Real& m = red.mu[k][k - 1];
    if (red.bsq[k] >= (delta - m * m) * red.bsq[k - 1]) {
      ++k;
    } else {
      std::swap(red.b[k], red.b[k - 1]);
      std::swap(red.u[k], red.u[k - 1]);
      red.gram_schmidt();
      k = std::max(k - 1, 1);
    }
  }
  return red;
}

// Fincke-Pohst: calls visit(c) for every nonzero c (up to sign) with
// |sum c_i b_i|_2^2 <= r2. visit may shrink r2.
template <class Visit>
void enumerate(const Reduced& red, long double& r2, Visit visit) {
  const int d = static_cast<int>(red.b.size());
  std::vector<std::vector<long double>> mu(d, std::vector<long double>(d));
  std::vector<long double> bsq(d);
  for (int i = 0; i < d; ++i) {
    bsq[i] = red.bsq[i].to_long_double();
    for (int j = 0; j < i; ++j) mu[i][j] = red.mu[i][j].to_long_double();
  }
  std::vector<long long> c(d, 0);
  auto rec = [&](auto&& self, int i, long double partial, bool zero_above) -> void {
    long double center = 0;
    for (int j = i + 1; j < d; ++j) center -= c[j] * mu[j][i];
    const long double room = r2 - partial;
    if (room < 0) return;
    const long double half = std::sqrt(room / bsq[i]);
    if (half > 1e12L) throw ResourceLimit("enumeration box too large");
    long long lo = static_cast<long long>(std::ceil(center - half));
    const long long hi = static_cast<long long>(std::floor(center + half));
    if (zero_above) lo = std::max(lo, i == 0 ? 1LL : 0LL);
    for (long long v = lo; v <= hi; ++v) {
      const long double diff = v - center;
      const long double part = partial + diff * diff * bsq[i];
      if (part > r2) continue;
      c[i] = v;
      if (i == 0)
        visit(c);
      else
        self(self, i - 1, part, zero_above && v == 0);
    }
    c[i] = 0;
  };
  rec(rec, d - 1, 0.0L, true);
}

long double radius2(const Real& best, int d) {
  const long double b = best.to_long_double();
  return d * b * b * (1 + kRadiusSlack);
}

IntVector input_coeffs(const Reduced& red, const std::vector<long long>& c) {
  const std::size_t d = c.size();
  std::vector<BigInt> out(d, 0);
  for (std::size_t i = 0; i < d; ++i)
    if (c[i] != 0)
      for (std::size_t j = 0; j < d; ++j) out[j] += BigInt(static_cast<long>(c[i])) * red.u[i][j];
  for (const auto& x : out) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : out) y = -y;
    break;
  }
  return IntVector(std::move(out));
}

}  // namespace

Rational determinant(const LatticeBasis& b) {
  const int d = b.dim();
  std::vector<std::vector<Rational>> m = b.columns;
  Rational det = 1;
  for (int c = 0; c < d; ++c) {
    int piv = c;
    while (piv < d && m[piv][c] == 0) ++piv;
    if (piv == d) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < d; ++r) {
      Rational f = m[r][c] / m[c][c];
      for (int k = c; k < d; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

FlowParams::FlowParams(std::vector<double> t) : t_vec(std::move(t)) {
  for (double x : t_vec) {
    if (!(x >= 0)) throw DomainError("flow parameters must be nonnegative");
    t_ += x;
  }
}

FlowParams FlowParams::along(const std::vector<double>& direction, double magnitude) {
  std::vector<double> t(direction.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = magnitude * direction[i];
  return FlowParams(std::move(t));
}

LatticeBasis u_matrix(const std::vector<ExactReal>& y) {
  const int d = static_cast<int>(y.size()) + 1;
  LatticeBasis b;
  b.columns.assign(d, std::vector<Rational>(d, Rational(0)));
  b.columns[0][0] = 1;
  for (int j = 1; j < d; ++j) {
    b.columns[j][0] = y[j - 1].value();
    b.columns[j][j] = 1;
  }
  return b;
}

mpfr_prec_t flow_precision(const LatticeBasis& b, const FlowParams& f, mpfr_prec_t requested) {
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& col : b.columns)
    for (const auto& x : col)
      if (x != 0) {
        const double l = log_abs(x);
        hi = std::max(hi, l);
        lo = std::min(lo, l);
      }
  double tmax = 0;
  for (double x : f.t_vec) tmax = std::max(tmax, x);
  double spread = f.t() + tmax + (hi > lo ? hi - lo : 0.0);
  for (double s : b.log_scale) spread += std::abs(s);
  const double bits = spread / std::log(2.0);
  if (bits <= requested / 2.0) return requested;
  return static_cast<mpfr_prec_t>(2 * std::ceil(bits)) + 64;
}

ScaledBasis apply_flow(const LatticeBasis& b, const FlowParams& f, mpfr_prec_t precision_bits) {
  const int d = b.dim();
  check_dim(d);
  if (precision_bits < 64) throw DomainError("flow precision must be at least 64 bits");
  if (static_cast<int>(f.t_vec.size()) != d - 1) throw DomainError("flow parameters do not match the lattice dimension");
  ScaledBasis sb;
  sb.bits = flow_precision(b, f, precision_bits);
  PrecisionScope scope(sb.bits);
  // the row-0 exponent is summed in Real so that det stays exactly 1
  std::vector<Real> exponent(d, Real(0));
  for (int i = 1; i < d; ++i) {
    exponent[i] = -Real(f.t_vec[i - 1]);
    exponent[0] = exponent[0] + Real(f.t_vec[i - 1]);
  }
  std::vector<Real> row_scale(d);
  for (int i = 0; i < d; ++i) {
    if (!b.log_scale.empty()) exponent[i] = exponent[i] + Real(b.log_scale[i]);
    row_scale[i] = exponent[i].is_zero() ? Real(1) : exp(exponent[i]);
  }
  sb.columns.resize(d);
  for (int c = 0; c < d; ++c) {
    sb.columns[c].reserve(d);
    for (int r = 0; r < d; ++r) sb.columns[c].push_back(Real(b.columns[c][r]) * row_scale[r]);
  }
  return sb;
}

Real determinant(const ScaledBasis& b) {
  PrecisionScope scope(b.bits);
  const int d = b.dim();
  auto m = b.columns;
  Real det(1);
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (abs(m[r][c]) > abs(m[piv][c])) piv = r;
    if (m[piv][c].is_zero()) return Real(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < d; ++r) {
      Real f = m[r][c] / m[c][c];
      for (int k = c; k < d; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

ShortestVector shortest_vector(const ScaledBasis& sb) {
  const int d = sb.dim();
  check_dim(d);
  PrecisionScope scope(sb.bits);
  Reduced red = lll(sb);
  std::vector<long long> best_c(d, 0);
  Real best(0);
  for (int i = 0; i < d; ++i) {
    Real n = sup(red.b[i]);
    if (i == 0 || n < best) {
      best = n;
      std::fill(best_c.begin(), best_c.end(), 0);
      best_c[i] = 1;
    }
  }
  long double r2 = radius2(best, d);
  std::vector<Real> v(d);
  enumerate(red, r2, [&](const std::vector<long long>& c) {
    for (auto& x : v) x = Real(0);
    for (int i = 0; i < d; ++i) {
      if (c[i] == 0) continue;
      const Real ci(static_cast<double>(c[i]));
      for (int r = 0; r < d; ++r) v[r] += ci * red.b[i][r];
    }
    Real n = sup(v);
    if (n < best) {
      best = n;
      best_c = c;
      r2 = radius2(best, d);
    }
  });
  ShortestVector out;
  out.coeffs = input_coeffs(red, best_c);
  out.vec.assign(d, Real(0));
  for (int i = 0; i < d; ++i)
    for (int r = 0; r < d; ++r) out.vec[r] += Real(out.coeffs[i]) * sb.columns[i][r];
  out.norm = sup(out.vec);
  return out;
}

ExactShortest shortest_vector(const LatticeBasis& b) {
  const int d = b.dim();
  check_dim(d);
  if (!b.log_scale.empty())
    for (double s : b.log_scale)
      if (s != 0) throw DomainError("exact shortest vector needs an unscaled basis");
  ScaledBasis sb = apply_flow(b, FlowParams(std::vector<double>(d - 1, 0.0)), 256);
  PrecisionScope scope(sb.bits);
  Reduced red = lll(sb);
  auto exact_norm = [&](const IntVector& coeffs) {
    Rational m = 0;
    for (int r = 0; r < d; ++r) {
      Rational x = 0;
      for (int i = 0; i < d; ++i) x += coeffs[i] * b.columns[i][r];
      m = std::max(m, Rational(abs(x)));
    }
    return m;
  };
  ExactShortest best;
  for (int i = 0; i < d; ++i) {
    std::vector<long long> c(d, 0);
    c[i] = 1;
    IntVector coeffs = input_coeffs(red, c);
    Rational n = exact_norm(coeffs);
    if (i == 0 || n < best.norm) best = {coeffs, n};
  }
  long double r2 = radius2(Real(best.norm), d);
  enumerate(red, r2, [&](const std::vector<long long>& c) {
    IntVector coeffs = input_coeffs(red, c);
    Rational n = exact_norm(coeffs);
    if (n < best.norm) {
      best = {coeffs, n};
      r2 = radius2(Real(n), d);
    }
  });
  return best;
}

Trajectory flow_trajectory(const std::vector<ExactReal>& y, const std::vector<double>& direction, double t_max,
                           int steps, mpfr_prec_t precision_bits) {
  if (steps < 2) throw DomainError("a trajectory needs at least 2 steps");
  if (direction.size() != y.size()) throw DomainError("direction does not match the dimension");
  double total = 0;
  for (double x : direction) {
    if (x < 0) throw DomainError("direction must lie on the unit simplex");
    total += x;
  }
  if (std::abs(total - 1) > 1e-9) throw DomainError("direction must lie on the unit simplex");
  if (!(t_max > 0)) throw DomainError("t_max must be positive");
  const LatticeBasis u = u_matrix(y);
  check_dim(u.dim());
  Trajectory tr;
  std::vector<Point> series;
  for (int i = 0; i < steps; ++i) {
    const double t = t_max * i / (steps - 1);
    ScaledBasis sb = apply_flow(u, FlowParams::along(direction, t), precision_bits);
    ShortestVector sv = shortest_vector(sb);
    PrecisionScope scope(sb.bits);
    const double delta = -log(sv.norm).to_double();
    tr.points.push_back({t, sv.norm.to_double(), delta});
    series.push_back({t, delta});
  }
  const auto peaks = local_maxima(series);
  if (peaks.size() >= 3) {
    tr.slope = std::max(0.0, slope_fit(peaks).lower);
  } else {
    double best = 0;
    for (const auto& p : tr.points)
      if (p.t >= t_max / 2 && p.t > 0) best = std::max(best, p.delta / p.t);
    tr.slope = best;
  }
  return tr;
}

std::vector<std::vector<double>> simplex_grid(int n, int mesh) {
  if (n < 1 || mesh < 1) throw DomainError("simplex grid needs n >= 1 and mesh >= 1");
  std::vector<std::vector<double>> out;
  std::vector<int> parts(n, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      parts[i] = left;
      std::vector<double> d(n);
      for (int j = 0; j < n; ++j) d[j] = static_cast<double>(parts[j]) / mesh;
      out.push_back(std::move(d));
      return;
    }
    for (int v = left; v >= 0; --v) {
      parts[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, mesh);
  return out;
}

std::vector<Rational> penalty_vector(const IntVector& w, const Hyperplane& h) {
  if (static_cast<int>(w.size()) != h.n + 1) throw DomainError("penalty_vector expects n+1 entries");
  const BigInt& pn = w[h.n];
  std::vector<Rational> out;
  out.push_back(Rational(w[0]) + h.b.value() * pn);
  for (int i = 1; i < h.s; ++i) out.push_back(Rational(w[i]) + h.a[i - 1].value() * pn);
  return out;
}

double flow_log_norm(const IntVector& w, const Hyperplane& h, const FlowParams& f) {
  if (static_cast<int>(f.t_vec.size()) != h.n) throw DomainError("flow parameters do not match the dimension");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  Rational pen = 0;
  for (const auto& x : penalty_vector(w, h)) pen = std::max(pen, Rational(abs(x)));
  for (int i = h.s; i < h.n; ++i) pen = std::max(pen, Rational(abs(w[i])));
  double m = pen == 0 ? kNegInf : f.t() + log_abs(pen);
  for (int i = 1; i <= h.n; ++i)
    if ((i < h.s || i == h.n) && w[i] != 0) m = std::max(m, log_abs(w[i]) - f.t_vec[i - 1]);
  return m;
}

std::vector<Violation> violation_search(const Hyperplane& h, double d, const std::vector<FlowParams>& schedule,
                                        std::uint64_t w_budget) {
  if (!(d > 0 && d < 1.0 / h.s)) throw DomainError("violation level d must lie in (0, 1/s)");
  for (const auto& f : schedule)
    if (static_cast<int>(f.t_vec.size()) != h.n) throw DomainError("schedule entry does not match the dimension");
  std::vector<Violation> out;
  if (w_budget == 0 || schedule.empty()) return out;
  double t_min = std::numeric_limits<double>::infinity();
  for (const auto& f : schedule) t_min = std::min(t_min, f.t());
  const BigInt budget(std::to_string(w_budget));

  // Only p with |p + a p_n| < 1 can make e^t |penalty| small, so each free
  // entry has at most two useful values.
  auto near = [&](const Rational& target) {
    std::vector<BigInt> c;
    BigInt f = target.get_num() / target.get_den();
    if (f * target.get_den() > target.get_num()) f -= 1;  // floor
    for (BigInt v : {f, BigInt(f + 1)})
      if (abs(Rational(v) - target) < 1 && abs(v) <= budget) c.push_back(v);
    return c;
  };

  IntVector w(h.n + 1);
  std::vector<std::vector<BigInt>> choices(h.s);
  for (std::uint64_t pn = 1; pn <= w_budget; ++pn) {
    const BigInt q(std::to_string(pn));
    w[h.n] = q;
    choices[0] = near(-h.b.value() * q);
    bool ok = !choices[0].empty();
    for (int i = 1; i < h.s && ok; ++i) {
      choices[i].clear();
      for (const auto& v : near(-h.a[i - 1].value() * q))
        if (v != 0) choices[i].push_back(v);
      ok = !choices[i].empty();
    }
    if (!ok) continue;
    std::vector<std::size_t> pick(h.s, 0);
    while (true) {
      for (int i = 0; i < h.s; ++i) w[i] = choices[i][pick[i]];
      Rational pen = 0;
      for (const auto& x : penalty_vector(w, h)) pen = std::max(pen, Rational(abs(x)));
      const double lp = pen == 0 ? -std::numeric_limits<double>::infinity() : log_abs(pen);
      if (lp < -(1 + d) * t_min) {
        std::vector<double> lw(h.n, -std::numeric_limits<double>::infinity());
        for (int i = 1; i < h.s; ++i) lw[i - 1] = log_abs(w[i]);
        lw[h.n - 1] = log_abs(q);
        for (const auto& f : schedule) {
          double m = f.t() + lp;
          for (int i = 0; i < h.n; ++i) m = std::max(m, lw[i] - f.t_vec[i]);
          if (m < -d * f.t()) out.push_back({w, f, m});
        }
      }
      int i = 0;
      while (i < h.s && ++pick[i] == choices[i].size()) pick[i++] = 0;
      if (i == h.s) break;
    }
  }
  return out;
}

}  // namespace dioph
