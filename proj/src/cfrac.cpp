#include "dioph/cfrac.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "dioph/errors.hpp"
#include "dioph/fit.hpp"

namespace dioph {

CFrac CFrac::from_quotients(std::vector<BigInt> quotients) {
  CFrac cf;
  cf.quotients = std::move(quotients);
  BigInt p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  for (const auto& a : cf.quotients) {
    BigInt p = a * p1 + p2, q = a * q1 + q2;
    cf.p.push_back(p);
    cf.q.push_back(q);
    p2 = p1, p1 = p, q2 = q1, q1 = q;
  }
  return cf;
}

CFrac expand(const ExactReal& x, std::size_t depth) {
  if (depth == 0) throw DomainError("expansion depth must be positive");
  std::vector<BigInt> as;
  BigInt num = x.value().get_num(), den = x.value().get_den();
  bool ended = false;
  while (as.size() < depth) {
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    as.push_back(a);
    BigInt r = num - a * den;
    if (r == 0) {
      ended = true;
      break;
    }
    num = den;
    den = r;
  }
  CFrac cf = CFrac::from_quotients(std::move(as));
  cf.terminated = ended && cf.size() < depth;
  return cf;
}

SigmaEstimate sigma_from_cfrac(const CFrac& cf, bool rational_target) {
  SigmaEstimate out;
  if (rational_target && cf.terminated) {
    out.sigma.infinite = true;
    return out;
  }
  if (cf.q.size() < 3) throw InsufficientData("sigma needs at least 3 convergents");
  std::vector<Point> pts;
  for (std::size_t k = 0; k + 1 < cf.q.size(); ++k) {
    if (cf.q[k] < 2) continue;
    double a = log_abs(cf.q[k]), b = log_abs(cf.q[k + 1]);
    out.v_series.push_back(b / a);
    pts.push_back({a, b});
  }
  if (pts.size() < 2) throw InsufficientData("sigma needs two convergents with q >= 2");
  std::size_t from = pts.size() >= 4 ? pts.size() / 2 : 0;
  out.sigma.value = theil_sen_slope(std::span(pts).subspan(from));
  return out;
}

Constructed from_quotients(std::vector<BigInt> quotients) {
  CFrac cf = CFrac::from_quotients(std::move(quotients));
  Rational v(cf.p.back(), cf.q.back());
  v.canonicalize();
  BigInt guard = cf.q.back() - 1;
  if (guard < 1) guard = 1;
  return {ExactReal(v, guard), std::move(cf)};
}

namespace {

// round(q^e) for a nonnegative real exponent e, deterministic.
BigInt round_power(const BigInt& q, double e) {
  if (e == 0.0) return 1;
  if (e == std::floor(e)) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
  }
  long bits = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2) * (e + 1.0)) + 128;
  mpfr_t x;
  mpfr_init2(x, bits);
  mpfr_set_z(x, q.get_mpz_t(), MPFR_RNDN);
  mpfr_t ex;
  mpfr_init2(ex, 64);
  mpfr_set_d(ex, e, MPFR_RNDN);
  mpfr_pow(x, x, ex, MPFR_RNDN);
  BigInt r;
  mpfr_get_z(r.get_mpz_t(), x, MPFR_RNDN);
  mpfr_clear(x);
  mpfr_clear(ex);
  return r;
}

}  // namespace

Constructed construct_with_sigma(double target, std::size_t depth) {
  if (!(target >= 1.0)) throw DomainError("sigma target must be at least 1");
  if (depth < 1) throw DomainError("construction depth must be positive");
  std::vector<BigInt> as{1};
  BigInt prev = 0, qk = 1;  // q_{-1}, q_0
  while (as.size() < depth) {
    BigInt a = round_power(qk, target - 1.0);
    if (a < 1) a = 1;
    as.push_back(a);
    BigInt next = a * qk + prev;
    prev = qk;
    qk = next;
  }
  return from_quotients(std::move(as));
}

Constructed golden(std::size_t depth) { return construct_with_sigma(1.0, depth); }

Constructed sqrt_truncation(unsigned long k, std::size_t depth) {
  BigInt a0 = sqrt(BigInt(k));
  if (a0 * a0 == k) throw DomainError("sqrt of a perfect square is rational");
  std::vector<BigInt> as{a0};
  BigInt m = 0, d = 1, a = a0;
  while (as.size() < depth) {
    m = d * a - m;
    d = (BigInt(k) - m * m) / d;
    a = (a0 + m) / d;
    as.push_back(a);
  }
  return from_quotients(std::move(as));
}

SigmaVectorEstimate sigma_vector_estimate(const std::vector<ExactReal>& y, std::uint64_t cap) {
  if (y.empty()) throw DomainError("empty vector");
  if (cap < 2) throw DomainError("height cap must be at least 2");
  if (auto g = min_guard(y); g && BigInt(static_cast<unsigned long>(cap)) > *g)
    throw DomainError("height cap exceeds guard height");
  const std::size_t m = y.size();
  std::vector<u128> u(m), v(m, 0);
  for (std::size_t i = 0; i < m; ++i) u[i] = frac_fixed(y[i].value());

  auto exact_residual = [&](std::uint64_t q) {
    Rational best = 0;
    for (const auto& e : y) {
      Rational d = dist_to_int(Rational(BigInt(static_cast<unsigned long>(q))) * e.value());
      if (d > best) best = d;
    }
    return best;
  };

  SigmaVectorEstimate out;
  u128 best_approx = 0;
  std::uint64_t best_err = 0;
  bool have = false;
  for (std::uint64_t q = 1; q <= cap; ++q) {
    u128 d = 0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] += u[i];
      d = std::max(d, circle_dist(v[i]));
    }
    // Each fixed-point coordinate carries at most q ulps of error.
    if (d <= q) {
      Rational r = exact_residual(q);
      if (r == 0) {
        out.records.push_back({q, r});
        out.exact_dependence = true;
        out.sigma.infinite = true;
        return out;
      }
    }
    bool better;
    if (!have) {
      better = true;
    } else if (d + q < best_approx && best_approx - d - q > best_err) {
      better = true;
    } else if (d > best_approx + best_err + q) {
      better = false;
    } else {
      better = exact_residual(q) < out.records.back().residual;
    }
    if (better) {
      out.records.push_back({q, exact_residual(q)});
      best_approx = d;
      best_err = q;
      have = true;
    }
  }
  std::vector<Point> pts;
  for (const auto& r : out.records)
    if (r.q >= 2) pts.push_back({std::log(static_cast<double>(r.q)), -log_abs(r.residual)});
  if (pts.size() < 3) throw InsufficientData("too few simultaneous records for a fit");
  out.sigma.value = theil_sen_slope(pts);
  return out;
}

}  // namespace dioph
