#include "dioph/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "dioph/errors.hpp"

namespace dioph {

ExactReal::ExactReal(Rational v) : value_(std::move(v)) { value_.canonicalize(); }

ExactReal::ExactReal(Rational v, BigInt guard) : value_(std::move(v)), guard_(std::move(guard)) {
  value_.canonicalize();
  if (*guard_ < 1) throw DomainError("guard height must be positive");
}

ExactReal ExactReal::parse(const std::string& text) {
  Rational v;
  if (v.set_str(text, 10) != 0 || v.get_den() == 0) throw DomainError("not a rational: " + text);
  return ExactReal(v);
}

bool ExactReal::admits_height(const BigInt& h) const { return !guard_ || h <= *guard_; }

std::string ExactReal::str() const { return rational_str(value_); }

IntVector::IntVector(std::initializer_list<long> xs) {
  for (long x : xs) entries_.emplace_back(x);
}

unsigned IntVector::support_mask() const {
  unsigned m = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i] != 0) m |= 1u << i;
  return m;
}

int IntVector::support_size() const {
  int k = 0;
  for (const auto& e : entries_) k += e != 0;
  return k;
}

std::string IntVector::str(char sep) const {
  std::string s;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += sep;
    s += entries_[i].get_str();
  }
  return s;
}

BigInt prod_mult(const IntVector& q) {
  BigInt p = 1;
  for (const auto& e : q.entries())
    if (e != 0) p *= abs(e);
  return p;
}

BigInt sup_norm(const IntVector& q) {
  BigInt m = 0;
  for (const auto& e : q.entries())
    if (abs(e) > m) m = abs(e);
  return m;
}

BigInt nearest_offset(const Rational& x) {
  // p = -round(x); candidates -floor(x) and -ceil(x).
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational lo = x - fl;  // in [0, 1)
  Rational half(1, 2);
  if (lo < half) return -fl;
  if (lo > half) return -(fl + 1);
  BigInt a = -fl, b = -(fl + 1);
  return abs(a) <= abs(b) ? a : b;
}

Rational dist_to_int(const Rational& x) {
  Rational r = x + Rational(nearest_offset(x));
  return abs(r);
}

Rational dot(const IntVector& q, const std::vector<ExactReal>& y) {
  if (q.size() != y.size()) throw DomainError("dimension mismatch in q.y");
  Rational s = 0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] != 0) s += Rational(q[i]) * y[i].value();
  s.canonicalize();
  return s;
}

std::optional<BigInt> min_guard(const std::vector<ExactReal>& y) {
  std::optional<BigInt> g;
  for (const auto& e : y)
    if (e.guard_height() && (!g || *e.guard_height() < *g)) g = *e.guard_height();
  return g;
}

u128 frac_fixed(const Rational& x) {
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  BigInt num = x.get_num() - fl * x.get_den();  // frac(x) = num / den
  BigInt scaled = num << 128;
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  BigInt lo = q & BigInt("18446744073709551615");
  BigInt hi = q >> 64;
  return (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
}

double log_abs(const BigInt& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

double log_abs(const Rational& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  return log_abs(x.get_num()) - log_abs(x.get_den());
}

std::string rational_str(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string real_str(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace dioph
