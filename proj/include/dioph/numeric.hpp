#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dioph {

using BigInt = mpz_class;
using Rational = mpq_class;
using u128 = unsigned __int128;

// A rational number standing in for a (possibly irrational) target. Residual
// computations |q x + p| agree with the target for |q| up to guard_height.
// A missing guard means the rational is the target itself.
class ExactReal {
 public:
  ExactReal() = default;
  explicit ExactReal(Rational v);
  ExactReal(Rational v, BigInt guard);

  static ExactReal parse(const std::string& text);  // "p/q" or "p"

  const Rational& value() const { return value_; }
  const std::optional<BigInt>& guard_height() const { return guard_; }
  bool is_target_rational() const { return !guard_.has_value(); }
  bool admits_height(const BigInt& h) const;
  std::string str() const;

 private:
  Rational value_{0};
  std::optional<BigInt> guard_;
};

class IntVector {
 public:
  IntVector() = default;
  explicit IntVector(std::size_t n) : entries_(n) {}
  IntVector(std::initializer_list<long> xs);
  explicit IntVector(std::vector<BigInt> xs) : entries_(std::move(xs)) {}

  std::size_t size() const { return entries_.size(); }
  const BigInt& operator[](std::size_t i) const { return entries_[i]; }
  BigInt& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<BigInt>& entries() const { return entries_; }

  // Bit i set iff entry i is nonzero.
  unsigned support_mask() const;
  int support_size() const;
  bool is_zero() const { return support_size() == 0; }
  std::string str(char sep = ';') const;

  friend bool operator==(const IntVector& a, const IntVector& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<BigInt> entries_;
};

BigInt prod_mult(const IntVector& q);
BigInt sup_norm(const IntVector& q);

// The integer p minimizing |x + p|; on a half-integer tie the smaller |p|.
BigInt nearest_offset(const Rational& x);
Rational dist_to_int(const Rational& x);

// q . y as an exact rational.
Rational dot(const IntVector& q, const std::vector<ExactReal>& y);

// Smallest guard height among the entries; nullopt if all are exact targets.
std::optional<BigInt> min_guard(const std::vector<ExactReal>& y);

// floor(frac(x) * 2^128): the fixed-point image of x on the circle R/Z.
u128 frac_fixed(const Rational& x);
inline u128 circle_dist(u128 v) { return v <= ~v ? v : static_cast<u128>(0) - v; }
inline u128 times(std::int64_t m, u128 u) {
  return m >= 0 ? static_cast<u128>(m) * u : static_cast<u128>(0) - static_cast<u128>(-m) * u;
}

// Natural log of |x| for nonzero x, safe for huge numerators/denominators.
double log_abs(const BigInt& x);
double log_abs(const Rational& x);

// Exact decimal-free rendering: "p/q", or "p" when the denominator is 1.
std::string rational_str(const Rational& x);
// 12 significant digits; "inf" for infinities.
std::string real_str(double x);

// An exponent estimate. `infinite` is set on exact rational dependence.
struct Exponent {
  double value = 0.0;
  bool infinite = false;
  std::string str() const { return infinite ? "inf" : real_str(value); }
};

}  // namespace dioph
