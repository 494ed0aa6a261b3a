#pragma once

#include <mpfr.h>

#include <utility>

#include "dioph/numeric.hpp"

namespace dioph {

// MPFR value whose precision is taken from the calling thread's working
// precision at construction (see PrecisionScope).
class Real {
 public:
  static mpfr_prec_t& working_precision() {
    thread_local mpfr_prec_t bits = 256;
    return bits;
  }

  Real() { mpfr_init2(v_, working_precision()), mpfr_set_zero(v_, 1); }
  Real(double d) { mpfr_init2(v_, working_precision()), mpfr_set_d(v_, d, MPFR_RNDN); }
  Real(int i) : Real(static_cast<double>(i)) {}
  explicit Real(const BigInt& z) { mpfr_init2(v_, working_precision()), mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  explicit Real(const Rational& q) { mpfr_init2(v_, working_precision()), mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)), mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  Real& operator+=(const Real& o) { return mpfr_add(v_, v_, o.v_, MPFR_RNDN), *this; }
  Real& operator-=(const Real& o) { return mpfr_sub(v_, v_, o.v_, MPFR_RNDN), *this; }
  Real& operator*=(const Real& o) { return mpfr_mul(v_, v_, o.v_, MPFR_RNDN), *this; }
  Real& operator/=(const Real& o) { return mpfr_div(v_, v_, o.v_, MPFR_RNDN), *this; }
  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }

  friend Real abs(Real a) { return mpfr_abs(a.v_, a.v_, MPFR_RNDN), a; }
  friend Real exp(Real a) { return mpfr_exp(a.v_, a.v_, MPFR_RNDN), a; }
  friend Real log(Real a) { return mpfr_log(a.v_, a.v_, MPFR_RNDN), a; }
  friend Real sqrt(Real a) { return mpfr_sqrt(a.v_, a.v_, MPFR_RNDN), a; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  BigInt round() const {
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
    return z;
  }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

 private:
  mpfr_t v_;
};

class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits) : old_(Real::working_precision()) { Real::working_precision() = bits; }
  ~PrecisionScope() { Real::working_precision() = old_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t old_;
};

}  // namespace dioph
