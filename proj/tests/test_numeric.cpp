#include <doctest.h>

#include <random>

#include "dioph/errors.hpp"
#include "dioph/numeric.hpp"
#include "oracles.hpp"

using namespace dioph;

TEST_CASE("prod_mult and sup_norm") {
  CHECK(prod_mult(IntVector{2, 0, -3}) == 6);
  CHECK(prod_mult(IntVector{0, 0, 0}) == 1);
  CHECK(prod_mult(IntVector{1, 1, 1}) == 1);
  CHECK(sup_norm(IntVector{2, 0, -3}) == 3);
  CHECK(sup_norm(IntVector{0, 0, 0}) == 0);
  CHECK(sup_norm(IntVector{-7}) == 7);
}

TEST_CASE("dist_to_int examples") {
  CHECK(dist_to_int(Rational(7, 3)) == Rational(1, 3));
  CHECK(dist_to_int(Rational(5, 2)) == Rational(1, 2));
  CHECK(dist_to_int(Rational(-4)) == 0);
  // half-integer ties pick the offset of smaller magnitude
  CHECK(nearest_offset(Rational(5, 2)) == -2);
  CHECK(nearest_offset(Rational(-5, 2)) == 2);
  CHECK(nearest_offset(Rational(1, 2)) == 0);
  CHECK(nearest_offset(Rational(-7, 3)) == 2);
}

TEST_CASE("support bookkeeping") {
  IntVector q{0, 5, -1};
  CHECK(q.support_mask() == 0b110u);
  CHECK(q.support_size() == 2);
  CHECK(q.str() == "0;5;-1");
  CHECK(IntVector{0, 0}.is_zero());
}

TEST_CASE("ExactReal invariants") {
  ExactReal x(Rational(6, -4));
  CHECK(x.value().get_num() == -3);
  CHECK(x.value().get_den() == 2);
  CHECK(x.is_target_rational());
  CHECK(x.admits_height(BigInt("1000000000000000000000")));
  ExactReal g(Rational(13, 8), BigInt(7));
  CHECK(g.admits_height(7));
  CHECK_FALSE(g.admits_height(8));
  CHECK_THROWS_AS(ExactReal(Rational(1), BigInt(0)), DomainError);
  CHECK(ExactReal::parse("355/113").value() == Rational(355, 113));
  CHECK_THROWS_AS(ExactReal::parse("1.5"), DomainError);
  CHECK(*min_guard({ExactReal(Rational(1)), g, ExactReal(Rational(1), BigInt(100))}) == 7);
  CHECK_FALSE(min_guard({ExactReal(Rational(1))}).has_value());
}

TEST_CASE("formatting") {
  CHECK(rational_str(Rational(-3, 2)) == "-3/2");
  CHECK(rational_str(Rational(5)) == "5");
  CHECK(real_str(1.0 / 3.0) == "0.333333333333");
  CHECK(real_str(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(Exponent{2.5, false}.str() == "2.5");
  CHECK(Exponent{0.0, true}.str() == "inf");
}

TEST_CASE("property: numeric-core invariants on random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> entry(-50, 50);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 4;
    IntVector q(n);
    for (int i = 0; i < n; ++i) q[i] = entry(rng);
    if (q.is_zero()) continue;
    BigInt bound;
    mpz_pow_ui(bound.get_mpz_t(), sup_norm(q).get_mpz_t(), n);
    CHECK(prod_mult(q) <= bound);
  }
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 997), shift(-1000, 1000);
  for (int trial = 0; trial < 500; ++trial) {
    Rational x(num(rng), den(rng));
    x.canonicalize();
    Rational d = dist_to_int(x);
    CHECK(d == oracle::dist(x));
    CHECK(d >= 0);
    CHECK(d <= Rational(1, 2));
    CHECK(dist_to_int(x + shift(rng)) == d);
    CHECK(Rational(d * x.get_den()).get_den() == 1);
    CHECK(abs(x + nearest_offset(x)) == d);
    // the fixed-point image agrees with the exact distance to 2^-120
    const double fixed = std::ldexp(static_cast<double>(circle_dist(frac_fixed(x))), -128);
    CHECK(fixed == doctest::Approx(d.get_d()).epsilon(1e-12));
  }
}

TEST_CASE("log_abs handles huge values") {
  BigInt big = BigInt(1) << 5000;
  CHECK(log_abs(big) == doctest::Approx(5000 * std::log(2.0)));
  CHECK(log_abs(Rational(BigInt(1), big)) == doctest::Approx(-5000 * std::log(2.0)));
  CHECK(log_abs(Rational(-3, 7)) == doctest::Approx(std::log(3.0 / 7.0)));
}
