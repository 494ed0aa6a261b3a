#include <doctest.h>

#include <cstdlib>
#include <random>

#include "dioph/cfrac.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "dioph/fit.hpp"
#include "oracles.hpp"

using namespace dioph;

namespace {

Rational random_rational(std::mt19937_64& rng, unsigned bits) {
  BigInt num = 0, den = BigInt(1) << bits;
  for (unsigned i = 0; i < bits; i += 32) num = (num << 32) + BigInt(static_cast<unsigned long>(rng() & 0xffffffffu));
  num %= den;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::vector<ExactReal> random_point(std::mt19937_64& rng, int n, unsigned bits = 256) {
  std::vector<ExactReal> y;
  for (int i = 0; i < n; ++i) y.emplace_back(random_rational(rng, bits));
  return y;
}

void check_front(const std::vector<ApproxRecord>& got, const std::vector<oracle::Rec>& want, bool sup) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK((sup ? got[i].sup_h : got[i].mult_h) == want[i].height);
    CHECK(got[i].residual == want[i].residual);
  }
}

void check_record_invariants(const RecordSet& rs) {
  for (const auto& [mask, recs] : rs.by_support)
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      CHECK(r.q.support_mask() == mask);
      CHECK(r.k == std::popcount(mask));
      CHECK(r.residual >= 0);
      CHECK(r.residual <= Rational(1, 2));
      CHECK(r.mult_h == prod_mult(r.q));
      CHECK(r.sup_h == sup_norm(r.q));
      CHECK(r.mult_h <= BigInt(r.sup_h * r.sup_h * r.sup_h * r.sup_h * r.sup_h * r.sup_h));
      CHECK(r.q[static_cast<std::size_t>(std::countr_zero(mask))] > 0);
      if (i > 0) {
        CHECK(r.residual < recs[i - 1].residual);
        CHECK(r.mult_h > recs[i - 1].mult_h);
      }
    }
}

}  // namespace

TEST_CASE("multiplicative fronts match exhaustive enumeration") {
  std::mt19937_64 rng(11);
  struct Case {
    int n;
    long cap;
  };
  for (Case c : {Case{1, 3000}, Case{2, 400}, Case{3, 60}}) {
    for (int trial = 0; trial < 3; ++trial) {
      auto y = random_point(rng, c.n, 64);
      std::vector<Rational> yv;
      for (const auto& e : y) yv.push_back(e.value());
      RecordSet rs = search_records(y, static_cast<std::uint64_t>(c.cap));
      check_record_invariants(rs);
      CHECK(rs.by_support.size() == (1u << c.n) - 1);
      for (const auto& [mask, recs] : rs.by_support) check_front(recs, oracle::brute_front(yv, mask, c.cap, false), false);
    }
  }
}

TEST_CASE("sup-norm envelope matches exhaustive enumeration") {
  std::mt19937_64 rng(12);
  for (int n : {2, 3}) {
    auto y = random_point(rng, n, 64);
    std::vector<Rational> yv;
    for (const auto& e : y) yv.push_back(e.value());
    SearchOptions o;
    o.height_cap = 64;
    o.sup_cap = n == 2 ? 32 : 8;
    RecordSet rs = search_records(y, o);
    CHECK(rs.sup_height_reached == o.sup_cap);
    const auto brute = oracle::brute_sup_front(yv, static_cast<long>(o.sup_cap));
    // every envelope record is the best approximation within its own box
    for (const auto& r : rs.sup_records) {
      Rational best = 1;
      for (const auto& b : brute)
        if (b.height <= r.sup_h.get_si()) best = std::min(best, b.residual);
      CHECK(r.residual == best);
    }
    CHECK(rs.sup_records.back().residual == brute.back().residual);
  }
}

TEST_CASE("search examples") {
  RecordSet dep = search_records({ExactReal(Rational(1, 2)), ExactReal(Rational(1, 3))}, 10);
  CHECK(dep.exact_dependence);
  CHECK(omega_estimate(dep).infinite);
  CHECK(omega_mult_estimate(dep).infinite);

  // golden ratio: the records are Fibonacci numbers
  RecordSet g = search_records({golden(40).value}, 100000);
  std::vector<long> fib, got;
  for (long a = 1, b = 2; a <= 100000; std::swap(a, b), b += a) fib.push_back(a);
  for (const auto& r : g.by_support.at(1)) got.push_back(r.q[0].get_si());
  CHECK(got == fib);
}

TEST_CASE("search guards") {
  CHECK_THROWS_AS(search_records({golden(10).value}, 100000), DomainError);
  CHECK_THROWS_AS(search_records({golden(40).value}, 1), DomainError);
  CHECK_THROWS_AS(search_records(std::vector<ExactReal>(7, ExactReal(Rational(1, 3))), 10), Unsupported);
  SearchOptions o;
  o.height_cap = 100000;
  o.budget = 1000;
  CHECK_THROWS_AS(search_records({ExactReal(Rational(1, 7)), ExactReal(Rational(2, 7))}, o), ResourceLimit);
  setenv("DIOPH_LAB_BUDGET", "12345", 1);
  CHECK(default_budget() == 12345);
  unsetenv("DIOPH_LAB_BUDGET");
  CHECK(default_budget() == 1000000000);
}

TEST_CASE("property: sign symmetry, cap extension and worker merge") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 4; ++trial) {
    auto y = random_point(rng, 2);
    std::vector<ExactReal> neg;
    for (const auto& e : y) neg.emplace_back(-e.value());
    RecordSet a = search_records(y, 3000), b = search_records(neg, 3000);
    for (const auto& [mask, recs] : a.by_support) {
      const auto& other = b.by_support.at(mask);
      REQUIRE(recs.size() == other.size());
      for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].residual == other[i].residual);
        CHECK(recs[i].mult_h == other[i].mult_h);
      }
    }
    // a larger cap extends the fronts without rewriting them
    RecordSet big = search_records(y, 12000);
    for (const auto& [mask, recs] : a.by_support) {
      const auto& ext = big.by_support.at(mask);
      REQUIRE(ext.size() >= recs.size());
      for (std::size_t i = 0; i < recs.size(); ++i) CHECK(ext[i].q == recs[i].q);
    }
    SearchOptions o;
    o.height_cap = 3000;
    o.workers = 3;
    RecordSet par = search_records(y, o);
    for (const auto& [mask, recs] : a.by_support) {
      const auto& p = par.by_support.at(mask);
      REQUIRE(p.size() == recs.size());
      for (std::size_t i = 0; i < recs.size(); ++i) CHECK(p[i].q == recs[i].q);
    }
    RecordSet ab = RecordSet::merge(a, big), ba = RecordSet::merge(big, a);
    for (const auto& [mask, recs] : ab.by_support) {
      const auto& o2 = ba.by_support.at(mask);
      REQUIRE(o2.size() == recs.size());
      for (std::size_t i = 0; i < recs.size(); ++i) CHECK(o2[i].q == recs[i].q);
      CHECK(recs.size() == big.by_support.at(mask).size());
    }
  }
}

TEST_CASE("omega estimates") {
  RecordSet g = search_records({golden(40).value}, 100000);
  CHECK(omega_estimate(g).value == doctest::Approx(1.0).epsilon(0.05));
  // n = 1: both exponents read the same records
  CHECK(omega_mult_estimate(g).value == omega_estimate(g).value);

  RecordSet pair = search_records({sqrt_truncation(2, 40).value, sqrt_truncation(3, 40).value}, 10000);
  CHECK(omega_estimate(pair).value == doctest::Approx(2.0).epsilon(0.15));

  CHECK_THROWS_AS(omega_estimate(search_records({golden(40).value}, 2)), InsufficientData);
}

TEST_CASE("omega_mult on the special lines y = (x, b)") {
  std::mt19937_64 rng(14);
  const ExactReal gold = golden(40).value, b2 = construct_with_sigma(2, 12).value;
  for (int trial = 0; trial < 3; ++trial) {
    const ExactReal x(random_rational(rng, 256));
    RecordSet a = search_records({x, gold}, 10000);
    CHECK(omega_mult_estimate(a).value == doctest::Approx(2.0).epsilon(0.15));
    RecordSet b = search_records({x, b2}, 100000);
    CHECK(omega_mult_estimate(b).value == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("c_k and v_from_c") {
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= n; ++k) CHECK(c_k(n, k, n) == 0);
  CHECK(c_k(4, 1, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(v_from_c(1.0 / 3.0, 1, 2) == doctest::Approx(4.0));
  CHECK_THROWS_AS(c_k(1.5, 1, 2), DomainError);
  CHECK_THROWS_AS(v_from_c(0.5, 2, 3), DomainError);
  CHECK_THROWS_AS(v_from_c(-0.1, 1, 3), DomainError);

  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 6), k = 1 + static_cast<int>(rng() % n);
    const double v = n + 50 * unit(rng);
    CHECK(v_from_c(c_k(v, k, n), k, n) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("omega_from_gamma") {
  CHECK(omega_from_gamma(std::vector<double>{0, 0}).value == 2);
  CHECK(omega_from_gamma(std::vector<double>{1.0 / 3.0, 0}).value == doctest::Approx(4.0));
  CHECK(omega_from_gamma(std::vector<double>{0, 0, 0.1}).value == doctest::Approx(3.3 / 0.7));
  CHECK(omega_from_gamma(std::vector<double>{0, 0.5}).infinite);
}

TEST_CASE("gamma_k_estimate") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 3; ++trial) {
    RecordSet rs = search_records(random_point(rng, 2), 10000);
    for (const auto& g : gamma_estimates(rs)) CHECK(g.value == doctest::Approx(0.0).epsilon(0.05));
  }
  const ExactReal b2 = construct_with_sigma(2, 12).value;
  RecordSet b = search_records({ExactReal(random_rational(rng, 256)), b2}, 100000);
  GammaEstimate g1 = gamma_k_estimate(b, 1);
  CHECK(g1.value == doctest::Approx(1.0 / 3.0).epsilon(0.07));
  CHECK(g1.support == 0b10u);

  // a single record still yields a bounded, nonnegative slope
  RecordSet one;
  one.n = 1;
  ApproxRecord r;
  r.q = IntVector{1};
  r.p = 0;
  r.residual = Rational(1, 22026);  // about e^-10
  r.sup_h = r.mult_h = 1;
  r.k = 1;
  one.by_support[1] = {r};
  GammaEstimate single = gamma_k_estimate(one, 1);
  CHECK(single.value >= 0);
  CHECK(single.value <= 1);

  RecordSet empty;
  empty.n = 2;
  GammaEstimate e = gamma_k_estimate(empty, 2);
  CHECK(e.empty);
  CHECK(e.value == 0);
}

TEST_CASE("property: sandwich and bridge on random points") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + trial % 2;
    RecordSet rs = search_records(random_point(rng, n), 10000);
    const Exponent w = omega_estimate(rs);
    const MultEstimate m = omega_mult_estimate(rs);
    CHECK(m.value >= w.value - 0.05);
    CHECK(m.value <= n * w.value + 0.05);
    // n = 3 estimates at this cap still drift by up to 0.6, so only n = 2 counts as converged
    if (n == 2) CHECK(std::abs(omega_from_gamma(gamma_estimates(rs)).value - m.value) <= 0.3);
  }
}

TEST_CASE("fit helpers") {
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK(quantile({0, 10}, 0.25) == 2.5);
  std::vector<Point> line;
  for (int i = 0; i < 10; ++i) line.push_back({double(i), 2.0 * i + 1});
  CHECK(theil_sen_slope(line) == doctest::Approx(2.0));
  CHECK(slope_fit(line).lower == doctest::Approx(2.0));
  std::vector<Point> saw{{0, 0}, {1, 2}, {2, 1}, {3, 1}, {4, 3}, {5, 3}, {6, 0}};
  auto peaks = local_maxima(saw);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0].x == 1);
  CHECK(peaks[1].y == 3);
  CHECK_THROWS_AS(theil_sen_slope(std::vector<Point>{{1, 1}}), InsufficientData);
}
