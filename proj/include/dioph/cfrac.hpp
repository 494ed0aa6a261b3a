#pragma once

#include <cstdint>
#include <vector>

#include "dioph/numeric.hpp"

namespace dioph {

struct CFrac {
  std::vector<BigInt> quotients;  // a_0; a_1, a_2, ...
  std::vector<BigInt> p, q;       // convergents p_k / q_k
  bool terminated = false;        // the expansion ended before the requested depth

  static CFrac from_quotients(std::vector<BigInt> quotients);
  std::size_t size() const { return quotients.size(); }
};

CFrac expand(const ExactReal& x, std::size_t depth);

struct SigmaEstimate {
  Exponent sigma;
  std::vector<double> v_series;  // log q_{k+1} / log q_k, for q_k >= 2
};

// sigma from convergent growth. Fits the slope of log q_{k+1} against log q_k
// over the later half of the convergents, which converges to the limsup of
// v_k for the regular growth patterns handled here.
SigmaEstimate sigma_from_cfrac(const CFrac& cf, bool rational_target = false);

struct Constructed {
  ExactReal value;
  CFrac cf;
};

// Continued fraction [a_0; a_1, ...] truncated after `quotients`; the guard is
// one below the last convergent denominator.
Constructed from_quotients(std::vector<BigInt> quotients);

// a_0 = 1, a_{k+1} = max(1, round(q_k^(target-1))), so q_{k+1} ~ q_k^target.
Constructed construct_with_sigma(double target, std::size_t depth);
Constructed golden(std::size_t depth);
// sqrt(k) for non-square k, truncated after `depth` quotients.
Constructed sqrt_truncation(unsigned long k, std::size_t depth);

struct SimultaneousRecord {
  std::uint64_t q = 0;
  Rational residual;  // max_i dist_to_int(q y_i)
};

struct SigmaVectorEstimate {
  Exponent sigma;
  std::vector<SimultaneousRecord> records;
  bool exact_dependence = false;
};

// Brute force over 1 <= q <= height_cap for the simultaneous exponent of y.
SigmaVectorEstimate sigma_vector_estimate(const std::vector<ExactReal>& y, std::uint64_t height_cap);

}  // namespace dioph
