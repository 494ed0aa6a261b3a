#pragma once

#include <vector>

#include "dioph/hyperplane.hpp"
#include "dioph/mpreal.hpp"
#include "dioph/numeric.hpp"

namespace dioph {

inline constexpr int kMaxLatticeDim = 6;

// Columns of an (n+1)x(n+1) basis with exact entries. Row i is additionally
// scaled by exp(log_scale[i]), which is kept apart from the exact entries.
struct LatticeBasis {
  std::vector<std::vector<Rational>> columns;
  std::vector<double> log_scale;  // empty means all zero

  int dim() const { return static_cast<int>(columns.size()); }
};

Rational determinant(const LatticeBasis& b);  // of the exact entries

struct FlowParams {
  std::vector<double> t_vec;  // t_1 .. t_n, all nonnegative

  FlowParams() = default;
  explicit FlowParams(std::vector<double> t);
  // magnitude * direction, for a point of the unit simplex
  static FlowParams along(const std::vector<double>& direction, double magnitude);
  double t() const { return t_; }

 private:
  double t_ = 0.0;
};

// First row (1, y_1, ..., y_n) above the identity.
LatticeBasis u_matrix(const std::vector<ExactReal>& y);

struct ScaledBasis {
  std::vector<std::vector<Real>> columns;
  mpfr_prec_t bits = 256;

  int dim() const { return static_cast<int>(columns.size()); }
};

// Precision actually used for a flow: at least `requested`, raised so that
// the spread of scaled magnitudes costs at most half the mantissa.
mpfr_prec_t flow_precision(const LatticeBasis& b, const FlowParams& f, mpfr_prec_t requested);

// Rows scaled by (e^t, e^{-t_1}, ..., e^{-t_n}) on top of b.log_scale.
ScaledBasis apply_flow(const LatticeBasis& b, const FlowParams& f, mpfr_prec_t precision_bits = 256);
Real determinant(const ScaledBasis& b);

struct ShortestVector {
  IntVector coeffs;  // w.r.t. the input columns; first nonzero entry positive
  std::vector<Real> vec;
  Real norm;  // sup norm
};

// Sup-norm shortest nonzero vector: LLL (delta 0.99) followed by
// Fincke-Pohst enumeration in the Euclidean ball that must contain it.
ShortestVector shortest_vector(const ScaledBasis& b);

struct ExactShortest {
  IntVector coeffs;
  Rational norm;
};
// For bases without scaling; candidates are compared exactly.
ExactShortest shortest_vector(const LatticeBasis& b);

struct TrajectoryPoint {
  double t = 0.0;
  double norm = 0.0;
  double delta = 0.0;  // -log norm
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  // Growth rate of delta: slope fitted to the interior local maxima of
  // delta(t), or the largest delta/t over the second half when there are
  // fewer than three maxima.
  double slope = 0.0;
};

Trajectory flow_trajectory(const std::vector<ExactReal>& y, const std::vector<double>& direction,
                           double t_max, int steps, mpfr_prec_t precision_bits = 256);

// Points of the unit simplex in R^n with coordinates in (1/mesh) Z.
std::vector<std::vector<double>> simplex_grid(int n, int mesh);

// (p_0 + b p_n, p_1 + a_1 p_n, ..., p_{s-1} + a_{s-1} p_n) for w = (p_0, ..., p_n).
std::vector<Rational> penalty_vector(const IntVector& w, const Hyperplane& h);

// log of the rank-one flow norm of w = (p_0, ..., p_n):
//   max(e^{-t_i} |p_i| for i in {1..s-1, n}, e^t |(penalty_vector(w), p_s, ..., p_{n-1})|).
// Entries p_s .. p_{n-1} pass through unscaled, so any nonzero one gives norm >= 1.
double flow_log_norm(const IntVector& w, const Hyperplane& h, const FlowParams& f);

struct Violation {
  IntVector w;
  FlowParams flow;
  double log_norm = 0.0;  // log of the max-form norm, below -d t
};

// Integer vectors w with |p_i| <= w_budget, p_n > 0, p_1..p_{s-1} nonzero and
// p_s = ... = p_{n-1} = 0 whose flow norm
//   max(e^{-t_i} |p_i| for i in {1..s-1, n}, e^t |penalty_vector(w)|)
// drops below e^{-d t} somewhere on the schedule.
std::vector<Violation> violation_search(const Hyperplane& h, double d, const std::vector<FlowParams>& schedule,
                                        std::uint64_t w_budget);

}  // namespace dioph
