#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dioph/numeric.hpp"

namespace dioph {

struct ApproxRecord {
  IntVector q;
  BigInt p;
  Rational residual;  // |q.y + p|, minimal over p
  BigInt sup_h;
  BigInt mult_h;
  int k = 0;  // number of nonzero entries of q
};

std::uint64_t default_budget();  // 10^9, or DIOPH_LAB_BUDGET when set

struct SearchOptions {
  std::uint64_t height_cap = 0;  // bound on prod_mult(q)
  // Bound on sup_norm(q) for the sup-norm envelope, rounded down to a power
  // of two. 0 picks the largest one whose prefix box fits sup_prefix_limit.
  std::uint64_t sup_cap = 0;
  std::uint64_t sup_prefix_limit = std::uint64_t{1} << 22;
  std::uint64_t budget = default_budget();
  std::vector<unsigned> supports;  // restrict to these support masks; empty = all
  unsigned workers = 1;
};

class RecordSet {
 public:
  int n = 0;
  std::uint64_t height_reached = 0;
  std::uint64_t sup_height_reached = 0;
  bool exact_dependence = false;
  // Pareto front in (mult_h, residual) for each searched support mask.
  std::map<unsigned, std::vector<ApproxRecord>> by_support;
  // Pareto front in (sup_h, residual) at dyadic box checkpoints.
  std::vector<ApproxRecord> sup_records;

  // Pareto front over all supports with k nonzero entries.
  std::vector<ApproxRecord> class_records(int k) const;
  // Union of two record sets (e.g. stripes of one search), re-reduced to fronts.
  static RecordSet merge(const RecordSet& a, const RecordSet& b);
};

// Evaluations a search with these options would perform.
std::uint64_t search_cost(int n, const SearchOptions& opts);

RecordSet search_records(const std::vector<ExactReal>& y, const SearchOptions& opts);
RecordSet search_records(const std::vector<ExactReal>& y, std::uint64_t height_cap);

// Number of k-tuples of positive integers with product at most h.
BigInt divisor_count(int k, std::uint64_t h);

Exponent omega_estimate(const RecordSet& rs);

struct MultEstimate : Exponent {
  std::string family;  // "sup" or a support such as "{1,2}"
};
MultEstimate omega_mult_estimate(const RecordSet& rs);

double c_k(double v, int k, int n);
double v_from_c(double c, int k, int n);

struct GammaGrid {
  int mesh = 8;        // directions have coordinates in (1/mesh) Z
  double t_max = 0.0;  // ignore corners beyond this magnitude; 0 keeps all
};

struct GammaEstimate {
  double value = 0.0;  // in [0, 1/k]; equal to 1/k only when saturated
  bool saturated = false;
  bool empty = false;
  unsigned support = 0;
  std::size_t corners = 0;
};

GammaEstimate gamma_k_estimate(const RecordSet& rs, int k, const GammaGrid& grid = {});
std::vector<GammaEstimate> gamma_estimates(const RecordSet& rs, const GammaGrid& grid = {});

Exponent omega_from_gamma(std::span<const double> gammas);
Exponent omega_from_gamma(const std::vector<GammaEstimate>& gammas);

std::string support_str(unsigned mask);

}  // namespace dioph
