#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dioph/exponents.hpp"
#include "dioph/hyperplane.hpp"
#include "dioph/lattice.hpp"

namespace dioph {

inline constexpr double kSandwichTol = 0.1;
inline constexpr double kBridgeTol = 0.1;

// max{n, (n/s) sigma(a_1, ..., a_{s-1}, b)}. For s = 1 sigma(b) comes from
// the continued fraction of b; otherwise from brute force up to sigma_cap.
Exponent theoretical_exponent(const Hyperplane& h, std::uint64_t sigma_cap);

struct Sample {
  std::vector<ExactReal> x;  // parameters, n-1 entries
  std::vector<ExactReal> y;  // point_on(h, x)
};

// Parameters uniform in (0,1) with prime denominators of exactly
// denominator_bits bits.
std::vector<Sample> sample_box(const Hyperplane& h, std::size_t count, unsigned denominator_bits, std::uint64_t seed);
// Points x = (tau, tau^2, ..., tau^{n-1}) of the moment curve; needs n >= 3.
std::vector<Sample> sample_curve(const Hyperplane& h, std::size_t count, std::uint64_t seed,
                                 unsigned denominator_bits = 256);

struct SandwichResult {
  bool ok = true;
  bool skipped = false;  // an exponent is infinite
};
// omega - tol <= omega_mult <= n omega + tol
SandwichResult sandwich_check(int n, const Exponent& omega, const Exponent& omega_mult, double tol = kSandwichTol);

struct ExperimentConfig {
  enum class Sampling { box, curve };
  Sampling sampling = Sampling::box;
  std::size_t samples = 20;
  unsigned denominator_bits = 256;
  std::uint64_t seed = 1;
  std::uint64_t height_cap = 100000;
  std::uint64_t sup_cap = 0;
  std::uint64_t sigma_cap = 10000;
  std::uint64_t budget = default_budget();
  GammaGrid gamma_grid;
  bool flow = false;
  double flow_t_max = 30.0;
  int flow_steps = 121;
  int flow_mesh = 4;
  mpfr_prec_t flow_bits = 256;
  unsigned workers = 1;
};

struct PointResult {
  std::size_t id = 0;
  Sample sample;
  bool skipped = false;
  std::string skip_reason;
  RecordSet records;
  std::optional<Exponent> omega;
  std::optional<MultEstimate> omega_mult;
  std::vector<GammaEstimate> gammas;
  std::optional<Exponent> omega_from_gamma;
  std::vector<Trajectory> trajectories;  // one per flow direction, when enabled
  std::optional<double> flow_bridge;     // largest trajectory slope
  std::optional<double> gap;             // omega_mult - theoretical
  std::vector<std::string> flags;
};

struct ExperimentSummary {
  std::size_t points = 0;
  std::size_t skipped = 0;
  double median_omega_mult = 0.0;
  double median_gap = 0.0;
  double median_abs_gap = 0.0;
  double iqr_omega_mult = 0.0;
  std::size_t sandwich_violations = 0;
  std::size_t bridge_agreements = 0;  // |omega_from_gamma - omega_mult| <= 0.3
  std::size_t flow_agreements = 0;    // |flow slope - max gamma| <= kBridgeTol
  std::size_t flow_points = 0;
  bool theory_agrees = false;  // median |gap| <= 0.4
};

struct ExperimentReport {
  Hyperplane h;
  ExperimentConfig config;
  Exponent theoretical;
  std::vector<PointResult> rows;
  ExperimentSummary summary;
};

ExperimentReport run_experiment(const Hyperplane& h, const ExperimentConfig& config);

// Runs the estimators on one point; budget errors become a skip marker.
PointResult evaluate_point(const Sample& s, int n, const ExperimentConfig& config);

ExperimentSummary summarize(const std::vector<PointResult>& rows, const Exponent& theoretical);

// Row 1 of every CSV: "# schema=dioph-lab/<kind> v1".
inline constexpr int kSchemaVersion = 1;
std::string schema_stamp(const std::string& kind);

void write_report_csv(std::ostream& out, const ExperimentReport& r);
void write_records_csv(std::ostream& out, const RecordSet& rs);
void write_trajectory_csv(std::ostream& out, const std::vector<Trajectory>& trajectories);
void write_summary(std::ostream& out, const ExperimentReport& r);

}  // namespace dioph
