#pragma once

#include <span>
#include <vector>

namespace dioph {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double median(std::vector<double> xs);
double quantile(std::vector<double> xs, double p);  // linear interpolation

// Median of pairwise slopes. Only pairs whose x values differ by at least
// min_separation times the x range take part: short pairs mostly measure the
// scatter of individual records, not the trend. Throws InsufficientData when
// no pair qualifies.
double theil_sen_slope(std::span<const Point> pts, double min_separation = 0.0);

// Median and lower quartile of the long-baseline pairwise slopes.
struct SlopeFit {
  double slope = 0.0;
  double lower = 0.0;
};
SlopeFit slope_fit(std::span<const Point> pts);

// Long-baseline variant used by all exponent estimators.
inline constexpr double kBaseline = 0.3;

// Points with y above every point of smaller x (sorted by x).
std::vector<Point> upper_front(std::vector<Point> pts);

// Interior strict local maxima of a sampled series (plateaus count once).
std::vector<Point> local_maxima(std::span<const Point> series);

}  // namespace dioph
