#include "dioph/fit.hpp"

#include <algorithm>
#include <cmath>

#include "dioph/errors.hpp"

namespace dioph {

double median(std::vector<double> xs) {
  if (xs.empty()) throw InsufficientData("median of empty sample");
  std::sort(xs.begin(), xs.end());
  std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

double quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw InsufficientData("quantile of empty sample");
  std::sort(xs.begin(), xs.end());
  double pos = p * static_cast<double>(xs.size() - 1);
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= xs.size()) return xs.back();
  double f = pos - static_cast<double>(i);
  return xs[i] + f * (xs[i + 1] - xs[i]);
}

namespace {

std::vector<double> pair_slopes(std::span<const Point> pts, double min_separation) {
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    lo = i ? std::min(lo, pts[i].x) : pts[i].x;
    hi = i ? std::max(hi, pts[i].x) : pts[i].x;
  }
  const double gap = std::max(1e-12, min_separation * (hi - lo));
  std::vector<double> slopes;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double dx = pts[j].x - pts[i].x;
      if (std::fabs(dx) >= gap) slopes.push_back((pts[j].y - pts[i].y) / dx);
    }
  if (slopes.empty()) throw InsufficientData("slope fit needs two separated abscissae");
  return slopes;
}

}  // namespace

double theil_sen_slope(std::span<const Point> pts, double min_separation) {
  return median(pair_slopes(pts, min_separation));
}

SlopeFit slope_fit(std::span<const Point> pts) {
  auto s = pair_slopes(pts, kBaseline);
  return {median(s), quantile(s, 0.25)};
}

std::vector<Point> upper_front(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x != b.x ? a.x < b.x : a.y > b.y; });
  std::vector<Point> out;
  for (const auto& p : pts)
    if (out.empty() || p.y > out.back().y) out.push_back(p);
  return out;
}

std::vector<Point> local_maxima(std::span<const Point> s) {
  std::vector<Point> out;
  std::size_t i = 1;
  while (i + 1 < s.size()) {
    if (s[i].y > s[i - 1].y) {
      std::size_t j = i;
      while (j + 1 < s.size() && s[j + 1].y == s[i].y) ++j;
      if (j + 1 < s.size() && s[j + 1].y < s[i].y) out.push_back(s[(i + j) / 2]);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace dioph
