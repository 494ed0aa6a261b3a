#pragma once

#include <vector>

#include "dioph/numeric.hpp"

namespace dioph {

// The affine hyperplane of points (x_1, ..., x_{n-1}, a_1 x_1 + ... + a_{s-1} x_{s-1} + b).
struct Hyperplane {
  int n = 0;
  int s = 0;
  std::vector<ExactReal> a;  // a_1 .. a_{s-1}, all nonzero
  ExactReal b;

  Hyperplane() = default;
  Hyperplane(int n, int s, std::vector<ExactReal> a, ExactReal b);
};

std::vector<ExactReal> point_on(const Hyperplane& h, const std::vector<ExactReal>& x);

}  // namespace dioph
