#include "dioph/hyperplane.hpp"

#include "dioph/errors.hpp"

namespace dioph {

Hyperplane::Hyperplane(int n_, int s_, std::vector<ExactReal> a_, ExactReal b_)
    : n(n_), s(s_), a(std::move(a_)), b(std::move(b_)) {
  if (n < 1) throw DomainError("hyperplane dimension must be positive");
  if (s < 1 || s > n) throw DomainError("parameter count s must satisfy 1 <= s <= n");
  if (static_cast<int>(a.size()) != s - 1) throw DomainError("expected s-1 coefficients a_i");
  for (const auto& ai : a)
    if (ai.value() == 0) throw DomainError("coefficients a_i must be nonzero");
}

std::vector<ExactReal> point_on(const Hyperplane& h, const std::vector<ExactReal>& x) {
  if (static_cast<int>(x.size()) != h.n - 1) throw DomainError("point_on expects n-1 parameters");
  std::vector<ExactReal> y(x.begin(), x.end());
  Rational last = h.b.value();
  std::vector<ExactReal> used{h.b};
  for (int i = 0; i < h.s - 1; ++i) {
    last += h.a[i].value() * x[i].value();
    used.push_back(h.a[i]);
    used.push_back(x[i]);
  }
  auto g = min_guard(used);
  y.push_back(g ? ExactReal(last, *g) : ExactReal(last));
  return y;
}

}  // namespace dioph
