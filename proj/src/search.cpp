#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"

namespace dioph {

namespace {

constexpr int kMaxDim = 6;

// Best candidate seen for one (support, height) cell. `d` approximates the
// residual in units of 2^-128 with absolute error at most `err` units.
struct Slot {
  u128 d = 0;
  std::uint64_t err = 0;
  std::array<std::int64_t, kMaxDim> q{};
  bool used = false;
};

class Exact {
 public:
  Exact(const std::vector<ExactReal>& y) : y_(y) {}

  IntVector vec(const std::array<std::int64_t, kMaxDim>& q) const {
    IntVector v(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) v[i] = static_cast<long>(q[i]);
    return v;
  }
  Rational residual(const std::array<std::int64_t, kMaxDim>& q) const { return dist_to_int(dot(vec(q), y_)); }

  ApproxRecord record(const std::array<std::int64_t, kMaxDim>& q) const {
    ApproxRecord r;
    r.q = vec(q);
    Rational s = dot(r.q, y_);
    r.p = nearest_offset(s);
    r.residual = abs(s + Rational(r.p));
    r.sup_h = sup_norm(r.q);
    r.mult_h = prod_mult(r.q);
    r.k = r.q.support_size();
    return r;
  }

 private:
  const std::vector<ExactReal>& y_;
};

bool lex_less(const Slot& a, const Slot& b) { return a.q < b.q; }

// True when c is strictly better than b; exact ties go to the lexicographically
// smaller q so merges do not depend on enumeration order.
bool better(const Slot& c, const Slot& b, const Exact& ex) {
  if (!b.used) return true;
  if (c.d + c.err + b.err < b.d) return true;
  if (b.d + b.err + c.err < c.d) return false;
  Rational rc = ex.residual(c.q), rb = ex.residual(b.q);
  if (rc != rb) return rc < rb;
  return lex_less(c, b);
}

// Strict residual decrease, used when extracting fronts.
bool strictly_below(const Slot& c, const Slot& b, const Exact& ex) {
  if (c.d + c.err + b.err < b.d) return true;
  if (b.d + b.err + c.err < c.d) return false;
  return ex.residual(c.q) < ex.residual(b.q);
}

std::uint64_t count_tuples(int k, std::uint64_t h) {
  if (h == 0) return 0;
  if (k == 1) return h;
  std::uint64_t total = 0;
  for (std::uint64_t a = 1; a <= h;) {
    std::uint64_t v = h / a, last = h / v;
    total += (last - a + 1) * count_tuples(k - 1, v);
    a = last + 1;
  }
  return total;
}


std::uint64_t sup_box_cap(int n, const SearchOptions& o) {
  if (n < 2 || !o.supports.empty()) return 0;
  std::uint64_t limit = o.sup_cap ? std::min(o.sup_cap, o.height_cap) : o.height_cap;
  std::uint64_t s = std::bit_floor(limit);
  if (o.sup_cap == 0) {
    auto prefixes = [n](std::uint64_t s) {
      double c = 1;
      for (int i = 0; i < n - 1; ++i) c *= static_cast<double>(2 * s + 1);
      return c;
    };
    while (s > 1 && prefixes(s) > static_cast<double>(o.sup_prefix_limit)) s /= 2;
  }
  return s;
}

using Table = std::vector<std::vector<Slot>>;  // indexed by support mask, then height

class Enumerator {
 public:
  Enumerator(int n, std::uint64_t cap, const std::vector<u128>& u, const std::set<unsigned>& allowed, Table& table,
             const Exact& ex, bool& dependent)
      : n_(n), cap_(cap), u_(u), allowed_(allowed), table_(table), ex_(ex), dependent_(dependent) {}

  void run(unsigned stripe, unsigned stripes) {
    stripe_ = stripe;
    stripes_ = stripes;
    level(0, 1, 0, 0, 0, false);
  }

 private:
  bool prefix_ok(unsigned mask, int upto) const {
    unsigned low = upto >= 32 ? ~0u : ((1u << upto) - 1);
    for (unsigned m : allowed_)
      if ((m & low) == mask) return true;
    return false;
  }

  bool in_stripe(int i, std::uint64_t branch) const { return i != 0 || stripes_ == 1 || branch % stripes_ == stripe_; }

  void level(int i, std::uint64_t P, u128 acc, std::uint64_t sumabs, unsigned mask, bool seen) {
    if (i == n_ - 1) {
      last(P, acc, sumabs, mask, seen);
      return;
    }
    if (in_stripe(i, 0) && prefix_ok(mask, i + 1)) {
      q_[i] = 0;
      level(i + 1, P, acc, sumabs, mask, seen);
    }
    unsigned bit = 1u << i;
    if (!prefix_ok(mask | bit, i + 1)) return;
    std::uint64_t M = cap_ / P;
    u128 up = acc, down = acc;
    for (std::uint64_t m = 1; m <= M; ++m) {
      up += u_[i];
      down -= u_[i];
      if (!in_stripe(i, m)) continue;
      q_[i] = static_cast<std::int64_t>(m);
      level(i + 1, P * m, up, sumabs + m, mask | bit, true);
      if (seen) {
        q_[i] = -static_cast<std::int64_t>(m);
        level(i + 1, P * m, down, sumabs + m, mask | bit, true);
      }
    }
    q_[i] = 0;
  }

  void last(std::uint64_t P, u128 acc, std::uint64_t sumabs, unsigned mask, bool seen) {
    const int i = n_ - 1;
    bool stripe_here = in_stripe(i, 0);
    if (seen && stripe_here && allowed_.count(mask)) {
      q_[i] = 0;
      visit(acc, P, sumabs, mask);
    }
    unsigned full = mask | (1u << i);
    if (!allowed_.count(full)) return;
    std::uint64_t M = cap_ / P;
    u128 up = acc, down = acc;
    for (std::uint64_t m = 1; m <= M; ++m) {
      up += u_[i];
      down -= u_[i];
      if (!in_stripe(i, m)) continue;
      q_[i] = static_cast<std::int64_t>(m);
      visit(up, P * m, sumabs + m, full);
      if (seen) {
        q_[i] = -static_cast<std::int64_t>(m);
        visit(down, P * m, sumabs + m, full);
      }
    }
    q_[i] = 0;
  }

  void visit(u128 v, std::uint64_t height, std::uint64_t err, unsigned mask) {
    Slot c;
    c.d = circle_dist(v);
    c.err = err;
    c.q = q_;
    c.used = true;
    if (c.d <= c.err && ex_.residual(c.q) == 0) {
      c.d = 0;
      c.err = 0;
      dependent_ = true;
    }
    Slot& b = table_[mask][height];
    if (b.used && c.d > b.d + b.err + c.err) return;  // the common case, decided cheaply
    if (better(c, b, ex_)) b = c;
  }

  int n_;
  std::uint64_t cap_;
  const std::vector<u128>& u_;
  const std::set<unsigned>& allowed_;
  Table& table_;
  const Exact& ex_;
  bool& dependent_;
  std::array<std::int64_t, kMaxDim> q_{};
  unsigned stripe_ = 0, stripes_ = 1;
};

std::vector<ApproxRecord> front_from_cells(const std::vector<Slot>& cells, const Exact& ex) {
  std::vector<ApproxRecord> out;
  const Slot* cur = nullptr;
  for (const Slot& s : cells) {
    if (!s.used) continue;
    if (cur == nullptr || strictly_below(s, *cur, ex)) {
      out.push_back(ex.record(s.q));
      cur = &s;
    }
  }
  return out;
}

// Box sizes floor(2^(j/4)), so fits see several checkpoints per octave.
std::vector<std::uint64_t> checkpoints(std::uint64_t S) {
  std::vector<std::uint64_t> out;
  for (int j = 0;; ++j) {
    auto q = static_cast<std::uint64_t>(std::floor(std::exp2(j / 4.0) + 1e-9));
    if (q > S) break;
    if (out.empty() || q > out.back()) out.push_back(q);
  }
  return out;
}

std::vector<ApproxRecord> sup_envelope(int n, std::uint64_t S, const std::vector<u128>& u, const Exact& ex) {
  const std::vector<std::uint64_t> levels = checkpoints(S);
  const int J = static_cast<int>(levels.size()) - 1;
  std::vector<Slot> best(J + 1);
  auto offer = [&](const Slot& c, int j) {
    if (better(c, best[j], ex)) best[j] = c;
  };

  // Prefix zero: q = (0, ..., 0, m), m > 0.
  {
    Slot run;
    u128 v = 0;
    std::size_t next = 0;
    for (std::uint64_t m = 1; m <= S; ++m) {
      v += u[n - 1];
      Slot c;
      c.d = circle_dist(v);
      c.err = m;
      c.q[n - 1] = static_cast<std::int64_t>(m);
      c.used = true;
      if (better(c, run, ex)) run = c;
      if (m == levels[next]) offer(run, static_cast<int>(next++));
    }
  }

  // Values of q_n * u_n for |q_n| <= levels[j], sorted around the circle.
  std::vector<std::vector<std::pair<u128, std::int64_t>>> tables(J + 1);
  for (int j = 0; j <= J; ++j) {
    auto R = static_cast<std::int64_t>(levels[j]);
    auto& t = tables[j];
    t.reserve(2 * R + 1);
    for (std::int64_t m = -R; m <= R; ++m) t.emplace_back(times(m, u[n - 1]), m);
    std::sort(t.begin(), t.end());
  }

  std::array<std::int64_t, kMaxDim> p{};
  const auto s = static_cast<std::int64_t>(S);
  auto query = [&](u128 acc, std::uint64_t h, std::uint64_t sumabs) {
    u128 target = static_cast<u128>(0) - acc;
    auto first = std::lower_bound(levels.begin(), levels.end(), h) - levels.begin();
    for (int j = static_cast<int>(first); j <= J; ++j) {
      const auto& t = tables[j];
      auto it = std::lower_bound(t.begin(), t.end(), std::make_pair(target, std::int64_t{INT64_MIN}));
      std::size_t idx = static_cast<std::size_t>(it - t.begin());
      for (std::size_t k : {idx % t.size(), (idx + t.size() - 1) % t.size()}) {
        Slot c;
        c.d = circle_dist(acc + t[k].first);
        c.err = sumabs + static_cast<std::uint64_t>(std::abs(t[k].second));
        c.q = p;
        c.q[n - 1] = t[k].second;
        c.used = true;
        if (c.d <= c.err && ex.residual(c.q) == 0) c.d = c.err = 0;
        offer(c, j);
      }
    }
  };
  // Prefixes over the first n-1 coordinates, first nonzero entry positive.
  auto rec = [&](auto&& self, int i, u128 acc, std::uint64_t h, std::uint64_t sumabs, bool seen) -> void {
    if (i == n - 1) {
      if (seen) query(acc, h, sumabs);
      return;
    }
    for (std::int64_t m = seen ? -s : 0; m <= s; ++m) {
      p[i] = m;
      auto a = static_cast<std::uint64_t>(std::abs(m));
      self(self, i + 1, acc + times(m, u[i]), std::max(h, a), sumabs + a, seen || m != 0);
    }
    p[i] = 0;
  };
  rec(rec, 0, 0, 0, 0, false);

  std::vector<ApproxRecord> out;
  const Slot* cur = nullptr;
  for (const Slot& b : best) {
    if (!b.used) continue;
    if (cur == nullptr || strictly_below(b, *cur, ex)) {
      out.push_back(ex.record(b.q));
      cur = &b;
    }
  }
  return out;
}

std::set<unsigned> allowed_masks(int n, const SearchOptions& o) {
  std::set<unsigned> m;
  if (o.supports.empty()) {
    for (unsigned s = 1; s < (1u << n); ++s) m.insert(s);
  } else {
    for (unsigned s : o.supports) {
      if (s == 0 || s >= (1u << n)) throw DomainError("support mask out of range");
      m.insert(s);
    }
  }
  return m;
}

// Fronts under a total order: sort by (height, residual, q), keep strict decreases.
std::vector<ApproxRecord> reduce_front(std::vector<ApproxRecord> v, bool by_sup) {
  std::sort(v.begin(), v.end(), [by_sup](const ApproxRecord& a, const ApproxRecord& b) {
    const BigInt& ha = by_sup ? a.sup_h : a.mult_h;
    const BigInt& hb = by_sup ? b.sup_h : b.mult_h;
    if (ha != hb) return ha < hb;
    if (a.residual != b.residual) return a.residual < b.residual;
    return a.q.entries() < b.q.entries();
  });
  std::vector<ApproxRecord> out;
  for (auto& r : v)
    if (out.empty() || r.residual < out.back().residual) out.push_back(std::move(r));
  return out;
}

}  // namespace

std::uint64_t default_budget() {
  if (const char* env = std::getenv("DIOPH_LAB_BUDGET")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v >= 1) return static_cast<std::uint64_t>(v);
  }
  return 1'000'000'000;
}

BigInt divisor_count(int k, std::uint64_t h) {
  if (k < 1) throw DomainError("tuple length must be positive");
  return BigInt(std::to_string(count_tuples(k, h)));
}

std::uint64_t search_cost(int n, const SearchOptions& o) {
  double cost = 0;
  for (unsigned m : allowed_masks(n, o)) {
    int k = std::popcount(m);
    cost += std::ldexp(static_cast<double>(count_tuples(k, o.height_cap)), k - 1);
  }
  if (std::uint64_t S = sup_box_cap(n, o)) {
    double prefixes = 1;
    for (int i = 0; i < n - 1; ++i) prefixes *= static_cast<double>(2 * S + 1);
    cost += prefixes / 2 * static_cast<double>(checkpoints(S).size()) + static_cast<double>(S);
  }
  return cost >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(cost);
}

std::vector<ApproxRecord> RecordSet::class_records(int k) const {
  std::vector<ApproxRecord> all;
  for (const auto& [mask, recs] : by_support)
    if (std::popcount(mask) == k) all.insert(all.end(), recs.begin(), recs.end());
  return reduce_front(std::move(all), false);
}

RecordSet RecordSet::merge(const RecordSet& a, const RecordSet& b) {
  if (a.n != b.n) throw DomainError("merging record sets of different dimension");
  RecordSet r;
  r.n = a.n;
  r.height_reached = std::max(a.height_reached, b.height_reached);
  r.sup_height_reached = std::max(a.sup_height_reached, b.sup_height_reached);
  r.exact_dependence = a.exact_dependence || b.exact_dependence;
  std::set<unsigned> masks;
  for (const auto* s : {&a, &b})
    for (const auto& kv : s->by_support) masks.insert(kv.first);
  for (unsigned m : masks) {
    std::vector<ApproxRecord> all;
    for (const auto* s : {&a, &b})
      if (auto it = s->by_support.find(m); it != s->by_support.end())
        all.insert(all.end(), it->second.begin(), it->second.end());
    r.by_support[m] = reduce_front(std::move(all), false);
  }
  std::vector<ApproxRecord> sup = a.sup_records;
  sup.insert(sup.end(), b.sup_records.begin(), b.sup_records.end());
  r.sup_records = reduce_front(std::move(sup), true);
  return r;
}

RecordSet search_records(const std::vector<ExactReal>& y, std::uint64_t height_cap) {
  SearchOptions o;
  o.height_cap = height_cap;
  return search_records(y, o);
}

RecordSet search_records(const std::vector<ExactReal>& y, const SearchOptions& opts) {
  const int n = static_cast<int>(y.size());
  if (n < 1) throw DomainError("empty point");
  if (n > kMaxDim) throw Unsupported("record search supports dimension at most 6");
  if (opts.height_cap < 2) throw DomainError("height cap must be at least 2");
  if (opts.height_cap > (std::uint64_t{1} << 40)) throw DomainError("height cap too large for 64-bit enumeration");
  if (auto g = min_guard(y); g && BigInt(std::to_string(opts.height_cap)) > *g)
    throw DomainError("height cap exceeds the guard height of a coordinate");
  std::uint64_t cost = search_cost(n, opts);
  if (cost > opts.budget)
    throw ResourceLimit("search needs about " + std::to_string(cost) + " evaluations, budget is " +
                        std::to_string(opts.budget));

  std::vector<u128> u(n);
  for (int i = 0; i < n; ++i) u[i] = frac_fixed(y[i].value());
  const Exact ex(y);
  const std::set<unsigned> allowed = allowed_masks(n, opts);
  const std::uint64_t H = opts.height_cap;

  auto fresh_table = [&] {
    Table t(1u << n);
    for (unsigned m : allowed) t[m].resize(H + 1);
    return t;
  };

  unsigned W = n > 1 ? std::max(1u, opts.workers) : 1u;
  std::vector<Table> tables;
  std::vector<char> dep(W, 0);
  tables.reserve(W);
  for (unsigned w = 0; w < W; ++w) tables.push_back(fresh_table());
  if (W == 1) {
    bool d = false;
    Enumerator(n, H, u, allowed, tables[0], ex, d).run(0, 1);
    dep[0] = d;
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < W; ++w)
      threads.emplace_back([&, w] {
        bool d = false;
        Enumerator(n, H, u, allowed, tables[w], ex, d).run(w, W);
        dep[w] = d;
      });
    for (auto& t : threads) t.join();
    for (unsigned w = 1; w < W; ++w)
      for (unsigned m : allowed)
        for (std::uint64_t h = 0; h <= H; ++h)
          if (tables[w][m][h].used && better(tables[w][m][h], tables[0][m][h], ex)) tables[0][m][h] = tables[w][m][h];
  }

  RecordSet rs;
  rs.n = n;
  rs.height_reached = H;
  rs.exact_dependence = std::any_of(dep.begin(), dep.end(), [](char c) { return c != 0; });
  for (unsigned m : allowed) rs.by_support[m] = front_from_cells(tables[0][m], ex);
  tables.clear();

  if (n == 1) {
    rs.sup_records = rs.by_support[1];
    rs.sup_height_reached = H;
  } else if (std::uint64_t S = sup_box_cap(n, opts)) {
    rs.sup_records = sup_envelope(n, S, u, ex);
    rs.sup_height_reached = S;
    for (const auto& r : rs.sup_records)
      if (r.residual == 0) rs.exact_dependence = true;
  }
  return rs;
}

}  // namespace dioph
