#include "fpp/detour.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "fpp/error.hpp"

namespace fpp {

std::string to_string(DetourRegime r) {
  switch (r) {
    case DetourRegime::Long:
      return "Long";
    case DetourRegime::Short:
      return "Short";
    case DetourRegime::Degenerate:
      return "Degenerate";
  }
  return "?";
}

DetourRegime select_regime(const Vertex& a, const Vertex& b, int n, const Rational& delta1,
                           const std::optional<Rational>& f_plus) {
  const int dist = l1_distance(a, b);
  if (!f_plus) return dist >= 1 ? DetourRegime::Short : DetourRegime::Degenerate;
  if (*f_plus == 0) throw Error(ErrorKind::ValidationError, "F+ = 0 leaves the regime threshold undefined");
  Rational threshold = delta1 * n / (2 * *f_plus) + 1;
  return Rational(dist) >= threshold ? DetourRegime::Long : DetourRegime::Degenerate;
}

namespace {

std::int64_t pow_i(std::int64_t x, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r = checked_mul(r, x);
  return r;
}

// Largest k >= 0 with k^p <= v (strict: k^p < v).
std::int64_t largest_root(std::int64_t v, int p, bool strict) {
  std::int64_t k = floor_root(v, p);
  if (strict && pow_i(k, p) == v) --k;
  return std::max<std::int64_t>(k, 0);
}

// Smallest k >= 0 with k^p >= v.
std::int64_t smallest_root(std::int64_t v, int p) {
  std::int64_t k = floor_root(v, p);
  return pow_i(k, p) == v ? k : k + 1;
}

// Axis on which an outer-boundary vertex lies outside the region, and the inward sign.
std::pair<int, int> inward_step(const Region& r, const Vertex& v) {
  for (int i = 0; i < r.dim(); ++i) {
    if (v[i] < r.lo()[i]) return {i, 1};
    if (v[i] > r.hi()[i]) return {i, -1};
  }
  throw Error(ErrorKind::ValidationError, to_string(v) + " is not outside " + to_string(r));
}

void require_boundary_pair(const Region& r, const Vertex& a, const Vertex& b) {
  if (a.dim() != r.dim() || b.dim() != r.dim()) throw Error(ErrorKind::ValidationError, "dimension mismatch");
  if (!r.on_outer_boundary(a) || !r.on_outer_boundary(b)) {
    throw Error(ErrorKind::ValidationError, "endpoints must lie on the outer boundary of " + to_string(r));
  }
  if (a == b) throw Error(ErrorKind::ValidationError, "endpoints must differ");
}

// Monotone run-sequence search for the long regime. Every coordinate moves in
// the direction of b - a only, so conditions (1), (2), (4) and (5) hold by
// construction; run lengths enforce (3) and (7); the depth constraint enforces (6).
class LongSearch {
 public:
  LongSearch(const Vertex& a, const Vertex& b, const Region& box, const DetourThresholds& th)
      : a_(a), b_(b), box_(box), th_(th), d_(a.dim()) {
    L_ = l1_distance(a, b);
    min_interior_ = std::max<std::int64_t>(5, th.turn_window / 2 + 1);
    std::tie(entry_axis_, std::ignore) = inward_step(box, a);
    std::tie(exit_axis_, std::ignore) = inward_step(box, b);
    for (int i = 0; i < d_; ++i) {
      dir_[static_cast<std::size_t>(i)] = b[i] > a[i] ? 1 : (b[i] < a[i] ? -1 : 0);
      target_[static_cast<std::size_t>(i)] = std::abs(b[i] - a[i]);
    }
  }

  std::optional<LatticePath> run() {
    const auto [ea, es] = inward_step(box_, a_);
    const auto [xa, xs] = inward_step(box_, b_);
    // The first step enters B and the last leaves it, both in the direction of b - a.
    if (dir_[static_cast<std::size_t>(ea)] != es || dir_[static_cast<std::size_t>(xa)] != -xs) return std::nullopt;
    std::array<int, kMaxDim> consumed{};
    runs_.clear();
    if (!dfs(a_, 0, -1, consumed)) return std::nullopt;
    std::vector<Vertex> v{a_};
    for (auto [axis, len] : runs_) {
      for (int k = 0; k < len; ++k) v.push_back(v.back() + Vertex::unit(d_, axis, dir_[static_cast<std::size_t>(axis)]));
    }
    return LatticePath(std::move(v));
  }

 private:
  bool deep_required(std::int64_t idx) const { return idx >= th_.deep_index && L_ - idx >= th_.deep_index; }

  std::string key(const std::array<int, kMaxDim>& consumed, int last) const {
    std::string k(reinterpret_cast<const char*>(consumed.data()), sizeof(int) * static_cast<std::size_t>(d_));
    k.push_back(static_cast<char>(last + 1));
    return k;
  }

  bool dfs(const Vertex& cur, std::int64_t idx, int last, std::array<int, kMaxDim>& consumed) {
    std::string k = key(consumed, last);
    if (failed_.count(k)) return false;
    for (int axis = 0; axis < d_; ++axis) {
      if (axis == last) continue;
      if (last < 0 && axis != entry_axis_) continue;
      const std::size_t ax = static_cast<std::size_t>(axis);
      const int remaining = target_[ax] - consumed[ax];
      if (remaining <= 0) continue;
      const Vertex step = Vertex::unit(d_, axis, dir_[ax]);
      // Longest prefix of this run whose vertices are admissible.
      int max_len = 0;
      bool reaches_end = false;
      Vertex v = cur;
      for (int len = 1; len <= std::min<std::int64_t>(remaining, th_.run_max); ++len) {
        v += step;
        const std::int64_t at = idx + len;
        if (at == L_) {
          reaches_end = v == b_ && axis == exit_axis_;
          if (reaches_end) max_len = len;
          break;
        }
        if (!box_.contains(v)) break;
        if (deep_required(at) && box_.depth(v) < th_.deep_depth) break;
        max_len = len;
      }
      if (reaches_end) {
        runs_.emplace_back(axis, max_len);
        return true;
      }
      const std::int64_t min_len = last < 0 ? 1 : min_interior_;
      for (int len = max_len; len >= min_len; --len) {
        consumed[ax] += len;
        runs_.emplace_back(axis, len);
        if (dfs(cur + step * len, idx + len, axis, consumed)) return true;
        runs_.pop_back();
        consumed[ax] -= len;
      }
    }
    failed_.insert(std::move(k));
    return false;
  }

  Vertex a_, b_;
  Region box_;
  DetourThresholds th_;
  int d_;
  std::int64_t L_ = 0;
  std::int64_t min_interior_ = 5;
  int entry_axis_ = 0, exit_axis_ = 0;
  std::array<int, kMaxDim> dir_{};
  std::array<int, kMaxDim> target_{};
  std::vector<std::pair<int, int>> runs_;
  std::unordered_set<std::string> failed_;
};

// Monotone leg from u to v moving through the axes in the given order.
void append_leg(std::vector<Vertex>& out, const Vertex& u, const Vertex& v, const std::vector<int>& order) {
  Vertex cur = u;
  for (int axis : order) {
    const int delta = v[axis] - cur[axis];
    const int s = delta > 0 ? 1 : -1;
    for (int k = 0; k < std::abs(delta); ++k) {
      cur += Vertex::unit(u.dim(), axis, s);
      out.push_back(cur);
    }
  }
}

LatticePath construct_short(const Vertex& a, const Vertex& b, const NBox& B, int n) {
  const Region box = B.region();
  const auto [ea, es] = inward_step(box, a);
  const auto [eb, bs] = inward_step(box, b);
  const Vertex a1 = a + Vertex::unit(a.dim(), ea, es);
  const Vertex b1 = b + Vertex::unit(b.dim(), eb, bs);
  const int d = a.dim();
  std::vector<std::vector<int>> orders;
  for (int r = 0; r < d; ++r) {
    std::vector<int> o(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) o[static_cast<std::size_t>(i)] = (r + i) % d;
    orders.push_back(o);
    std::reverse(o.begin(), o.end());
    orders.push_back(o);
  }
  std::vector<std::pair<int, Vertex>> pivots;
  for (std::int64_t i = 0; i < box.size(); ++i) {
    Vertex c = box.vertex(i);
    if (box.depth(c) >= 2) pivots.emplace_back(l1_distance(a1, c) + l1_distance(c, b1), c);
  }
  std::sort(pivots.begin(), pivots.end());
  for (const auto& [cost, c] : pivots) {
    // Pivots are sorted by detour length; once over the length bound nothing later fits.
    const std::int64_t excess = 2 + cost - l1_distance(a, b);
    if (excess > 0 && excess * excess > 16LL * d * d * n) break;
    for (const auto& o1 : orders) {
      for (const auto& o2 : orders) {
        std::vector<Vertex> v{a, a1};
        append_leg(v, a1, c, o1);
        append_leg(v, c, b1, o2);
        v.push_back(b);
        LatticePath p(std::move(v));
        if (!p.self_avoiding()) continue;
        if (check_short_conditions(p, a, b, B, n).all_pass()) return p;
      }
    }
  }
  throw Error(ErrorKind::InfeasibleGeometry, "no short-regime path from " + to_string(a) + " to " + to_string(b) +
                                                 " in " + to_string(B));
}

// Lexicographically smallest shortest path through B and its outer boundary.
LatticePath construct_degenerate(const Vertex& a, const Vertex& b, const NBox& B) {
  const Region box = B.region();
  const Region shell = box.expanded(1);
  auto allowed = [&](const Vertex& v) { return box.contains(v) || box.on_outer_boundary(v); };
  std::vector<int> dist(static_cast<std::size_t>(shell.size()), -1);
  std::deque<Vertex> q{b};
  dist[static_cast<std::size_t>(shell.index(b))] = 0;
  const int d = a.dim();
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (int axis = 0; axis < d; ++axis) {
      for (int s : {-1, 1}) {
        Vertex w = u + Vertex::unit(d, axis, s);
        if (!shell.contains(w) || !allowed(w)) continue;
        int& dw = dist[static_cast<std::size_t>(shell.index(w))];
        if (dw >= 0) continue;
        dw = dist[static_cast<std::size_t>(shell.index(u))] + 1;
        q.push_back(w);
      }
    }
  }
  if (dist[static_cast<std::size_t>(shell.index(a))] < 0) {
    throw Error(ErrorKind::InfeasibleGeometry, "endpoints not connected through the box");
  }
  std::vector<Vertex> v{a};
  while (!(v.back() == b)) {
    const Vertex u = v.back();
    const int du = dist[static_cast<std::size_t>(shell.index(u))];
    std::optional<Vertex> best;
    for (int axis = 0; axis < d; ++axis) {
      for (int s : {-1, 1}) {
        Vertex w = u + Vertex::unit(d, axis, s);
        if (!shell.contains(w) || !allowed(w)) continue;
        if (dist[static_cast<std::size_t>(shell.index(w))] != du - 1) continue;
        if (!best || w < *best) best = w;
      }
    }
    v.push_back(*best);
  }
  return LatticePath(std::move(v));
}

ConditionResult structural(const LatticePath& p, const Vertex& a, const Vertex& b, const Region& box) {
  ConditionResult r{0, false, false, ""};
  if (p.empty() || !(p.front() == a) || !(p.back() == b)) {
    r.witness = "endpoints differ from " + to_string(a) + ", " + to_string(b);
    return r;
  }
  if (!p.self_avoiding()) {
    r.witness = "path revisits a vertex";
    return r;
  }
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (!box.contains(p[i])) {
      r.witness = "x_" + std::to_string(i) + "=" + to_string(p[i]) + " outside the box";
      return r;
    }
  }
  r.pass = true;
  return r;
}

std::string index_pair(std::size_t i, std::size_t j) {
  return "i=" + std::to_string(i) + " j=" + std::to_string(j);
}

}  // namespace

DetourThresholds detour_thresholds(int d, int n) {
  DetourThresholds th;
  th.d = d;
  th.n = n;
  const std::int64_t d3 = pow_i(d, 3);
  th.local_window = largest_root(checked_mul(1728 * d3, n), 3, false);
  th.run_max = largest_root(9LL * n, 2, true);
  th.turn_window = largest_root(n / 2, 2, false);  // 2k^2 <= n  <=>  k^2 <= floor(n/2)
  th.deep_index = smallest_root(checked_mul(4LL * d * d, n), 2);
  th.deep_depth = smallest_root(checked_mul(64 * d3, n), 3);
  return th;
}

bool DetourReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.pass || c.flagged; });
}

const ConditionResult* DetourReport::first_failure() const {
  for (const auto& c : conditions) {
    if (!c.pass && !c.flagged) return &c;
  }
  return nullptr;
}

LatticePath construct_detour_path(const Vertex& a, const Vertex& b, const NBox& B, int n, DetourRegime regime) {
  const Region box = B.region();
  require_boundary_pair(box, a, b);
  switch (regime) {
    case DetourRegime::Degenerate:
      return construct_degenerate(a, b, B);
    case DetourRegime::Short:
      return construct_short(a, b, B, n);
    case DetourRegime::Long:
      break;
  }
  LongSearch search(a, b, box, detour_thresholds(a.dim(), n));
  if (auto p = search.run()) return *p;
  throw Error(ErrorKind::InfeasibleGeometry, "no long-regime path from " + to_string(a) + " to " + to_string(b) +
                                                 " in " + to_string(B) + " at n=" + std::to_string(n));
}

DetourReport check_detour_conditions(const LatticePath& p, const Vertex& a, const Vertex& b, const NBox& B, int n,
                                     const Rational& delta1, const std::optional<Rational>& f_plus) {
  const Region box = B.region();
  const int d = box.dim();
  const DetourThresholds th = detour_thresholds(d, n);
  DetourReport rep;
  rep.conditions.push_back(structural(p, a, b, box));
  const std::size_t L = p.length();
  auto dist = [&](std::size_t i, std::size_t j) { return static_cast<std::int64_t>(l1_distance(p[i], p[j])); };

  ConditionResult c1{1, true, false, ""};
  for (std::size_t i = 0; i <= L && c1.pass; ++i) {
    for (std::size_t j = i + 1; j <= L && static_cast<std::int64_t>(j - i) <= th.local_window; ++j) {
      if (dist(i, j) != static_cast<std::int64_t>(j - i)) {
        c1.pass = false;
        c1.witness = index_pair(i, j) + ": |x_i-x_j|_1=" + std::to_string(dist(i, j));
        break;
      }
    }
  }
  rep.conditions.push_back(c1);

  // D <= C sqrt(m) with C = 800 d (1 + s^{-1/2}), s = delta1 / (2 F+), tested exactly:
  // A = D/(800d) <= sqrt(m) + sqrt(m/s).
  ConditionResult c2{2, true, false, ""};
  if (f_plus && delta1 > 0) {
    const Rational s = delta1 / (2 * *f_plus);
    for (std::size_t i = 0; i <= L && c2.pass; ++i) {
      for (std::size_t j = i + 1; j <= L; ++j) {
        const std::int64_t m = static_cast<std::int64_t>(j - i);
        const std::int64_t defect = m - dist(i, j);
        if (defect <= 0) continue;
        const Rational A(defect, 800LL * d);
        const Rational A2 = A * A;
        if (A2 <= m) continue;
        const Rational lhs = A2 + m - m / s;
        if (lhs <= 0 || lhs * lhs <= 4 * A2 * m) continue;
        c2.pass = false;
        c2.flagged = true;
        c2.witness = index_pair(i, j) + ": defect " + std::to_string(defect) + " exceeds C sqrt|i-j|";
        break;
      }
    }
  }
  rep.conditions.push_back(c2);

  std::vector<std::size_t> turns;
  for (std::size_t i = 1; i < L; ++i) {
    if (is_turn(p, i)) turns.push_back(i);
  }

  ConditionResult c3{3, true, false, ""};
  {
    std::vector<std::size_t> marks{0};
    marks.insert(marks.end(), turns.begin(), turns.end());
    marks.push_back(L);
    for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
      const std::int64_t gap = static_cast<std::int64_t>(marks[k + 1] - marks[k]);
      if (gap * gap >= 9LL * n) {
        c3.pass = false;
        c3.witness = index_pair(marks[k], marks[k + 1]) + ": no turn strictly between";
        break;
      }
    }
  }
  rep.conditions.push_back(c3);

  ConditionResult c4{4, true, false, ""};
  for (std::size_t x = 0; x < turns.size() && c4.pass; ++x) {
    for (std::size_t y = x + 1; y < turns.size(); ++y) {
      if (dist(turns[x], turns[y]) <= 4) {
        c4.pass = false;
        c4.witness = "turns at " + index_pair(turns[x], turns[y]) + " within L1 distance 4";
        break;
      }
    }
  }
  rep.conditions.push_back(c4);

  ConditionResult c5{5, true, false, ""};
  {
    const std::int64_t excess = static_cast<std::int64_t>(L) - l1_distance(a, b);
    if (excess > 0 && excess * excess > 10000LL * d * d * n) {
      c5.pass = false;
      c5.witness = "length " + std::to_string(L) + " exceeds |a-b|_1 + 100 d sqrt n";
    }
  }
  rep.conditions.push_back(c5);

  ConditionResult c6{6, true, false, ""};
  for (std::size_t i = 0; i <= L; ++i) {
    const std::int64_t ii = static_cast<std::int64_t>(i), rest = static_cast<std::int64_t>(L - i);
    if (ii < th.deep_index || rest < th.deep_index) continue;
    if (box.depth(p[i]) < th.deep_depth) {
      c6.pass = false;
      c6.witness = "x_" + std::to_string(i) + "=" + to_string(p[i]) + " at depth " +
                   std::to_string(box.depth(p[i])) + " < " + std::to_string(th.deep_depth);
      break;
    }
  }
  rep.conditions.push_back(c6);

  ConditionResult c7{7, true, false, ""};
  for (std::size_t k = 0; k + 2 < turns.size(); ++k) {
    const std::int64_t span = static_cast<std::int64_t>(turns[k + 2] - turns[k]);
    if (2 * span * span <= n) {
      c7.pass = false;
      c7.witness = "three turns in " + index_pair(turns[k], turns[k + 2]);
      break;
    }
  }
  rep.conditions.push_back(c7);
  return rep;
}

DetourReport check_short_conditions(const LatticePath& p, const Vertex& a, const Vertex& b, const NBox& B, int n) {
  const Region box = B.region();
  const int d = box.dim();
  DetourReport rep;
  rep.conditions.push_back(structural(p, a, b, box));
  ConditionResult c1{1, false, false, "no turn at depth >= 2"};
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (is_turn(p, i) && box.depth(p[i]) >= 2) {
      c1.pass = true;
      c1.witness.clear();
      break;
    }
  }
  rep.conditions.push_back(c1);
  ConditionResult c2{2, true, false, ""};
  const std::int64_t excess = static_cast<std::int64_t>(p.length()) - l1_distance(a, b);
  if (excess > 0 && excess * excess > 16LL * d * d * n) {
    c2.pass = false;
    c2.witness = "length " + std::to_string(p.length()) + " exceeds |a-b|_1 + 4 d sqrt n";
  }
  rep.conditions.push_back(c2);
  return rep;
}

}  // namespace fpp
