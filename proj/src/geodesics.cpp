#include "fpp/geodesics.hpp"

#include <algorithm>
#include <cmath>

#include "fpp/error.hpp"

namespace fpp {

namespace bmp = boost::multiprecision;

namespace {

// Margins above this use the escape bound instead (unless 2|v-w|_1 is larger).
constexpr std::int64_t kMarginCap = 32;
constexpr std::int64_t kEscapeCap = 1024;

void require_in_box(const Environment& env, const Vertex& v) {
  if (v.dim() != env.dim() || !env.box().contains(v)) {
    throw Error(ErrorKind::EdgeOutOfBox, to_string(v) + " outside " + to_string(env.box()));
  }
}

// Per-unit-length lower bound on passage time, in ticks.
std::int64_t unit_lower_bound(const Environment& env, const Grid& grid) {
  if (env.has_lowering_override()) return grid.min_ticks();
  return *env.to_ticks(Weight(env.spec().f_minus()));
}

std::int64_t l1_to(const Grid& grid, std::int64_t i, const Vertex& w) {
  std::int64_t s = 0;
  for (int a = 0; a < grid.dim(); ++a) s += std::abs(grid.coord(i, a) - w[a]);
  return s;
}

Edge grid_edge(const Grid& grid, std::int64_t a, std::int64_t b) { return Edge(grid.vertex(a), grid.vertex(b)); }

bool margin_certifies(const Environment& env, const Vertex& v, const Vertex& w, const Weight& bound) {
  const Rational fm = env.spec().f_minus();
  if (fm == 0 || env.has_lowering_override() || bound.is_blocked()) return false;
  const std::int64_t m = margin_for_bound(fm, l1_distance(v, w), bound.value());
  return env.box().contains(Region::bounding(v, w).expanded(static_cast<int>(m)));
}

// A path leaving the box first exits from a face vertex and last re-enters at
// one, and its prefix and suffix inside the box are disjoint, so it costs at
// least d(v, faces) + d(faces, w) measured inside the box. Weights outside the
// box only add to that.
Rational escape_lower_bound(const Environment& env, const Vertex& v, const Vertex& w) {
  const Grid grid(env);
  const auto dv = grid.dijkstra(grid.index(v));
  const auto dw = grid.dijkstra(grid.index(w));
  std::int64_t bv = Grid::kUnreached, bw = Grid::kUnreached;
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    if (env.box().depth(grid.vertex(i)) != 1) continue;
    bv = std::min(bv, dv[static_cast<std::size_t>(i)]);
    bw = std::min(bw, dw[static_cast<std::size_t>(i)]);
  }
  if (bv == Grid::kUnreached || bw == Grid::kUnreached) return Rational(-1);  // no escape at all
  return Rational(bv) / env.scale() + Rational(bw) / env.scale();
}

// Every path leaving the box is strictly slower than `value`. Only offered for
// laws with F- > 0; the F- = 0 regime stays Restricted.
bool escape_certifies(const Environment& env, const Vertex& v, const Vertex& w, const Rational& value) {
  if (env.spec().f_minus() == 0) return false;
  const Rational b = escape_lower_bound(env, v, w);
  return b < 0 || b > value;
}

}  // namespace

LatticePath straight_path(const Vertex& v, const Vertex& w) {
  std::vector<Vertex> out{v};
  Vertex cur = v;
  for (int a = 0; a < v.dim(); ++a) {
    const int s = w[a] > cur[a] ? 1 : -1;
    while (cur[a] != w[a]) {
      cur += Vertex::unit(v.dim(), a, s);
      out.push_back(cur);
    }
  }
  return LatticePath(std::move(out));
}

Weight straight_path_time(const Environment& env, const Vertex& v, const Vertex& w) {
  return passage_time(env, straight_path(v, w));
}

std::int64_t margin_for_bound(const Rational& fminus, std::int64_t dist, const Rational& bound) {
  if (fminus <= 0) throw Error(ErrorKind::NoCertificate, "F- = 0 gives no margin certificate");
  const Rational r = bound / fminus - dist;
  if (r <= 0) return 0;
  const Rational half = r / 2;
  BigInt q = bmp::numerator(half) / bmp::denominator(half);
  if (Rational(q) < half) q += 1;
  return to_int64(q);
}

std::int64_t compute_safe_margin(const DistributionSpec& spec, const Vertex& v, const Vertex& w,
                                 const Environment& env) {
  const Rational fm = spec.f_minus();
  if (fm == 0) throw Error(ErrorKind::NoCertificate, "F- = 0 gives no margin certificate");
  if (env.has_lowering_override()) throw Error(ErrorKind::NoCertificate, "an override lowers a weight below F-");
  const Weight u = straight_path_time(env, v, w);
  if (u.is_blocked()) throw Error(ErrorKind::NoCertificate, "straight path is blocked");
  return margin_for_bound(fm, l1_distance(v, w), u.value());
}

FptResult first_passage_time(const Environment& env, const Vertex& v, const Vertex& w) {
  require_in_box(env, v);
  require_in_box(env, w);
  Grid grid(env);
  const std::int64_t src = grid.index(v), dst = grid.index(w);
  std::vector<std::int64_t> rank;
  const std::vector<std::int64_t> dist = grid.dijkstra(src, &rank);
  if (dist[static_cast<std::size_t>(dst)] == Grid::kUnreached) {
    throw Error(ErrorKind::Disconnected, to_string(w) + " unreachable from " + to_string(v));
  }
  std::vector<Vertex> rev{w};
  std::int64_t x = dst;
  while (x != src) {
    std::int64_t best = -1;
    grid.for_each_neighbor(x, [&](std::int64_t u, std::int64_t t, int, int) {
      const auto uu = static_cast<std::size_t>(u);
      if (dist[uu] == Grid::kUnreached || rank[uu] >= rank[static_cast<std::size_t>(x)]) return;
      if (dist[uu] + t != dist[static_cast<std::size_t>(x)]) return;
      if (best < 0 || u < best) best = u;
    });
    x = best;
    rev.push_back(grid.vertex(x));
  }
  FptResult r;
  r.value = env.from_ticks(dist[static_cast<std::size_t>(dst)]);
  r.one_geodesic = LatticePath(std::vector<Vertex>(rev.rbegin(), rev.rend()));
  r.certified_box = env.box();
  try {
    r.certified = margin_certifies(env, v, w, straight_path_time(env, v, w)) ||
                  escape_certifies(env, v, w, r.value.value());
  } catch (const Error&) {
    r.certified = false;
  }
  return r;
}

CertifiedEnvironment sample_certified(std::shared_ptr<const DistributionSpec> spec, const Vertex& v,
                                      const Vertex& w, std::uint64_t seed, const std::optional<Region>& cover) {
  auto with_cover = [&](const Region& r) { return cover ? Region::hull(r, *cover) : r; };
  const Region base = Region::bounding(v, w);
  CertifiedEnvironment out;
  if (spec->f_minus() > 0) {
    Environment probe = sample_environment(spec, with_cover(base), seed);
    const std::int64_t m = compute_safe_margin(*spec, v, w, probe);
    const std::int64_t dist = l1_distance(v, w);
    if (m <= std::max<std::int64_t>(kMarginCap, 2 * dist)) {
      out.env = sample_environment(spec, with_cover(base.expanded(static_cast<int>(m))), seed);
      out.margin = m;
      out.certified = true;
      return out;
    }
    // Tiny F- makes the margin useless; grow the box until the escape bound certifies it.
    for (std::int64_t g = 2;; g *= 2) {
      Environment env = sample_environment(spec, with_cover(base.expanded(static_cast<int>(g))), seed);
      const Weight t = first_passage_time(env, v, w).value;
      const bool ok = escape_certifies(env, v, w, t.value());
      if (ok || g >= m || g >= kEscapeCap) {
        out.env = std::move(env);
        out.margin = g;
        out.certified = ok || g >= m;
        return out;
      }
    }
  }
  // No certificate exists; widen until the value repeats.
  std::int64_t m = 1;
  std::optional<Weight> prev;
  const std::int64_t limit = std::max<std::int64_t>(8, 4LL * l1_distance(v, w));
  for (;;) {
    Environment env = sample_environment(spec, with_cover(base.expanded(static_cast<int>(m))), seed);
    Weight t = first_passage_time(env, v, w).value;
    if ((prev && *prev == t) || m >= limit) {
      out.env = std::move(env);
      out.margin = m;
      return out;
    }
    prev = t;
    m *= 2;
  }
}

GeodesicSet enumerate_geodesics(const Environment& env, const Vertex& v, const Vertex& w,
                                const EnumerationLimits& limits) {
  require_in_box(env, v);
  require_in_box(env, w);
  if (limits.cap < 1) throw Error(ErrorKind::ValidationError, "enumeration cap must be >= 1");
  Grid grid(env);
  const std::int64_t src = grid.index(v), dst = grid.index(w);
  const std::vector<std::int64_t> dist = grid.dijkstra(src);
  const std::int64_t t = dist[static_cast<std::size_t>(dst)];
  if (t == Grid::kUnreached) throw Error(ErrorKind::Disconnected, to_string(w) + " unreachable from " + to_string(v));
  const std::int64_t lb = unit_lower_bound(env, grid);
  const int d = grid.dim();

  GeodesicSet out;
  std::uint64_t found = 0;
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(grid.size() * d), 0);
  std::vector<char> on(static_cast<std::size_t>(grid.size()), 0);
  std::vector<std::int64_t> stack{src};
  on[static_cast<std::size_t>(src)] = 1;
  bool stop = false;

  auto edge_slot = [&](std::int64_t a, std::int64_t b) {
    const std::int64_t lo = std::min(a, b), hi = std::max(a, b);
    for (int ax = 0; ax < d; ++ax) {
      if (lo + grid.region().stride(ax) == hi && grid.coord(lo, ax) + 1 == grid.coord(hi, ax)) {
        return static_cast<std::size_t>(lo * d + ax);
      }
    }
    return static_cast<std::size_t>(0);
  };

  auto record = [&]() {
    if (found == limits.cap) {
      out.saturated = true;
      stop = true;
      return;
    }
    ++found;
    for (std::size_t k = 1; k < stack.size(); ++k) ++hits[edge_slot(stack[k - 1], stack[k])];
    out.max_length = std::max(out.max_length, stack.size() - 1);
    if (out.sample_paths.size() < limits.sample_cap) {
      std::vector<Vertex> vs;
      vs.reserve(stack.size());
      for (std::int64_t i : stack) vs.push_back(grid.vertex(i));
      out.sample_paths.emplace_back(std::move(vs));
    }
  };

  auto dfs = [&](auto&& self, std::int64_t x, std::int64_t prefix) -> void {
    if (x == dst) {
      if (prefix == t) record();
      return;
    }
    grid.for_each_neighbor(x, [&](std::int64_t y, std::int64_t tk, int, int) {
      if (stop || on[static_cast<std::size_t>(y)]) return;
      const std::int64_t p = prefix + tk;
      if (p + lb * l1_to(grid, y, w) > t) return;
      on[static_cast<std::size_t>(y)] = 1;
      stack.push_back(y);
      self(self, y, p);
      stack.pop_back();
      on[static_cast<std::size_t>(y)] = 0;
    });
  };
  if (src == dst) {
    record();
  } else {
    dfs(dfs, src, 0);
  }

  out.count = found;
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    for (int ax = 0; ax < d; ++ax) {
      const std::uint64_t h = hits[static_cast<std::size_t>(i * d + ax)];
      if (h == 0) continue;
      Edge e(grid.vertex(i), grid.vertex(i + grid.region().stride(ax)));
      out.union_edges.insert(e);
      if (h == found) out.pivotal_edges.insert(e);
    }
  }
  return out;
}

GeodesicDag::GeodesicDag(const Environment& env, const Vertex& v, const Vertex& w) : grid_(env) {
  require_in_box(env, v);
  require_in_box(env, w);
  if (grid_.has_zero_weight()) {
    throw Error(ErrorKind::ZeroWeightPresent, "zero weights admit non-simple optimal walks; use enumeration");
  }
  src_ = grid_.index(v);
  dst_ = grid_.index(w);
  dv_ = grid_.dijkstra(src_);
  dw_ = grid_.dijkstra(dst_);
  t_ = dv_[static_cast<std::size_t>(dst_)];
  if (t_ == Grid::kUnreached) throw Error(ErrorKind::Disconnected, to_string(w) + " unreachable from " + to_string(v));
  for (std::int64_t i = 0; i < grid_.size(); ++i) {
    if (on_geodesic(i)) order_.push_back(i);
  }
  std::sort(order_.begin(), order_.end(), [&](std::int64_t a, std::int64_t b) {
    const auto da = dv_[static_cast<std::size_t>(a)], db = dv_[static_cast<std::size_t>(b)];
    return da != db ? da < db : a < b;
  });
  for (std::int64_t a : order_) {
    const std::int64_t da = dv_[static_cast<std::size_t>(a)];
    grid_.for_each_neighbor(a, [&](std::int64_t b, std::int64_t tk, int, int) {
      const std::int64_t db = dw_[static_cast<std::size_t>(b)];
      if (db != Grid::kUnreached && da + tk + db == t_) arcs_.emplace_back(a, b);
    });
  }
}

Weight GeodesicDag::value() const { return Weight(Rational(t_, grid_.scale())); }

bool GeodesicDag::on_geodesic(std::int64_t i) const {
  const auto a = dv_[static_cast<std::size_t>(i)], b = dw_[static_cast<std::size_t>(i)];
  return a != Grid::kUnreached && b != Grid::kUnreached && a + b == t_;
}

void GeodesicDag::through_counts(std::vector<BigInt>& fwd, std::vector<BigInt>& bwd) const {
  fwd.assign(static_cast<std::size_t>(grid_.size()), BigInt(0));
  bwd.assign(static_cast<std::size_t>(grid_.size()), BigInt(0));
  fwd[static_cast<std::size_t>(src_)] = 1;
  bwd[static_cast<std::size_t>(dst_)] = 1;
  for (const auto& [a, b] : arcs_) fwd[static_cast<std::size_t>(b)] += fwd[static_cast<std::size_t>(a)];
  for (auto it = arcs_.rbegin(); it != arcs_.rend(); ++it) {
    bwd[static_cast<std::size_t>(it->first)] += bwd[static_cast<std::size_t>(it->second)];
  }
}

BigInt GeodesicDag::count() const {
  std::vector<BigInt> fwd, bwd;
  through_counts(fwd, bwd);
  return fwd[static_cast<std::size_t>(dst_)];
}

std::set<Edge> GeodesicDag::union_edges() const {
  std::set<Edge> out;
  for (const auto& [a, b] : arcs_) out.insert(grid_edge(grid_, a, b));
  return out;
}

std::set<Edge> GeodesicDag::pivotal_edges() const {
  std::vector<BigInt> fwd, bwd;
  through_counts(fwd, bwd);
  const BigInt& total = fwd[static_cast<std::size_t>(dst_)];
  std::set<Edge> out;
  for (const auto& [a, b] : arcs_) {
    if (fwd[static_cast<std::size_t>(a)] * bwd[static_cast<std::size_t>(b)] == total) {
      out.insert(grid_edge(grid_, a, b));
    }
  }
  return out;
}

std::size_t GeodesicDag::longest_length() const {
  std::vector<std::int64_t> len(static_cast<std::size_t>(grid_.size()), -1);
  len[static_cast<std::size_t>(src_)] = 0;
  for (const auto& [a, b] : arcs_) {
    const auto la = len[static_cast<std::size_t>(a)];
    if (la >= 0) len[static_cast<std::size_t>(b)] = std::max(len[static_cast<std::size_t>(b)], la + 1);
  }
  return static_cast<std::size_t>(len[static_cast<std::size_t>(dst_)]);
}

double GeodesicDag::log2_count() const {
  const BigInt c = count();
  if (c <= 0) return 0.0;
  const std::size_t msb = bmp::msb(c);
  if (msb <= 60) return std::log2(c.convert_to<double>());
  const BigInt top = c >> (msb - 60);
  return std::log2(top.convert_to<double>()) + static_cast<double>(msb - 60);
}

bool GeodesicDag::crosses(const Region& region, int axis) const {
  auto inside = [&](std::int64_t i) {
    for (int a = 0; a < grid_.dim(); ++a) {
      const int c = grid_.coord(i, a);
      if (c < region.lo()[a] || c > region.hi()[a]) return false;
    }
    return true;
  };
  for (int from_lo = 0; from_lo < 2; ++from_lo) {
    const int start = from_lo ? region.lo()[axis] : region.hi()[axis];
    const int goal = from_lo ? region.hi()[axis] : region.lo()[axis];
    std::vector<char> reach(static_cast<std::size_t>(grid_.size()), 0);
    for (std::int64_t i : order_) {
      if (inside(i) && grid_.coord(i, axis) == start) reach[static_cast<std::size_t>(i)] = 1;
    }
    for (const auto& [a, b] : arcs_) {
      if (reach[static_cast<std::size_t>(a)] && inside(b)) reach[static_cast<std::size_t>(b)] = 1;
    }
    for (std::int64_t i : order_) {
      if (reach[static_cast<std::size_t>(i)] && grid_.coord(i, axis) == goal) return true;
    }
  }
  return false;
}

BigInt count_geodesics_dp(const Environment& env, const Vertex& v, const Vertex& w) {
  return GeodesicDag(env, v, w).count();
}

std::set<Edge> union_edges(const Environment& env, const Vertex& v, const Vertex& w) {
  return GeodesicDag(env, v, w).union_edges();
}

std::set<Edge> pivotal_edges(const Environment& env, const Vertex& v, const Vertex& w) {
  return GeodesicDag(env, v, w).pivotal_edges();
}

std::set<Edge> pivotal_edges_by_deletion(const Environment& env, const Vertex& v, const Vertex& w) {
  GeodesicDag dag(env, v, w);
  std::set<Edge> out;
  for (const Edge& e : dag.union_edges()) {
    Environment cut = apply_overrides(env, {{e, Weight::blocked()}});
    Grid g(cut);
    const std::int64_t t = g.dijkstra(g.index(v))[static_cast<std::size_t>(g.index(w))];
    // Blocking cannot change the scale, so ticks compare directly.
    if (t == Grid::kUnreached || t > dag.t_ticks()) out.insert(e);
  }
  return out;
}

AttachedResult attached_first_passage_time(const Environment& env, const Vertex& v, const Vertex& w,
                                           const AttachedParams& params, const AttachedLimits& limits) {
  require_in_box(env, v);
  require_in_box(env, w);
  if (params.beta < 0) throw Error(ErrorKind::ValidationError, "beta must be non-negative");
  Grid grid(env);
  const int d = grid.dim();
  const std::int64_t src = grid.index(v), dst = grid.index(w);
  const BigInt S = lcm(BigInt(env.scale()), bmp::denominator(params.beta));
  const std::int64_t f = to_int64(S / env.scale());
  const std::int64_t beta_ticks = to_int64(bmp::numerator(params.beta) * (S / bmp::denominator(params.beta)));
  const std::int64_t lb = checked_mul(unit_lower_bound(env, grid), f);

  std::vector<char> on(static_cast<std::size_t>(grid.size()), 0);
  std::vector<std::int64_t> stack{src};
  on[static_cast<std::size_t>(src)] = 1;

  auto env_ticks = [&](const Vertex& a, const Vertex& b) { return env.ticks(Edge(a, b)); };
  // G-turn count of the complete path on the stack.
  auto gturns = [&]() {
    std::int64_t g = 0;
    for (std::size_t i = 1; i + 1 < stack.size(); ++i) {
      const std::int64_t p = stack[i - 1], x = stack[i], q = stack[i + 1];
      Vertex vp = grid.vertex(p), vx = grid.vertex(x), vq = grid.vertex(q);
      if (*step_axis(vp, vx) == *step_axis(vx, vq)) continue;
      const Vertex r = vp + (vq - vx);
      if (grid.region().contains(r) && on[static_cast<std::size_t>(grid.index(r))]) continue;
      const std::int64_t h1 = env_ticks(vp, vx), h2 = env_ticks(vx, vq);
      const std::int64_t r1 = env_ticks(vp, r), r2 = env_ticks(r, vq);
      constexpr std::int64_t kB = Environment::kBlockedTicks;
      if (r1 == kB || r2 == kB) continue;
      if (h1 + h2 == r1 + r2) ++g;
    }
    return g;
  };

  AttachedResult out;
  // Seed the bound with the lexicographic geodesic.
  const FptResult fpt = first_passage_time(env, v, w);
  const Weight seed_plus = attached_path_time(env, fpt.one_geodesic, params);
  std::int64_t best = to_int64(bmp::numerator(seed_plus.value() * Rational(S)));
  std::vector<std::vector<std::int64_t>> opt;
  bool stop = false;

  auto dfs = [&](auto&& self, std::int64_t x, std::int64_t prefix) -> void {
    if (stop) return;
    if (++out.explored > limits.prefix_cap) {
      out.cap_exceeded = true;
      stop = true;
      return;
    }
    if (x == dst) {
      const std::int64_t val = prefix + beta_ticks * gturns();
      if (val < best) {
        best = val;
        opt.clear();
      }
      if (val == best && opt.size() < limits.optimizer_cap) opt.push_back(stack);
      return;
    }
    grid.for_each_neighbor(x, [&](std::int64_t y, std::int64_t tk, int, int) {
      if (stop || on[static_cast<std::size_t>(y)]) return;
      const std::int64_t p = prefix + tk * f;
      if (p + lb * l1_to(grid, y, w) > best) return;
      on[static_cast<std::size_t>(y)] = 1;
      stack.push_back(y);
      self(self, y, p);
      stack.pop_back();
      on[static_cast<std::size_t>(y)] = 0;
    });
  };
  dfs(dfs, src, 0);
  (void)d;

  out.value = Weight(Rational(best) / Rational(S));
  for (const auto& s : opt) {
    std::vector<Vertex> vs;
    for (std::int64_t i : s) vs.push_back(grid.vertex(i));
    out.optimizers.emplace_back(std::move(vs));
  }
  if (opt.empty()) out.optimizers.push_back(fpt.one_geodesic);
  try {
    out.certified = !out.cap_exceeded &&
                    (margin_certifies(env, v, w, attached_path_time(env, straight_path(v, w), params)) ||
                     escape_certifies(env, v, w, out.value.value()));
  } catch (const Error&) {
    out.certified = false;
  }
  return out;
}

std::vector<Edge> edges_meeting(const Environment& env, const Region& region) {
  std::vector<Edge> out;
  if (region.dim() != env.dim()) throw Error(ErrorKind::ValidationError, "dimension mismatch");
  const Region shell = region.expanded(1);
  for (std::int64_t i = 0; i < shell.size(); ++i) {
    const Vertex v = shell.vertex(i);
    for (int a = 0; a < env.dim(); ++a) {
      const Vertex u = v + Vertex::unit(env.dim(), a);
      if (!region.contains(v) && !region.contains(u)) continue;
      Edge e(v, u);
      if (env.covers(e)) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Environment resample_box(const Environment& env, const Environment& env_star, const NBox& B) {
  if (!(env.box() == env_star.box())) throw Error(ErrorKind::ValidationError, "environments must share a box");
  std::vector<std::pair<Edge, Weight>> pairs;
  for (const Edge& e : edges_meeting(env, B.region())) pairs.emplace_back(e, env_star.weight(e));
  return apply_overrides(env, pairs);
}

GammaBEdgeSets gamma_B_edge_sets(const Environment& env, const LatticePath& gamma, const NBox& B) {
  GammaBEdgeSets s;
  for (std::size_t i = 1; i + 1 < gamma.size(); ++i) {
    if (!is_turn(gamma, i)) continue;
    const Vertex r = reflect(gamma, i);
    s.turn_edges.insert(Edge(gamma[i - 1], gamma[i]));
    s.turn_edges.insert(Edge(gamma[i], gamma[i + 1]));
    s.turn_edges.insert(Edge(gamma[i - 1], r));
    s.turn_edges.insert(Edge(r, gamma[i + 1]));
  }
  for (const Edge& e : gamma.edges()) {
    if (!s.turn_edges.count(e)) s.path_edges.insert(e);
  }
  for (const Edge& e : edges_meeting(env, B.region())) {
    if (!s.turn_edges.count(e) && !s.path_edges.count(e)) s.other_edges.insert(e);
  }
  return s;
}

GammaBClauses gamma_B_clauses(const Environment& env_star, const LatticePath& gamma, const NBox& B,
                              const Rational& alpha, const Rational& M) {
  const DistributionSpec& spec = env_star.spec();
  const Weight lo(f_minus_m(spec, M)), hi(f_plus_m(spec, M)), a(alpha);
  const GammaBEdgeSets s = gamma_B_edge_sets(env_star, gamma, B);
  GammaBClauses c;
  c.turns_alpha = std::all_of(s.turn_edges.begin(), s.turn_edges.end(),
                              [&](const Edge& e) { return env_star.weight(e) == a; });
  c.path_low = std::all_of(s.path_edges.begin(), s.path_edges.end(),
                           [&](const Edge& e) { return env_star.weight(e) <= lo; });
  c.others_high = std::all_of(s.other_edges.begin(), s.other_edges.end(),
                              [&](const Edge& e) { return env_star.weight(e) >= hi; });
  return c;
}

bool gamma_B_condition(const Environment& env_star, const LatticePath& gamma, const NBox& B, const Rational& alpha,
                       const Rational& M) {
  if (!env_star.spec().is_atom(alpha)) {
    throw Error(ErrorKind::AlphaNotAtom, "P(tau = " + to_string(alpha) + ") = 0");
  }
  return gamma_B_clauses(env_star, gamma, B, alpha, M).all();
}

BoundaryHits boundary_hits(const LatticePath& p, const NBox& B) {
  const Region r = B.region();
  std::optional<Vertex> st, fin;
  for (const Vertex& x : p.vertices()) {
    if (!r.on_outer_boundary(x)) continue;
    if (!st) st = x;
    fin = x;
  }
  if (!st) throw Error(ErrorKind::NoHit, "path never meets the outer boundary of " + to_string(B));
  return {*st, *fin};
}

}  // namespace fpp
