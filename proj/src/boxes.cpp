#include "fpp/boxes.hpp"

#include <algorithm>

#include "fpp/error.hpp"
#include "fpp/grid.hpp"

namespace fpp {

namespace bmp = boost::multiprecision;

std::string to_string(FailingCondition c) {
  switch (c) {
    case FailingCondition::Cond1:
      return "Cond1";
    case FailingCondition::Cond2:
      return "Cond2";
    case FailingCondition::Cond3:
      return "Cond3";
  }
  return "?";
}

namespace {

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (q * b < a) q += 1;
  return q;
}

int max_l1_extent(const Region& r) {
  int s = 0;
  for (int i = 0; i < r.dim(); ++i) s += r.extent(i) - 1;
  return s;
}

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

std::int64_t black_margin(const DistributionSpec& spec, const NBox& B, const Rational& delta1) {
  if (delta1 == 0) return 0;
  const Rational fm = spec.f_minus();
  if (fm == 0) throw Error(ErrorKind::UncertifiedFPT, "F- = 0: no margin certifies condition (1)");
  const Rational need = delta1 * max_l1_extent(B.region()) / (2 * fm);
  const BigInt c = ceil_div(bmp::numerator(need), bmp::denominator(need));
  return std::max<std::int64_t>(0, to_int64(c) - 1);
}

BoxClassification classify_black(const Environment& env, const NBox& B, const Rational& delta1, const Rational& M) {
  const DistributionSpec& spec = env.spec();
  const Region box = B.region();
  const int n = B.n;
  BoxClassification out;

  // Condition (1).
  if (delta1 == 0) {
    out.degenerate_blackness = true;
    out.cond1 = !env.has_lowering_override();
    if (!out.cond1) throw Error(ErrorKind::UncertifiedFPT, "an override lowers a weight below F-");
  } else {
    if (env.has_lowering_override()) throw Error(ErrorKind::UncertifiedFPT, "an override lowers a weight below F-");
    const std::int64_t m = black_margin(spec, B, delta1);
    const Region search = box.expanded(static_cast<int>(m));
    if (!env.box().contains(search)) {
      throw Error(ErrorKind::UncertifiedFPT, "environment box " + to_string(env.box()) + " does not contain " +
                                                 to_string(search));
    }
    Grid grid(env, search);
    const Rational rate = (spec.f_minus() + delta1) * env.scale();
    const int lmax = max_l1_extent(box);
    // Smallest admissible tick count at each distance.
    std::vector<std::int64_t> need(static_cast<std::size_t>(lmax + 1));
    for (int L = 0; L <= lmax; ++L) {
      const Rational x = rate * L;
      need[static_cast<std::size_t>(L)] = to_int64(ceil_div(bmp::numerator(x), bmp::denominator(x)));
    }
    out.cond1 = true;
    for (std::int64_t i = 0; i < box.size() && out.cond1; ++i) {
      const Vertex v = box.vertex(i);
      const auto dist = grid.dijkstra(grid.index(v));
      // Each pair once: w after v in lexicographic order.
      for (std::int64_t j = i + 1; j < box.size(); ++j) {
        const Vertex w = box.vertex(j);
        const std::int64_t L = l1_distance(v, w);
        if (L * L * L < n) continue;  // |v-w|_1 >= n^{1/3}
        const std::int64_t t = dist[static_cast<std::size_t>(grid.index(w))];
        if (t < need[static_cast<std::size_t>(L)]) {
          out.cond1 = false;
          out.witness = "t" + to_string(v) + to_string(w) + " = " + to_string(env.from_ticks(t)) + " < (F-+delta1)*" +
                        std::to_string(L);
          break;
        }
      }
    }
  }

  // Conditions (2) and (3) over every edge meeting B.
  const auto fplus = spec.f_plus();
  const Weight cap2(M);
  std::optional<Weight> cap3;
  if (fplus) {
    const Rational c = *fplus - 1 / M;
    if (c >= 0) cap3 = Weight(c);
  }
  out.cond2 = true;
  out.cond3 = fplus.has_value();
  for (const Edge& e : edges_meeting(env, box)) {
    const Weight w = env.weight(e);
    if (out.cond2 && w > cap2) {
      out.cond2 = false;
      if (out.witness.empty()) out.witness = to_string(e) + " weight " + to_string(w) + " > M";
    }
    if (out.cond3 && (!cap3 || w > *cap3)) {
      out.cond3 = false;
      if (out.witness.empty() && fplus) out.witness = to_string(e) + " weight " + to_string(w) + " > F+ - 1/M";
    }
  }

  std::vector<std::pair<bool, FailingCondition>> needed{{out.cond1, FailingCondition::Cond1}};
  if (!fplus) {
    needed.emplace_back(out.cond2, FailingCondition::Cond2);
  } else if (!spec.is_atom(*fplus)) {
    needed.emplace_back(out.cond3, FailingCondition::Cond3);
  }
  out.black = true;
  for (auto [ok, which] : needed) {
    if (!ok) {
      out.black = false;
      out.failing_condition = which;
      break;
    }
  }
  return out;
}

bool crosses_short(const LatticePath& p, const NBox& B) {
  if (B.kind != NBox::Kind::JBox) throw Error(ErrorKind::WrongKind, "crossing is defined for n-boxes B^j only");
  const Region r = B.region();
  const int axis = B.short_axis();
  const int lo = r.lo()[axis], hi = r.hi()[axis];
  bool in_run = false, lo_hit = false, hi_hit = false;
  for (const Vertex& x : p.vertices()) {
    if (!r.contains(x)) {
      in_run = false;
      continue;
    }
    if (!in_run) {
      in_run = true;
      lo_hit = hi_hit = false;
    }
    lo_hit |= x[axis] == lo;
    hi_hit |= x[axis] == hi;
    if (lo_hit && hi_hit) return true;
  }
  return false;
}

namespace {

BoxClassification with_white(BoxClassification c, std::optional<bool> white) {
  c.white = white;
  if (!white) {
    c.gray = c.black ? std::nullopt : std::optional<bool>(false);
  } else {
    c.gray = c.black && *white;
  }
  return c;
}

}  // namespace

BoxClassification classify_white_gray(const NBox& B, const GeodesicSet& geos, BoxClassification black) {
  const bool witness = std::any_of(geos.sample_paths.begin(), geos.sample_paths.end(),
                                   [&](const LatticePath& p) { return crosses_short(p, B); });
  const bool complete = !geos.saturated && geos.sample_paths.size() == geos.count;
  if (witness) return with_white(std::move(black), true);
  return with_white(std::move(black), complete ? std::optional<bool>(false) : std::nullopt);
}

BoxClassification classify_white_gray(const NBox& B, const GeodesicDag& dag, BoxClassification black) {
  if (B.kind != NBox::Kind::JBox) throw Error(ErrorKind::WrongKind, "crossing is defined for n-boxes B^j only");
  return with_white(std::move(black), dag.crosses(B.region(), B.short_axis()));
}

bool is_g_turn_box(const Environment& env, const NBox& B, const AttachedResult& attached) {
  if (attached.cap_exceeded) throw Error(ErrorKind::CapExceeded, "attached optimizer set is incomplete");
  const Region r = B.region();
  for (const LatticePath& p : attached.optimizers) {
    const TurnClassification tc = classify_turns(env, p);
    bool found = false;
    for (std::size_t i : tc.gturn_indices()) {
      if (r.contains(p[i])) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return !attached.optimizers.empty();
}

Vertex cube_index(const Vertex& x, int k) {
  Vertex u(x.dim());
  for (int i = 0; i < x.dim(); ++i) u[i] = floor_div(x[i], k);
  return u;
}

CoarseGrainReport coarse_grain(const Environment& env, const Vertex& v, const Vertex& w, const Rational& alpha,
                               int k) {
  if (k < 1) throw Error(ErrorKind::ValidationError, "cube scale k must be positive");
  CoarseGrainReport rep;
  try {
    rep.R = union_edges(env, v, w);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroWeightPresent) throw;
    GeodesicSet g = enumerate_geodesics(env, v, w);
    rep.R = g.union_edges;
    rep.saturated = g.saturated;
  }
  const Weight a(alpha);
  std::set<Vertex> k_cubes;
  for (const Edge& e : rep.R) {
    rep.R_hat.insert(cube_index(e.lo(), k));
    rep.R_hat.insert(cube_index(e.hi(), k));
    if (env.weight(e) > a) {
      rep.K.insert(e);
      k_cubes.insert(cube_index(e.lo(), k));
      k_cubes.insert(cube_index(e.hi(), k));
    }
  }
  const int d = env.dim();
  for (const Vertex& u : rep.R_hat) {
    const Vertex ones(std::vector<int>(static_cast<std::size_t>(d), 1));
    const Region nb(u - ones, u + ones);
    for (std::int64_t i = 0; i < nb.size(); ++i) {
      if (k_cubes.count(nb.vertex(i))) {
        rep.bad_cubes.insert(u);
        break;
      }
    }
  }
  rep.D = static_cast<std::int64_t>(rep.bad_cubes.size());
  return rep;
}

Environment modified_weights(const Environment& env, const Rational& alpha) {
  const Weight a(alpha);
  std::vector<std::pair<Edge, Weight>> pairs;
  for (const auto& [e, w] : env.edges()) {
    if (!w.is_blocked() && w > a) pairs.emplace_back(e, w + Weight(1));
  }
  return apply_overrides(env, pairs);
}

std::vector<NBox> j_boxes_meeting(const Region& region, int n) {
  const int d = region.dim();
  // T(l;n) spans [n(l-1), n(l+2)], so it meets [lo, hi] iff l in [ceil(lo/n) - 2, floor(hi/n) + 1].
  Vertex llo(d), lhi(d);
  for (int i = 0; i < d; ++i) {
    llo[i] = -floor_div(-region.lo()[i], n) - 2;
    lhi[i] = floor_div(region.hi()[i], n) + 1;
  }
  std::vector<NBox> out;
  const Region ls(llo, lhi);
  for (std::int64_t i = 0; i < ls.size(); ++i) {
    const Vertex l = ls.vertex(i);
    for (int j = 1; j <= d; ++j) {
      NBox b = NBox::j_box(l, j, n);
      if (b.region().intersects(region)) out.push_back(b);
    }
  }
  return out;
}

}  // namespace fpp
