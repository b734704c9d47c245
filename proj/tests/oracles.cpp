#include "oracles.hpp"

#include <algorithm>

namespace oracle {

using fpp::Edge;
using fpp::Weight;

void for_each_saw(const Environment& env, const Region& region, const Vertex& v, const Vertex& w,
                  const std::function<bool(const Rational&)>& keep_going,
                  const std::function<void(const std::vector<Vertex>&, const Rational&)>& visit) {
  std::vector<Vertex> path{v};
  std::set<Vertex> seen{v};
  std::function<void(const Rational&)> rec = [&](const Rational& t) {
    const Vertex x = path.back();
    if (x == w) {
      visit(path, t);
      return;
    }
    for (int a = 0; a < x.dim(); ++a) {
      for (int s : {1, -1}) {
        const Vertex y = x + Vertex::unit(x.dim(), a, s);
        if (!region.contains(y) || seen.count(y)) continue;
        const Weight we = env.weight(Edge(x, y));
        if (we.is_blocked()) continue;
        const Rational nt = t + we.value();
        if (!keep_going(nt)) continue;
        path.push_back(y);
        seen.insert(y);
        rec(nt);
        seen.erase(y);
        path.pop_back();
      }
    }
  };
  rec(Rational(0));
}

std::optional<Rational> min_passage_time(const Environment& env, const Region& region, const Vertex& v,
                                         const Vertex& w) {
  std::optional<Rational> best;
  // Weights are non-negative, so a prefix already above the best complete path cannot win.
  for_each_saw(
      env, region, v, w, [&](const Rational& t) { return !best || t <= *best; },
      [&](const std::vector<Vertex>&, const Rational& t) {
        if (!best || t < *best) best = t;
      });
  return best;
}

std::vector<LatticePath> all_geodesics(const Environment& env, const Region& region, const Vertex& v,
                                       const Vertex& w) {
  const auto t = min_passage_time(env, region, v, w);
  std::vector<LatticePath> out;
  if (!t) return out;
  for_each_saw(
      env, region, v, w, [&](const Rational& p) { return p <= *t; },
      [&](const std::vector<Vertex>& p, const Rational& time) {
        if (time == *t) out.emplace_back(p);
      });
  std::sort(out.begin(), out.end());
  return out;
}

AttachedOracle attached_minimum(const Environment& env, const Region& region, const Vertex& v, const Vertex& w,
                                const Rational& beta) {
  std::optional<Rational> best;
  std::vector<LatticePath> opt;
  for_each_saw(
      env, region, v, w, [&](const Rational& t) { return !best || t <= *best; },
      [&](const std::vector<Vertex>& p, const Rational& t) {
        LatticePath path(p);
        // Recount G-turns from the definition rather than through the library.
        std::size_t g = 0;
        for (std::size_t i = 1; i + 1 < p.size(); ++i) {
          const Vertex d1 = p[i] - p[i - 1], d2 = p[i + 1] - p[i];
          if (d1 == d2 || d1 == Vertex(d2 * -1)) continue;
          const Vertex r = p[i - 1] + d2;
          if (path.contains(r)) continue;
          const Weight lhs = env.weight(Edge(p[i - 1], p[i])) + env.weight(Edge(p[i], p[i + 1]));
          const Weight rhs = env.weight(Edge(p[i - 1], r)) + env.weight(Edge(r, p[i + 1]));
          if (lhs == rhs) ++g;
        }
        const Rational val = t + beta * static_cast<long long>(g);
        if (!best || val < *best) {
          best = val;
          opt.clear();
        }
        if (val == *best) opt.push_back(path);
      });
  std::sort(opt.begin(), opt.end());
  return {best.value_or(Rational(-1)), opt};
}

std::set<Edge> edge_union(const std::vector<LatticePath>& paths) {
  std::set<Edge> out;
  for (const auto& p : paths) {
    for (const Edge& e : p.edges()) out.insert(e);
  }
  return out;
}

std::set<Edge> edge_intersection(const std::vector<LatticePath>& paths) {
  if (paths.empty()) return {};
  std::set<Edge> out;
  for (const Edge& e : paths.front().edges()) out.insert(e);
  for (std::size_t k = 1; k < paths.size(); ++k) {
    std::set<Edge> mine, keep;
    for (const Edge& e : paths[k].edges()) mine.insert(e);
    std::set_intersection(out.begin(), out.end(), mine.begin(), mine.end(), std::inserter(keep, keep.begin()));
    out.swap(keep);
  }
  return out;
}

Environment table_environment(const Region& box, const Rational& base,
                              const std::vector<std::pair<Edge, Weight>>& table) {
  auto env = fpp::sample_environment(fpp::DistributionSpec::point_mass(base, box.dim()), box, 0);
  return fpp::apply_overrides(env, table);
}

fpp::DistributionSpec atoms_12(int d) {
  return fpp::DistributionSpec::from_atoms({{1, Rational(1, 2)}, {2, Rational(1, 2)}}, d);
}

fpp::DistributionSpec atoms_0_1(int d) {
  return fpp::DistributionSpec::from_atoms({{0, Rational(3, 10)}, {1, Rational(7, 10)}}, d);
}

}  // namespace oracle
