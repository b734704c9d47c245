#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "fpp/env.hpp"

namespace fpp {

// Compact adjacency over the vertices of a region inside an environment's box:
// only edges with both endpoints in the region are traversable. Weights are
// environment ticks; BLOCKED edges are never relaxed.
class Grid {
 public:
  static constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

  Grid(const Environment& env, const Region& region);
  explicit Grid(const Environment& env) : Grid(env, env.box()) {}

  const Region& region() const noexcept { return region_; }
  int dim() const noexcept { return d_; }
  std::int64_t size() const noexcept { return region_.size(); }
  std::int64_t scale() const noexcept { return scale_; }
  std::int64_t index(const Vertex& v) const { return region_.index(v); }
  Vertex vertex(std::int64_t i) const { return region_.vertex(i); }
  int coord(std::int64_t i, int axis) const { return coords_[static_cast<std::size_t>(i * d_ + axis)]; }
  std::int64_t min_ticks() const noexcept { return min_ticks_; }
  bool has_zero_weight() const noexcept { return min_ticks_ == 0; }

  // Ticks of the edge (i, i + e_axis); caller guarantees the neighbour exists.
  std::int64_t up_ticks(std::int64_t i, int axis) const { return up_[static_cast<std::size_t>(i * d_ + axis)]; }

  // Calls f(neighbour_index, ticks, axis, sign) for every traversable edge at i.
  template <class F>
  void for_each_neighbor(std::int64_t i, F&& f) const {
    for (int a = 0; a < d_; ++a) {
      const int c = coord(i, a);
      const std::int64_t s = region_.stride(a);
      if (c < region_.hi()[a]) {
        const std::int64_t t = up_ticks(i, a);
        if (t != Environment::kBlockedTicks) f(i + s, t, a, 1);
      }
      if (c > region_.lo()[a]) {
        const std::int64_t t = up_ticks(i - s, a);
        if (t != Environment::kBlockedTicks) f(i - s, t, a, -1);
      }
    }
  }

  // Single- or multi-source label-setting search. Priority ties are broken by
  // vertex index, which is lexicographic vertex order. settle_rank (optional)
  // receives the position of each vertex in the settle order (-1 if unreached).
  std::vector<std::int64_t> dijkstra(const std::vector<std::int64_t>& sources,
                                     std::vector<std::int64_t>* settle_rank = nullptr) const;
  std::vector<std::int64_t> dijkstra(std::int64_t source, std::vector<std::int64_t>* settle_rank = nullptr) const {
    return dijkstra(std::vector<std::int64_t>{source}, settle_rank);
  }

 private:
  Region region_;
  int d_ = 0;
  std::int64_t scale_ = 1;
  std::int64_t min_ticks_ = std::numeric_limits<std::int64_t>::max();
  std::vector<int> coords_;
  std::vector<std::int64_t> up_;
};

}  // namespace fpp
