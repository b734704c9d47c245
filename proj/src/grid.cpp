#include "fpp/grid.hpp"

#include <functional>
#include <queue>

#include "fpp/error.hpp"

namespace fpp {

Grid::Grid(const Environment& env, const Region& region) : region_(region), d_(region.dim()), scale_(env.scale()) {
  if (!env.box().contains(region)) {
    throw Error(ErrorKind::EdgeOutOfBox, "search region " + to_string(region) + " exceeds " + to_string(env.box()));
  }
  const Region& storage = env.storage();
  const std::size_t n = static_cast<std::size_t>(region.size());
  coords_.resize(n * static_cast<std::size_t>(d_));
  up_.assign(n * static_cast<std::size_t>(d_), Environment::kBlockedTicks);
  for (std::int64_t i = 0; i < region.size(); ++i) {
    const Vertex v = region.vertex(i);
    const std::int64_t si = storage.index(v);
    for (int a = 0; a < d_; ++a) {
      coords_[static_cast<std::size_t>(i * d_ + a)] = v[a];
      if (v[a] < region.hi()[a]) {
        const std::int64_t t = env.ticks_at(si, a);
        up_[static_cast<std::size_t>(i * d_ + a)] = t;
        if (t < min_ticks_) min_ticks_ = t;
      }
    }
  }
}

std::vector<std::int64_t> Grid::dijkstra(const std::vector<std::int64_t>& sources,
                                         std::vector<std::int64_t>* settle_rank) const {
  std::vector<std::int64_t> dist(static_cast<std::size_t>(size()), kUnreached);
  std::vector<char> done(static_cast<std::size_t>(size()), 0);
  if (settle_rank) settle_rank->assign(static_cast<std::size_t>(size()), -1);
  using Item = std::pair<std::int64_t, std::int64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (std::int64_t s : sources) {
    dist[static_cast<std::size_t>(s)] = 0;
    pq.emplace(0, s);
  }
  std::int64_t rank = 0;
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (done[static_cast<std::size_t>(u)]) continue;
    done[static_cast<std::size_t>(u)] = 1;
    if (settle_rank) (*settle_rank)[static_cast<std::size_t>(u)] = rank++;
    for_each_neighbor(u, [&](std::int64_t w, std::int64_t t, int, int) {
      const std::int64_t nd = checked_add(du, t);
      if (nd < dist[static_cast<std::size_t>(w)]) {
        dist[static_cast<std::size_t>(w)] = nd;
        pq.emplace(nd, w);
      }
    });
  }
  return dist;
}

}  // namespace fpp
