#include "fpp/paths.hpp"

#include <algorithm>
#include <sstream>

#include "fpp/error.hpp"

namespace fpp {

LatticePath::LatticePath(std::vector<Vertex> vertices) : v_(std::move(vertices)) {
  for (std::size_t i = 1; i < v_.size(); ++i) {
    if (!step_axis(v_[i - 1], v_[i])) {
      throw Error(ErrorKind::ValidationError, "path step " + to_string(v_[i - 1]) + " -> " + to_string(v_[i]) +
                                                  " is not a unit step");
    }
  }
  std::vector<Vertex> sorted = v_;
  std::sort(sorted.begin(), sorted.end());
  self_avoiding_ = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool LatticePath::contains(const Vertex& x) const { return std::find(v_.begin(), v_.end(), x) != v_.end(); }

std::vector<Edge> LatticePath::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 1; i < v_.size(); ++i) out.emplace_back(v_[i - 1], v_[i]);
  return out;
}

LatticePath LatticePath::concat(const LatticePath& other) const {
  if (empty()) return other;
  if (other.empty()) return *this;
  if (!(back() == other.front())) throw Error(ErrorKind::ValidationError, "paths do not compose");
  std::vector<Vertex> v = v_;
  v.insert(v.end(), other.v_.begin() + 1, other.v_.end());
  return LatticePath(std::move(v));
}

LatticePath LatticePath::reversed() const {
  std::vector<Vertex> v(v_.rbegin(), v_.rend());
  return LatticePath(std::move(v));
}

std::string to_string(const LatticePath& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += to_string(p[i]);
  }
  return out;
}

LatticePath parse_path(std::string_view text) {
  std::vector<Vertex> v;
  std::istringstream is{std::string(text)};
  std::string tok;
  while (is >> tok) v.push_back(parse_vertex(tok));
  return LatticePath(std::move(v));
}

Weight passage_time(const Environment& env, const LatticePath& p) {
  Weight total(0);
  for (const Edge& e : p.edges()) total += env.weight(e);
  return total;
}

Vertex reflect(const LatticePath& p, std::size_t i) {
  if (i >= p.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "index " + std::to_string(i) + " outside path of " +
                                                std::to_string(p.size()) + " vertices");
  }
  if (i == 0 || i + 1 == p.size()) return p[i];
  return p[i - 1] + (p[i + 1] - p[i]);
}

bool is_turn(const LatticePath& p, std::size_t i) {
  if (i == 0 || i + 1 >= p.size()) return false;
  return *step_axis(p[i - 1], p[i]) != *step_axis(p[i], p[i + 1]);
}

std::vector<std::size_t> TurnClassification::turn_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != TurnLabel::Flat) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> TurnClassification::gturn_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == TurnLabel::GTurn) out.push_back(i);
  }
  return out;
}

std::size_t TurnClassification::gturn_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), TurnLabel::GTurn));
}

TurnClassification classify_turns(const Environment& env, const LatticePath& p) {
  TurnClassification tc;
  tc.labels.assign(p.size(), TurnLabel::Flat);
  tc.reflection.assign(p.size(), std::nullopt);
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (!is_turn(p, i)) continue;
    Vertex r = reflect(p, i);
    tc.reflection[i] = r;
    tc.labels[i] = TurnLabel::Turn;
    std::int64_t here = env.ticks(Edge(p[i - 1], p[i]));
    std::int64_t here2 = env.ticks(Edge(p[i], p[i + 1]));
    std::int64_t there = env.ticks(Edge(p[i - 1], r));
    std::int64_t there2 = env.ticks(Edge(r, p[i + 1]));
    constexpr std::int64_t kB = Environment::kBlockedTicks;
    if (here == kB || here2 == kB || there == kB || there2 == kB) continue;
    if (here + here2 == there + there2 && !p.contains(r)) tc.labels[i] = TurnLabel::GTurn;
  }
  return tc;
}

Weight attached_path_time(const Environment& env, const LatticePath& p, const AttachedParams& params) {
  Weight t = passage_time(env, p);
  if (t.is_blocked()) return t;
  return Weight(t.value() + params.beta * static_cast<long long>(classify_turns(env, p).gturn_count()));
}

SwapResult swap_g_turns(const Environment& env, const LatticePath& p, const std::set<std::size_t>& subset) {
  if (subset.empty()) return {p, p.self_avoiding()};
  TurnClassification tc = classify_turns(env, p);
  std::vector<Vertex> v = p.vertices();
  for (std::size_t i : subset) {
    if (i >= tc.labels.size() || tc.labels[i] != TurnLabel::GTurn) {
      throw Error(ErrorKind::ValidationError, "index " + std::to_string(i) + " is not a G-turn");
    }
    v[i] = *tc.reflection[i];
  }
  LatticePath walk(std::move(v));
  bool sa = walk.self_avoiding();
  return {std::move(walk), sa};
}

bool is_admissible_swap(const std::set<std::size_t>& subset) {
  std::size_t prev = 0;
  bool first = true;
  for (std::size_t i : subset) {
    if (!first && i == prev + 1) return false;
    prev = i;
    first = false;
  }
  return true;
}

std::set<std::size_t> full_swap_subset(const std::vector<std::size_t>& gturns) {
  std::set<std::size_t> out;
  for (std::size_t i : gturns) {
    if (out.empty() || *out.rbegin() + 1 < i) out.insert(i);
  }
  return out;
}

}  // namespace fpp
