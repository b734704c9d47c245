#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fpp/env.hpp"
#include "fpp/lattice.hpp"
#include "fpp/weight.hpp"

namespace fpp {

// Nearest-neighbour vertex sequence. Repeated vertices are allowed (swapped
// walks need them); self_avoiding() reports whether any occur.
class LatticePath {
 public:
  LatticePath() = default;
  explicit LatticePath(std::vector<Vertex> vertices);  // throws ValidationError unless steps are unit

  const std::vector<Vertex>& vertices() const noexcept { return v_; }
  std::size_t length() const noexcept { return v_.empty() ? 0 : v_.size() - 1; }
  std::size_t size() const noexcept { return v_.size(); }
  bool empty() const noexcept { return v_.empty(); }
  const Vertex& operator[](std::size_t i) const { return v_[i]; }
  const Vertex& front() const { return v_.front(); }
  const Vertex& back() const { return v_.back(); }
  bool self_avoiding() const noexcept { return self_avoiding_; }
  bool contains(const Vertex& x) const;

  std::vector<Edge> edges() const;
  // this followed by other; other must start where this ends.
  LatticePath concat(const LatticePath& other) const;
  LatticePath reversed() const;

  friend bool operator==(const LatticePath& a, const LatticePath& b) { return a.v_ == b.v_; }
  friend auto operator<=>(const LatticePath& a, const LatticePath& b) { return a.v_ <=> b.v_; }

 private:
  std::vector<Vertex> v_;
  bool self_avoiding_ = true;
};

std::string to_string(const LatticePath& p);  // "(0,0) (1,0) ..."
LatticePath parse_path(std::string_view text);

Weight passage_time(const Environment& env, const LatticePath& p);

// x_{i-1} + (x_{i+1} - x_i) at interior indices, x_i at the endpoints.
Vertex reflect(const LatticePath& p, std::size_t i);

// Geometric turn test at an interior index (steps perpendicular).
bool is_turn(const LatticePath& p, std::size_t i);

enum class TurnLabel { Flat, Turn, GTurn };

struct TurnClassification {
  std::vector<TurnLabel> labels;
  std::vector<std::optional<Vertex>> reflection;  // set at Turn and GTurn indices

  std::vector<std::size_t> turn_indices() const;   // Turn or GTurn
  std::vector<std::size_t> gturn_indices() const;
  std::size_t gturn_count() const;
};

TurnClassification classify_turns(const Environment& env, const LatticePath& p);

struct AttachedParams {
  Rational beta{0};
};

Weight attached_path_time(const Environment& env, const LatticePath& p, const AttachedParams& params);

struct SwapResult {
  LatticePath walk;
  bool self_avoiding = false;
};

// Replaces x_i by its reflection for every i in subset. Subset entries must be
// G-turn indices of p (throws ValidationError otherwise).
SwapResult swap_g_turns(const Environment& env, const LatticePath& p, const std::set<std::size_t>& subset);

// A swap subset is admissible when no two indices are adjacent: swapping
// neighbouring corners at once does not produce a nearest-neighbour walk.
bool is_admissible_swap(const std::set<std::size_t>& subset);
// All G-turns when admissible, otherwise the greedy left-to-right maximal admissible subset.
std::set<std::size_t> full_swap_subset(const std::vector<std::size_t>& gturns);

}  // namespace fpp
