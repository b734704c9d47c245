#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "fpp/env.hpp"
#include "fpp/grid.hpp"
#include "fpp/nbox.hpp"
#include "fpp/paths.hpp"

namespace fpp {

struct FptResult {
  Weight value;
  LatticePath one_geodesic;  // lexicographically smallest predecessor chain, for reporting
  Region certified_box;      // the box the search ran in
  // false == Restricted: value is exact only within certified_box. Set by the
  // margin certificate or, for F- > 0, by the escape bound described at sample_certified.
  bool certified = false;
};

// Exact minimum passage time over paths inside env.box(). Throws Disconnected.
FptResult first_passage_time(const Environment& env, const Vertex& v, const Vertex& w);

// Time of the straight coordinate path v -> w (axis 0 first, then axis 1, ...).
Weight straight_path_time(const Environment& env, const Vertex& v, const Vertex& w);
LatticePath straight_path(const Vertex& v, const Vertex& w);

// Smallest M >= 0 with F- (|v-w|_1 + 2M) >= U: a path leaving the M-box around
// v, w has at least |v-w|_1 + 2M + 2 edges and so costs strictly more than U.
// Throws NoCertificate when F- = 0, when the straight path is BLOCKED, or when
// an override lowers a weight below F-.
std::int64_t compute_safe_margin(const DistributionSpec& spec, const Vertex& v, const Vertex& w,
                                 const Environment& env);
// Smallest M >= 0 with fminus (dist + 2M) >= bound (fminus > 0).
std::int64_t margin_for_bound(const Rational& fminus, std::int64_t dist, const Rational& bound);

// Samples (spec, seed) on a box large enough that first_passage_time(v, w) is
// certified, and containing `cover` if given. When the safe margin is huge
// (F- tiny) the box doubles until every path leaving it is provably slower:
// d(v, faces) + d(faces, w) inside the box exceeds t. With F- = 0 the margin
// doubles until the value is stable over two rounds and the result stays Restricted.
struct CertifiedEnvironment {
  Environment env;
  std::int64_t margin = 0;
  bool certified = false;
};
CertifiedEnvironment sample_certified(std::shared_ptr<const DistributionSpec> spec, const Vertex& v,
                                      const Vertex& w, std::uint64_t seed,
                                      const std::optional<Region>& cover = std::nullopt);

struct GeodesicSet {
  BigInt count = 0;        // exact when !saturated, otherwise the cap
  bool saturated = false;
  std::set<Edge> union_edges;
  std::set<Edge> pivotal_edges;  // intersection of the enumerated geodesics
  std::vector<LatticePath> sample_paths;
  std::size_t max_length = 0;    // longest enumerated geodesic
};

struct EnumerationLimits {
  std::uint64_t cap = 1000000;         // geodesics counted before SATURATED
  std::uint64_t sample_cap = 10000;    // paths kept in sample_paths
};

// Depth-first search over self-avoiding prefixes from v, pruning any prefix
// with prefix_time + F- * |x - w|_1 > t(v, w).
GeodesicSet enumerate_geodesics(const Environment& env, const Vertex& v, const Vertex& w,
                                const EnumerationLimits& limits = {});

// Geodesic DAG: an edge a->b belongs when t(v,a) + tau + t(b,w) = t(v,w).
// Requires every weight in the box to be positive (ZeroWeightPresent otherwise).
class GeodesicDag {
 public:
  GeodesicDag(const Environment& env, const Vertex& v, const Vertex& w);

  const Grid& grid() const noexcept { return grid_; }
  std::int64_t t_ticks() const noexcept { return t_; }
  Weight value() const;
  bool on_geodesic(std::int64_t i) const;
  const std::vector<std::int64_t>& from_v() const noexcept { return dv_; }
  const std::vector<std::int64_t>& to_w() const noexcept { return dw_; }
  // Oriented DAG edges (a, b) in order of increasing t(v, a).
  const std::vector<std::pair<std::int64_t, std::int64_t>>& arcs() const noexcept { return arcs_; }

  BigInt count() const;
  std::set<Edge> union_edges() const;
  std::set<Edge> pivotal_edges() const;  // edges carried by every geodesic
  std::size_t longest_length() const;    // max number of edges of a geodesic
  double log2_count() const;
  // True when some geodesic has a segment inside `region` joining the two
  // faces perpendicular to `axis`.
  bool crosses(const Region& region, int axis) const;

 private:
  void through_counts(std::vector<BigInt>& fwd, std::vector<BigInt>& bwd) const;

  Grid grid_;
  std::int64_t src_, dst_;
  std::int64_t t_;
  std::vector<std::int64_t> dv_, dw_;
  std::vector<std::int64_t> order_;  // DAG vertices sorted by t(v, .)
  std::vector<std::pair<std::int64_t, std::int64_t>> arcs_;
};

BigInt count_geodesics_dp(const Environment& env, const Vertex& v, const Vertex& w);
std::set<Edge> union_edges(const Environment& env, const Vertex& v, const Vertex& w);
std::set<Edge> pivotal_edges(const Environment& env, const Vertex& v, const Vertex& w);
// Union edges whose deletion (override to BLOCKED) strictly increases t(v, w).
std::set<Edge> pivotal_edges_by_deletion(const Environment& env, const Vertex& v, const Vertex& w);

struct AttachedResult {
  Weight value;
  std::vector<LatticePath> optimizers;  // O+, in discovery order (lexicographic DFS)
  bool cap_exceeded = false;            // value is then only an upper bound
  bool certified = false;               // margin argument also covers t+
  std::uint64_t explored = 0;
};

struct AttachedLimits {
  std::uint64_t prefix_cap = 50000000;  // explored prefixes before CapExceeded
  std::uint64_t optimizer_cap = 100000;
};

// Exact minimum of t+ over self-avoiding paths inside env.box() by
// branch-and-bound. The bound is prefix_time + F- * |x - w|_1: the G-turn
// surcharge of a prefix is not monotone (a later visit to x_i* cancels it), so
// it cannot enter the bound. When the cap is hit the best value found is
// returned with cap_exceeded set; callers needing exactness throw CapExceeded.
AttachedResult attached_first_passage_time(const Environment& env, const Vertex& v, const Vertex& w,
                                           const AttachedParams& params, const AttachedLimits& limits = {});

// Copy of env taking env_star's weights on every edge meeting B.
Environment resample_box(const Environment& env, const Environment& env_star, const NBox& B);
// Edges with at least one endpoint in the region, restricted to those env covers.
std::vector<Edge> edges_meeting(const Environment& env, const Region& region);

struct GammaBClauses {
  bool turns_alpha = false;   // (1) the four edges around every turn equal alpha
  bool path_low = false;      // (2) remaining edges of gamma <= F-_M
  bool others_high = false;   // (3) every other edge meeting B >= F+_M
  bool all() const { return turns_alpha && path_low && others_high; }
};

// The three edge classes of the (gamma, B)-condition.
struct GammaBEdgeSets {
  std::set<Edge> turn_edges;
  std::set<Edge> path_edges;
  std::set<Edge> other_edges;
};
GammaBEdgeSets gamma_B_edge_sets(const Environment& env, const LatticePath& gamma, const NBox& B);

GammaBClauses gamma_B_clauses(const Environment& env_star, const LatticePath& gamma, const NBox& B,
                              const Rational& alpha, const Rational& M);
// Throws AlphaNotAtom when P(tau = alpha) = 0.
bool gamma_B_condition(const Environment& env_star, const LatticePath& gamma, const NBox& B, const Rational& alpha,
                       const Rational& M);

struct BoundaryHits {
  Vertex st;
  Vertex fin;
};
// First and last vertices of p on the outer boundary of B. Throws NoHit.
BoundaryHits boundary_hits(const LatticePath& p, const NBox& B);

}  // namespace fpp
