#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fpp/env.hpp"
#include "fpp/geodesics.hpp"
#include "fpp/nbox.hpp"
#include "fpp/paths.hpp"

namespace fpp {

enum class FailingCondition { Cond1, Cond2, Cond3 };

std::string to_string(FailingCondition c);

struct BoxClassification {
  bool black = false;
  std::optional<bool> white;  // nullopt: undecided (enumeration saturated)
  std::optional<bool> gray;   // black && white, nullopt when white is
  std::optional<bool> g_turn_box;
  std::optional<FailingCondition> failing_condition;
  bool cond1 = false, cond2 = false, cond3 = false;
  bool degenerate_blackness = false;  // delta1 = 0 makes condition (1) vacuous
  std::string witness;                // first violation found, if any
};

// Margin m such that any path from B leaving B expanded by m is slow enough to
// satisfy condition (1) for every pair: 2 F- (m + 1) >= delta1 * Lmax.
// Throws UncertifiedFPT when F- = 0 and delta1 > 0.
std::int64_t black_margin(const DistributionSpec& spec, const NBox& B, const Rational& delta1);

// Conditions (1)-(3) of blackness and the three-case combination keyed on
// whether F+ is finite and whether F+ is an atom. Condition (1) runs exact
// searches inside B expanded by black_margin; env must cover that region
// (UncertifiedFPT otherwise, also when an override lowers a weight below F-).
BoxClassification classify_black(const Environment& env, const NBox& B, const Rational& delta1, const Rational& M);

// Some maximal run of p inside B touches both faces perpendicular to the short axis.
bool crosses_short(const LatticePath& p, const NBox& B);

// White from enumerated geodesics: unknown when enumeration saturated without
// a crossing witness. `black` is the result of classify_black.
BoxClassification classify_white_gray(const NBox& B, const GeodesicSet& geos, BoxClassification black);
// Exact white from the geodesic DAG (all weights positive).
BoxClassification classify_white_gray(const NBox& B, const GeodesicDag& dag, BoxClassification black);

// Every optimizer of t+ has a G-turn inside B. Throws CapExceeded when the
// optimizer set is incomplete.
bool is_g_turn_box(const Environment& env, const NBox& B, const AttachedResult& attached);

struct CoarseGrainReport {
  std::set<Edge> K;           // union edges with weight > alpha
  std::set<Edge> R;           // union of geodesic edges
  std::set<Vertex> R_hat;     // k-cube indices u with S(u;k) meeting R
  std::set<Vertex> bad_cubes; // u in R_hat whose 3^d neighbourhood meets K
  std::int64_t D = 0;
  bool saturated = false;     // union came from a saturated enumeration
};

CoarseGrainReport coarse_grain(const Environment& env, const Vertex& v, const Vertex& w, const Rational& alpha,
                               int k);

// tau_e + 1 on every edge with tau_e > alpha.
Environment modified_weights(const Environment& env, const Rational& alpha);

// Index of the k-cube S(u;k) containing x.
Vertex cube_index(const Vertex& x, int k);

// Distinct JBoxes meeting the region, in (l, j) order. B^{-j}(l) = B^{j}(l - 2e_j),
// so only positive labels are listed.
std::vector<NBox> j_boxes_meeting(const Region& region, int n);

}  // namespace fpp
