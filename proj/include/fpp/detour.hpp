#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpp/nbox.hpp"
#include "fpp/paths.hpp"

namespace fpp {

enum class DetourRegime { Long, Short, Degenerate };

std::string to_string(DetourRegime r);

// Regime of the planted path between a, b on the outer boundary: Degenerate
// when |a-b|_1 < delta1 n / (2 F+) + 1, otherwise Long if F+ is finite and
// Short if F+ is unbounded.
DetourRegime select_regime(const Vertex& a, const Vertex& b, int n, const Rational& delta1,
                           const std::optional<Rational>& f_plus);

// Self-avoiding path from a to b with interior in B (Degenerate: in B and its
// outer boundary). Throws InfeasibleGeometry when the regime's conditions
// cannot be met; conditions are never relaxed.
LatticePath construct_detour_path(const Vertex& a, const Vertex& b, const NBox& B, int n, DetourRegime regime);

// Exact integer thresholds used by the long-regime conditions.
struct DetourThresholds {
  int d = 2;
  int n = 1;
  std::int64_t local_window = 0;  // largest k with k^3 <= 1728 d^3 n  (k <= 12 d n^{1/3})
  std::int64_t run_max = 0;       // largest k with k^2 < 9 n           (k < 3 sqrt n)
  std::int64_t turn_window = 0;   // largest k with 2 k^2 <= n          (k <= sqrt(n/2))
  std::int64_t deep_index = 0;    // smallest i with i^2 >= 4 d^2 n     (i >= 2 d sqrt n)
  std::int64_t deep_depth = 0;    // smallest r with r^3 >= 64 d^3 n    (r >= 4 d n^{1/3})
};

DetourThresholds detour_thresholds(int d, int n);

struct ConditionResult {
  int index = 0;         // 1..7, or 0 for the structural check
  bool pass = false;
  bool flagged = false;  // failure only against the configured constant (condition (2))
  std::string witness;   // empty on pass
};

struct DetourReport {
  std::vector<ConditionResult> conditions;

  bool all_pass() const;  // flagged conditions count as passing
  const ConditionResult* first_failure() const;
};

// Independent checker for the seven long-regime conditions plus the structural
// requirements (self-avoiding, endpoints a and b, interior inside B).
// F+ unbounded or delta1 = 0 makes the condition (2) constant infinite.
DetourReport check_detour_conditions(const LatticePath& p, const Vertex& a, const Vertex& b, const NBox& B, int n,
                                     const Rational& delta1, const std::optional<Rational>& f_plus);

// Short-regime conditions: (1) a turn at L-infinity depth >= 2 inside B,
// (2) |p| <= |a-b|_1 + 4 d sqrt n; plus the structural requirements.
DetourReport check_short_conditions(const LatticePath& p, const Vertex& a, const Vertex& b, const NBox& B, int n);

}  // namespace fpp
