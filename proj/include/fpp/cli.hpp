#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fpp/detour.hpp"
#include "fpp/env.hpp"
#include "fpp/experiments.hpp"
#include "fpp/nbox.hpp"
#include "fpp/paths.hpp"

namespace fpp {

// JSON experiment config. Rationals are "num/den" strings (bare integers are
// accepted); absent keys take their defaults; unknown keys are rejected.
// Throws ParseError (with line or key) or ValidationError.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config(const std::string& path);  // IoError when unreadable
std::string serialize_config(const ExperimentConfig& cfg);
std::string config_schema();  // JSON Schema of the config format

// "lo..hi" with comma-separated coordinates, as printed by to_string(Region).
Region parse_region(std::string_view text);

// Tab-separated (N, statistic, mean, ci_lo, ci_hi), sorted by N then statistic.
std::string plot_data(const AggregateReport& report);
void emit_plot_data(const AggregateReport& report, const std::string& path);  // IoError

void write_file(const std::string& path, const std::string& content);  // IoError

struct VerifyResult {
  bool pass = false;
  std::string witness;  // counterexample on failure
};

// The path is a geodesic between its endpoints; witness: a strictly faster path.
VerifyResult verify_path_optimality(const Environment& env, const LatticePath& p);
// The edge lies on every geodesic v -> w; witness: a geodesic avoiding it.
VerifyResult verify_pivotal_edge(const Environment& env, const Vertex& v, const Vertex& w, const Edge& e);
// B is black; witness: the violated clause.
VerifyResult verify_black_box(const Environment& env, const NBox& B, const Rational& delta1, const Rational& M);
// The Long or Short detour conditions; witness: index of the first violated condition.
VerifyResult verify_detour(const LatticePath& p, const Vertex& a, const Vertex& b, const NBox& B, int n,
                           DetourRegime regime, const Rational& delta1, const std::optional<Rational>& f_plus);

}  // namespace fpp
