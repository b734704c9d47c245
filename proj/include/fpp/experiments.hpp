#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpp/env.hpp"
#include "fpp/nbox.hpp"
#include "fpp/weight.hpp"

namespace fpp {

struct Caps {
  std::uint64_t enumeration = 1000000;       // geodesics counted before SATURATED
  std::uint64_t sample_paths = 10000;        // geodesics kept for per-path checks
  std::uint64_t attached_prefixes = 50000000;
  std::uint64_t attached_optimizers = 100000;
  friend bool operator==(const Caps&, const Caps&) = default;
};

struct Toggles {
  bool count = true;          // geodesic count, union, pivotal, K
  bool enumerate = true;      // O_N enumeration: min G-turns, swap checks
  bool attached = true;       // t+ and O+_N
  bool pivotal_check = true;  // deletion test against the count characterization
  bool gray = false;          // gray n-box count (condition (1) searches are costly)
  friend bool operator==(const Toggles&, const Toggles&) = default;
};

struct ExperimentConfig {
  DistributionSpec spec;
  std::vector<int> N_grid{6, 10, 14, 18};
  int replicas = 100;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> fixed_margin;  // nullopt: certified margin per replica
  Rational M{10};
  Rational beta{1, 100};  // M^{-2} unless configured
  Rational alpha{1};
  int n = 4;
  Rational delta1{0};
  int k = 2;
  Caps caps;
  Toggles toggles;

  void validate() const;  // throws ValidationError
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Config with the defaults derived from spec: beta = M^{-2}, alpha = spec.default_alpha().
ExperimentConfig default_config(const DistributionSpec& spec);

struct ReplicaStats {
  int N = 0;
  int replica = 0;
  std::uint64_t seed = 0;
  Rational t;
  std::optional<Rational> t_plus;
  std::optional<BigInt> count;  // exact geodesic count
  bool count_saturated = false;
  double log2_count = 0;
  std::optional<std::int64_t> union_size, pivotal_size, K_size;
  std::optional<std::int64_t> min_gturns_O, min_gturns_Oplus;
  std::optional<std::int64_t> gray_count;
  std::optional<bool> chain_ok;
  std::optional<bool> swap_ok;
  std::int64_t swaps_checked = 0;
  std::optional<bool> pivotal_consistent;
  std::optional<bool> count_bound_ok;  // count <= (2d)^L
  std::int64_t max_geodesic_length = 0;
  bool sanity_ok = true;               // F- <= t/N <= straight/N
  bool certified = false;
  std::vector<std::string> flags;

  friend bool operator==(const ReplicaStats&, const ReplicaStats&) = default;
};

std::uint64_t replica_seed(const ExperimentConfig& cfg, int N, int replica);

// Every enabled statistic for endpoints 0 and N e_1 on a certified box.
ReplicaStats run_replica(const ExperimentConfig& cfg, int N, int replica);

// All (N, replica) pairs of the grid; results in (N, replica) order for any thread count.
std::vector<ReplicaStats> run_all(const ExperimentConfig& cfg, int threads);

struct Estimate {
  std::string mean_exact;  // "num/den" when the statistic is rational, empty otherwise
  double mean = 0;
  double variance = 0;     // sample variance (0 when R = 1)
  double ci_lo = 0, ci_hi = 0;
  std::int64_t samples = 0;
};

struct PerN {
  int N = 0;
  std::map<std::string, Estimate> stats;  // keyed by statistic name
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> checks;  // name -> (passed, evaluated)
};

struct AggregateReport {
  int precision = 6;
  std::vector<PerN> per_N;
  std::optional<Rational> pivotal_c;  // calibrated constant for the Corollary 1.5 surrogate
};

inline constexpr double kZ95 = 1.959963984540054;

// Exact means where the statistic is rational; 95% normal-approximation CIs.
AggregateReport aggregate(const std::vector<ReplicaStats>& stats);

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::vector<ReplicaStats> replicas;
  AggregateReport report;
  std::vector<Verdict> verdicts;
};

SuiteResult theorem_suite(const ExperimentConfig& cfg, int threads);

struct ResamplingReport {
  int replicas = 0;
  std::int64_t gray = 0, g_turn = 0, gamma_condition = 0, undecided = 0;
  std::int64_t clause_turns = 0, clause_path = 0, clause_others = 0;
  std::map<std::string, std::int64_t> regimes;   // planted-path regime counts
  double ratio() const { return gray ? static_cast<double>(g_turn) / static_cast<double>(gray) : 0.0; }
};

// Over cfg.replicas independent pairs (tau, tau*): frequency of B gray under
// tau, of B being a G-turn box for the resampled tau^B, and of the
// (gamma, B)-condition for tau* with a planted path between uniform boundary points.
ResamplingReport resampling_experiment(const ExperimentConfig& cfg, int N, const NBox& B);

// Serialization.
std::string replicas_csv(const std::vector<ReplicaStats>& stats);
std::string aggregate_json(const AggregateReport& report, const std::vector<Verdict>& verdicts);

}  // namespace fpp
