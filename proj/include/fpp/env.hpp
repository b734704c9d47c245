#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/weight.hpp"

namespace fpp {

struct Atom {
  Rational value;
  Rational prob;
  friend bool operator==(const Atom&, const Atom&) = default;
};

// Uniform law on {lo/den, (lo+1)/den, ..., hi/den}.
struct ScaledIntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t den = 1;
  friend bool operator==(const ScaledIntRange&, const ScaledIntRange&) = default;
};

struct CriticalProbabilities {
  std::optional<Rational> pc;           // undirected bond percolation p_c(d)
  std::optional<Rational> directed_pc;  // oriented percolation threshold
  friend bool operator==(const CriticalProbabilities&, const CriticalProbabilities&) = default;
};

using CriticalTable = std::map<int, CriticalProbabilities>;

// Only p_c(2) = 1/2 is exact; every other entry is supplied by configuration.
CriticalTable default_critical_table();

struct DistributionSpec {
  enum class Kind { Atoms, UniformScaledInt };

  Kind kind = Kind::Atoms;
  std::vector<Atom> atoms;
  ScaledIntRange range;
  int d = 2;
  CriticalTable pc_table = default_critical_table();

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

  static DistributionSpec point_mass(const Rational& value, int d = 2);
  static DistributionSpec from_atoms(std::vector<Atom> atoms, int d = 2);
  static DistributionSpec uniform_scaled_int(std::int64_t lo, std::int64_t hi, std::int64_t den, int d = 2);

  void validate() const;  // throws ValidationError

  Rational prob_eq(const Rational& x) const;
  Rational prob_le(const Rational& x) const;
  Rational prob_lt(const Rational& x) const;
  Rational prob_ge(const Rational& x) const { return Rational(1) - prob_lt(x); }
  Rational prob_gt(const Rational& x) const { return Rational(1) - prob_le(x); }
  bool is_atom(const Rational& x) const { return prob_eq(x) > 0; }

  Rational f_minus() const;
  std::optional<Rational> f_plus() const;  // nullopt when unbounded
  Rational mean() const;
  Rational median() const;  // smallest support point with F(x) >= 1/2
  // Largest support point strictly below F+, or F+ itself for a point mass.
  Rational default_alpha() const;
  // Every law representable here has bounded support, so all moments exist.
  bool moments_finite() const { return true; }

  // Smallest denominator making every support point an integer.
  std::int64_t common_denominator() const;
};

struct DerivedStats {
  Rational f_minus;
  std::optional<Rational> f_plus;  // nullopt == Unbounded
  Rational f_at_f_minus;           // P(tau <= F-)
};

DerivedStats derived_stats(const DistributionSpec& spec);

// Usefulness: F(F-) < p_c(d) when F- = 0, F(F-) < directed p_c(d) otherwise.
bool is_useful(const DistributionSpec& spec);

// Threshold sequences used by the resampling construction.
Rational f_plus_m(const DistributionSpec& spec, const Rational& M);
Rational f_minus_m(const DistributionSpec& spec, const Rational& M);

// Finite-box environment of i.i.d. exact weights. Every edge with at least one
// endpoint in box() carries a weight. Weights are stored as integer ticks over
// scale(); BLOCKED is kBlockedTicks.
class Environment {
 public:
  static constexpr std::int64_t kBlockedTicks = INT64_MAX;

  Environment() = default;

  int dim() const noexcept { return box_.dim(); }
  const Region& box() const noexcept { return box_; }
  const DistributionSpec& spec() const { return *spec_; }
  std::shared_ptr<const DistributionSpec> spec_ptr() const { return spec_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::int64_t scale() const noexcept { return scale_; }
  const std::map<Edge, Weight>& overrides() const noexcept { return overrides_; }
  // True when some override is finite and below F-, which voids margin certificates.
  bool has_lowering_override() const noexcept { return lowering_; }

  bool covers(const Edge& e) const;  // at least one endpoint in box()
  Weight weight(const Edge& e) const;  // throws EdgeOutOfBox
  std::int64_t ticks(const Edge& e) const;  // throws EdgeOutOfBox
  // Ticks of the edge (v, v + e_axis); v given by storage index. No checks.
  std::int64_t ticks_at(std::int64_t storage_index, int axis) const {
    return (*ticks_)[static_cast<std::size_t>(storage_index * dim() + axis)];
  }
  const Region& storage() const noexcept { return storage_; }

  Weight from_ticks(std::int64_t t) const;
  // Ticks of w at this environment's scale, or nullopt if w is not a multiple of 1/scale.
  std::optional<std::int64_t> to_ticks(const Weight& w) const;

  // Sorted list of every covered edge with its weight.
  std::vector<std::pair<Edge, Weight>> edges() const;

  // Text dump: header "d lo..hi seed", then one "v1 v2 num/den" line per edge.
  std::string dump() const;

  friend bool operator==(const Environment& a, const Environment& b);

 private:
  friend Environment sample_environment(const DistributionSpec&, const Region&, std::uint64_t);
  friend Environment sample_environment(std::shared_ptr<const DistributionSpec>, const Region&, std::uint64_t);
  friend Environment apply_overrides(const Environment&, const std::vector<std::pair<Edge, Weight>>&);
  friend Environment rescaled(const Environment&, std::int64_t);

  std::int64_t slot(const Edge& e) const;  // -1 when not covered

  Region box_;
  Region storage_;
  std::shared_ptr<const DistributionSpec> spec_;
  std::uint64_t seed_ = 0;
  std::int64_t scale_ = 1;
  std::shared_ptr<std::vector<std::int64_t>> ticks_;
  std::map<Edge, Weight> overrides_;
  bool lowering_ = false;
};

// Pure function of (spec, box, seed). Each edge's weight depends only on the
// seed and the edge's own coordinates, so larger boxes extend smaller ones.
Environment sample_environment(const DistributionSpec& spec, const Region& box, std::uint64_t seed);
Environment sample_environment(std::shared_ptr<const DistributionSpec> spec, const Region& box,
                               std::uint64_t seed);

// Copy of env in which the listed edges take the listed weights. Throws EdgeOutOfBox.
Environment apply_overrides(const Environment& env, const std::vector<std::pair<Edge, Weight>>& pairs);

// Same weights expressed over a finer scale (new_scale must be a multiple of env.scale()).
Environment rescaled(const Environment& env, std::int64_t new_scale);

// Deterministic 64-bit mixing used for per-edge and per-replica seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace fpp
