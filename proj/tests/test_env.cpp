#include <cmath>
#include <map>

#include "doctest.h"
#include "fpp/env.hpp"
#include "fpp/error.hpp"
#include "oracles.hpp"

using namespace fpp;

namespace {

DistributionSpec with_directed_pc(DistributionSpec s) {
  s.pc_table[2].directed_pc = Rational(6447, 10000);
  return s;
}

}  // namespace

TEST_CASE("derived_stats reads the support") {
  auto a = derived_stats(oracle::atoms_12());
  CHECK(a.f_minus == 1);
  CHECK(*a.f_plus == 2);
  CHECK(a.f_at_f_minus == Rational(1, 2));

  auto b = derived_stats(oracle::atoms_0_1());
  CHECK(b.f_minus == 0);
  CHECK(*b.f_plus == 1);
  CHECK(b.f_at_f_minus == Rational(3, 10));

  auto u = derived_stats(DistributionSpec::uniform_scaled_int(1, 1000, 1000));
  CHECK(u.f_minus == Rational(1, 1000));
  CHECK(*u.f_plus == 1);
  CHECK(u.f_at_f_minus == Rational(1, 1000));
}

TEST_CASE("is_useful compares F(F-) with the configured thresholds") {
  CHECK(is_useful(oracle::atoms_0_1()));
  CHECK_FALSE(is_useful(DistributionSpec::from_atoms({{0, Rational(1, 2)}, {1, Rational(1, 2)}})));
  CHECK(is_useful(with_directed_pc(oracle::atoms_12())));
  // Only p_c(2) is built in; the directed threshold must come from configuration.
  CHECK_THROWS_AS(is_useful(oracle::atoms_12()), Error);
  try {
    is_useful(oracle::atoms_12());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingCriticalProbability);
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS(DistributionSpec::from_atoms({{1, Rational(1, 2)}, {2, Rational(49, 100)}}));
  CHECK_THROWS(DistributionSpec::from_atoms({{1, Rational(1, 2)}, {1, Rational(1, 2)}}));
  CHECK_THROWS(DistributionSpec::uniform_scaled_int(5, 4, 10));
  CHECK_THROWS(DistributionSpec::from_atoms({{-1, Rational(1)}}));
}

TEST_CASE("law queries") {
  auto u = DistributionSpec::uniform_scaled_int(1, 10, 10);
  CHECK(u.prob_le(Rational(1, 2)) == Rational(1, 2));
  CHECK(u.prob_eq(Rational(3, 10)) == Rational(1, 10));
  CHECK(u.prob_eq(Rational(1, 3)) == 0);
  CHECK(u.prob_lt(Rational(3, 10)) == Rational(2, 10));
  CHECK(u.median() == Rational(1, 2));
  CHECK(oracle::atoms_12().median() == 1);
  CHECK(oracle::atoms_12().mean() == Rational(3, 2));
  // alpha defaults to the largest support point strictly below F+.
  CHECK(oracle::atoms_12().default_alpha() == 1);
  CHECK(DistributionSpec::point_mass(3).default_alpha() == 3);
  CHECK(u.default_alpha() == Rational(9, 10));
}

TEST_CASE("threshold sequences F+_M and F-_M") {
  const Rational M = 10;
  CHECK(f_plus_m(oracle::atoms_12(), M) == 2);
  CHECK(f_minus_m(oracle::atoms_12(), M) == 1);
  // UniformScaledInt has atoms at both ends, so the atom branches apply.
  auto u = DistributionSpec::uniform_scaled_int(1, 10, 10);
  CHECK(f_plus_m(u, M) == 1);
  CHECK(f_minus_m(u, M) == Rational(1, 10));
}

TEST_CASE("sampling is deterministic and extends to larger boxes") {
  auto spec = oracle::atoms_12();
  Region box(Vertex{0, 0}, Vertex{4, 4});
  auto e1 = sample_environment(spec, box, 42);
  auto e2 = sample_environment(spec, box, 42);
  CHECK(e1 == e2);
  CHECK(e1.dump() == e2.dump());
  auto e3 = sample_environment(spec, box, 43);
  CHECK_FALSE(e1 == e3);
  auto big = sample_environment(spec, Region(Vertex{-3, -2}, Vertex{9, 7}), 42);
  for (const auto& [e, w] : e1.edges()) CHECK(big.weight(e) == w);
}

TEST_CASE("point mass gives constant weights") {
  auto env = sample_environment(DistributionSpec::point_mass(1), Region(Vertex{0, 0}, Vertex{3, 3}), 9);
  for (const auto& [e, w] : env.edges()) CHECK(w == Weight(1));
}

TEST_CASE("weight-1 frequency over 10^6 edges is within 3 sigma of 1/2") {
  auto spec = std::make_shared<const DistributionSpec>(oracle::atoms_12());
  Region box(Vertex{0, 0}, Vertex{4, 4});
  std::int64_t ones = 0, total = 0;
  for (std::uint64_t seed = 0; total < 1000000; ++seed) {
    auto env = sample_environment(spec, box, seed);
    for (const auto& [e, w] : env.edges()) {
      ones += w == Weight(1);
      ++total;
    }
  }
  const double sigma = std::sqrt(total * 0.25);
  CHECK(std::abs(static_cast<double>(ones) - total / 2.0) <= 3 * sigma);
}

TEST_CASE("atom frequencies lie within 4 standard errors") {
  auto spec = std::make_shared<const DistributionSpec>(DistributionSpec::from_atoms(
      {{1, Rational(1, 5)}, {Rational(3, 2), Rational(3, 10)}, {4, Rational(1, 2)}}));
  Region box(Vertex{0, 0, 0}, Vertex{5, 5, 5});
  std::map<Weight, std::int64_t> counts;
  std::int64_t total = 0;
  for (std::uint64_t seed = 100; total < 200000; ++seed) {
    auto s = *spec;
    s.d = 3;
    auto env = sample_environment(std::make_shared<const DistributionSpec>(s), box, seed);
    for (const auto& [e, w] : env.edges()) {
      ++counts[w];
      ++total;
    }
  }
  for (const auto& a : spec->atoms) {
    const double p = a.prob.convert_to<double>();
    const double se = std::sqrt(p * (1 - p) / total);
    CHECK(std::abs(static_cast<double>(counts[Weight(a.value)]) / total - p) <= 4 * se);
  }
}

TEST_CASE("uniform law covers its range evenly") {
  auto spec = std::make_shared<const DistributionSpec>(DistributionSpec::uniform_scaled_int(3, 6, 7));
  Region box(Vertex{0, 0}, Vertex{9, 9});
  std::map<Weight, std::int64_t> counts;
  std::int64_t total = 0;
  for (std::uint64_t seed = 0; total < 100000; ++seed) {
    for (const auto& [e, w] : sample_environment(spec, box, seed).edges()) {
      ++counts[w];
      ++total;
    }
  }
  CHECK(counts.size() == 4);
  for (int k = 3; k <= 6; ++k) {
    const double se = std::sqrt(0.25 * 0.75 / total);
    CHECK(std::abs(static_cast<double>(counts[Weight(Rational(k, 7))]) / total - 0.25) <= 4 * se);
  }
}

TEST_CASE("overrides shadow base weights") {
  auto env = sample_environment(oracle::atoms_12(), Region(Vertex{0, 0}, Vertex{3, 3}), 5);
  CHECK(apply_overrides(env, {}) == env);
  Edge e(Vertex{1, 1}, Vertex{1, 2});
  auto blocked = apply_overrides(env, {{e, Weight::blocked()}});
  CHECK(blocked.weight(e).is_blocked());
  CHECK(blocked.weight(Edge(Vertex{0, 0}, Vertex{1, 0})) == env.weight(Edge(Vertex{0, 0}, Vertex{1, 0})));
  auto same = apply_overrides(env, {{e, env.weight(e)}});
  CHECK(same == env);
  auto finer = apply_overrides(env, {{e, Weight(Rational(1, 3))}});
  CHECK(finer.weight(e) == Weight(Rational(1, 3)));
  CHECK(finer.has_lowering_override());
  CHECK(finer.weight(Edge(Vertex{2, 2}, Vertex{2, 3})) == env.weight(Edge(Vertex{2, 2}, Vertex{2, 3})));
  CHECK_THROWS_AS(apply_overrides(env, {{Edge(Vertex{8, 8}, Vertex{8, 9}), Weight(1)}}), Error);
  CHECK_THROWS_AS(env.weight(Edge(Vertex{8, 8}, Vertex{8, 9})), Error);
}

TEST_CASE("boundary-crossing edges are covered and canonical") {
  auto env = sample_environment(oracle::atoms_12(), Region(Vertex{0, 0}, Vertex{2, 2}), 1);
  Edge out(Vertex{3, 1}, Vertex{2, 1});
  CHECK(out.lo() == Vertex{2, 1});
  CHECK(env.covers(out));
  CHECK(env.weight(Edge(Vertex{-1, 0}, Vertex{0, 0})) == env.weight(Edge(Vertex{0, 0}, Vertex{-1, 0})));
  CHECK(env.edges().size() == 12 + 12);
}

TEST_CASE("exact sums do not depend on order") {
  auto env = sample_environment(DistributionSpec::uniform_scaled_int(1, 997, 991), Region(Vertex{0, 0}, Vertex{6, 6}), 3);
  auto edges = env.edges();
  Weight fwd(0), bwd(0);
  for (const auto& [e, w] : edges) fwd += w;
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) bwd += it->second;
  CHECK(fwd == bwd);
}

TEST_CASE("dump header and line format") {
  auto env = sample_environment(DistributionSpec::point_mass(Rational(3, 2)), Region(Vertex{0, 0}, Vertex{1, 1}), 7);
  const std::string d = env.dump();
  CHECK(d.rfind("2 0,0..1,1 7\n", 0) == 0);
  CHECK(d.find("0,0 1,0 3/2\n") != std::string::npos);
  auto blocked = apply_overrides(env, {{Edge(Vertex{0, 0}, Vertex{1, 0}), Weight::blocked()}});
  CHECK(blocked.dump().find("0,0 1,0 BLOCKED\n") != std::string::npos);
}
