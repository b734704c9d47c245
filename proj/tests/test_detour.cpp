#include <random>

#include "doctest.h"
#include "fpp/detour.hpp"
#include "fpp/error.hpp"

using namespace fpp;

namespace {

// Pairs of outer-boundary vertices at L1 distance >= min_dist.
std::vector<std::pair<Vertex, Vertex>> random_pairs(const Region& r, std::size_t count, std::uint64_t seed,
                                                    int min_dist = 1) {
  auto boundary = r.outer_boundary();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, boundary.size() - 1);
  std::vector<std::pair<Vertex, Vertex>> out;
  while (out.size() < count) {
    Vertex a = boundary[pick(rng)], b = boundary[pick(rng)];
    if (l1_distance(a, b) >= min_dist) out.emplace_back(a, b);
  }
  return out;
}

}  // namespace

TEST_CASE("exact thresholds") {
  auto t64 = detour_thresholds(2, 64);
  CHECK(t64.run_max == 23);     // 24 = 3 sqrt 64 is excluded
  CHECK(t64.deep_index == 32);  // 2 d sqrt n
  CHECK(t64.deep_depth == 32);  // 4 d n^{1/3}
  CHECK(t64.local_window == 96);
  CHECK(t64.turn_window == 5);  // sqrt 32 = 5.65
  auto t125 = detour_thresholds(2, 125);
  CHECK(t125.run_max == 33);    // 33^2 = 1089 < 1125 <= 34^2
  CHECK(t125.deep_index == 45); // 44^2 = 1936 < 2000 <= 45^2
  CHECK(t125.deep_depth == 40);
  CHECK(t125.turn_window == 7);
}

TEST_CASE("regime selection") {
  Vertex a{0, -1}, b{3, -1};
  CHECK(select_regime(a, b, 64, Rational(1, 10), Rational(2)) == DetourRegime::Long);
  CHECK(select_regime(a, b, 64, Rational(1), Rational(2)) == DetourRegime::Degenerate);
  CHECK(select_regime(a, b, 64, Rational(1), std::nullopt) == DetourRegime::Short);
}

TEST_CASE("degenerate regime: adjacent boundary vertices join by one edge") {
  NBox B = NBox::j_box(Vertex{0, 0}, 2, 4);
  Region r = B.region();
  Vertex a{r.lo()[0], r.lo()[1] - 1};
  Vertex b = a + Vertex{1, 0};
  auto p = construct_detour_path(a, b, B, 4, DetourRegime::Degenerate);
  CHECK(p.length() == 1);
  auto far = construct_detour_path(a, Vertex{r.hi()[0] + 1, r.hi()[1]}, B, 4, DetourRegime::Degenerate);
  CHECK(far.self_avoiding());
  CHECK(far.length() == static_cast<std::size_t>(l1_distance(far.front(), far.back())));
}

TEST_CASE("long regime passes all seven conditions at n = 125 when feasible") {
  const int n = 125;
  NBox B = NBox::j_box(Vertex{0, 0}, 1, n);
  int built = 0, infeasible = 0;
  for (auto [a, b] : random_pairs(B.region(), 400, 11)) {
    try {
      auto p = construct_detour_path(a, b, B, n, DetourRegime::Long);
      auto rep = check_detour_conditions(p, a, b, B, n, Rational(1, 10), Rational(2));
      CHECK(rep.all_pass());
      for (const auto& c : rep.conditions) CHECK(c.pass);
      ++built;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InfeasibleGeometry);
      ++infeasible;
    }
  }
  CHECK(built > 0);
  MESSAGE("n=125 long regime: " << built << " built, " << infeasible << " infeasible");
}

TEST_CASE("long regime at n = 64 is infeasible: depth at index 2d sqrt n needs a 32-step run, runs stop at 23") {
  const int n = 64;
  NBox B = NBox::j_box(Vertex{0, 0}, 1, n);
  for (auto [a, b] : random_pairs(B.region(), 40, 5)) {
    CHECK_THROWS_AS(construct_detour_path(a, b, B, n, DetourRegime::Long), Error);
  }
}

TEST_CASE("short regime at n = 64 has a deep turn and bounded length") {
  const int n = 64;
  NBox B = NBox::j_box(Vertex{0, 0}, 1, n);
  for (auto [a, b] : random_pairs(B.region(), 60, 3)) {
    auto p = construct_detour_path(a, b, B, n, DetourRegime::Short);
    auto rep = check_short_conditions(p, a, b, B, n);
    CHECK(rep.all_pass());
  }
}

TEST_CASE("checker reports the violated condition") {
  const int n = 64;
  NBox B = NBox::j_box(Vertex{0, 0}, 1, n);
  Region r = B.region();
  // Straight crossing of the short axis: 65 flat steps.
  Vertex a{r.lo()[0] - 1, 30}, b{r.hi()[0] + 1, 30};
  std::vector<Vertex> v{a};
  while (!(v.back() == b)) v.push_back(v.back() + Vertex{1, 0});
  auto rep = check_detour_conditions(LatticePath(v), a, b, B, n, Rational(1, 10), Rational(2));
  CHECK_FALSE(rep.all_pass());
  REQUIRE(rep.first_failure() != nullptr);
  CHECK(rep.first_failure()->index == 3);

  // Walking back and forth breaks local geodesy.
  auto zig = parse_path("(63,30) (64,30) (64,31) (63,31)");
  auto rz = check_detour_conditions(zig, Vertex{63, 30}, Vertex{63, 31}, B, n, Rational(1, 10), Rational(2));
  CHECK_FALSE(rz.conditions[1].pass);
}
