// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "fpp/cli.hpp"
#include "fpp/detour.hpp"
#include "fpp/error.hpp"
#include "fpp/experiments.hpp"
#include "fpp/geodesics.hpp"
#include "oracles.hpp"

using namespace fpp;

namespace {

constexpr double kCrit1Seconds = 120;     // criterion 1 wall-clock budget
constexpr double kCrit5Seconds = 600;     // criterion 5 wall-clock budget
constexpr double kPlateauTolerance = 0.25;  // criterion 6: relative change N=10 -> N=18
constexpr int kUniqueMin = 99;            // criterion 9: replicas with a unique geodesic

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int index, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::cout << "CRITERION " << index << (pass ? " PASS" : " FAIL") << ": " << what << " [" << detail << "]"
            << std::endl;
}

std::string fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

DistributionSpec atoms_12_useful() {
  DistributionSpec s = oracle::atoms_12();
  // Oriented bond percolation threshold on Z^2 (numerical estimate 0.6447).
  s.pc_table[2].directed_pc = Rational(6447, 10000);
  return s;
}

struct Instance {
  Environment env;
  Vertex v, w;
  bool positive = false;
};

std::vector<Instance> fpt_corpus() {
  std::mt19937_64 rng(20240611);
  std::vector<Instance> out;
  const auto a12 = std::make_shared<const DistributionSpec>(oracle::atoms_12(2));
  const auto a12_3 = std::make_shared<const DistributionSpec>(oracle::atoms_12(3));
  const auto a01 = std::make_shared<const DistributionSpec>(oracle::atoms_0_1(2));
  auto a01_3s = oracle::atoms_0_1(2);
  a01_3s.d = 3;
  const auto a01_3 = std::make_shared<const DistributionSpec>(a01_3s);
  for (int i = 0; i < 200; ++i) {
    const int d = i < 100 ? 2 : 3;
    const bool positive = i % 2 == 0;
    const auto spec = d == 2 ? (positive ? a12 : a01) : (positive ? a12_3 : a01_3);
    Vertex hi(d);
    for (int a = 0; a < d; ++a) hi[a] = static_cast<int>(rng() % (d == 2 ? 4 : 2)) + (d == 2 ? 1 : 1);
    const Region box(Vertex(d), hi);
    auto pick = [&] { return box.vertex(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(box.size()))); };
    Vertex v = pick(), w = pick();
    while (w == v) w = pick();
    out.push_back({sample_environment(spec, box, rng()), v, w, positive});
  }
  return out;
}

void criterion_1(const std::vector<Instance>& corpus) {
  const auto t0 = Clock::now();
  int agree = 0;
  for (const Instance& in : corpus) {
    const auto oracle_t = oracle::min_passage_time(in.env, in.env.box(), in.v, in.w);
    if (oracle_t && first_passage_time(in.env, in.v, in.w).value == Weight(*oracle_t)) ++agree;
  }
  const double secs = seconds_since(t0);
  report(1, agree == static_cast<int>(corpus.size()) && secs < kCrit1Seconds,
         "first_passage_time equals the exhaustive self-avoiding minimum",
         std::to_string(agree) + "/" + std::to_string(corpus.size()) + " exact, " + fixed(secs, 2) + " s (< " +
             fixed(kCrit1Seconds, 0) + " s)");
}

void criterion_2(const std::vector<Instance>& corpus) {
  int total = 0, ok = 0;
  for (const Instance& in : corpus) {
    if (!in.positive) continue;
    ++total;
    const auto geos = oracle::all_geodesics(in.env, in.env.box(), in.v, in.w);
    const GeodesicSet lib = enumerate_geodesics(in.env, in.v, in.w);
    const auto uni = oracle::edge_union(geos);
    const auto piv = oracle::edge_intersection(geos);
    const bool good = count_geodesics_dp(in.env, in.v, in.w) == geos.size() && !lib.saturated &&
                      lib.count == geos.size() && union_edges(in.env, in.v, in.w) == uni && lib.union_edges == uni &&
                      pivotal_edges(in.env, in.v, in.w) == piv && lib.pivotal_edges == piv &&
                      pivotal_edges_by_deletion(in.env, in.v, in.w) == piv;
    ok += good;
  }
  report(2, ok == total, "geodesic count, union, pivotal and deletion sets equal the enumerated sets",
         std::to_string(ok) + "/" + std::to_string(total) + " instances");
}

ExperimentConfig chain_config() {
  ExperimentConfig cfg = default_config(atoms_12_useful());
  cfg.beta = Rational(1, 100);
  cfg.N_grid = {2, 4, 6, 8, 10};
  cfg.replicas = 100;
  cfg.seed = 31337;
  return cfg;
}

Rational tau(const Environment& env, const Vertex& a, const Vertex& b) { return env.weight(Edge(a, b)).value(); }

// Swaps recomputed without the library's turn or swap code.
bool swaps_by_hand(const Environment& env, const LatticePath& p, std::int64_t& checked) {
  std::vector<std::size_t> g;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const Vertex a = p[i - 1], x = p[i], b = p[i + 1];
    if (a + b == x * 2) continue;
    const Vertex star = a + b - x;
    if (p.contains(star)) continue;
    if (tau(env, a, x) + tau(env, x, b) == tau(env, a, star) + tau(env, star, b)) g.push_back(i);
  }
  auto time_of = [&](const std::vector<Vertex>& walk) {
    Rational s = 0;
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) s += tau(env, walk[i], walk[i + 1]);
    return s;
  };
  const Rational t = time_of(p.vertices());
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t i : g) subsets.push_back({i});
  std::vector<std::size_t> full;  // greedy non-adjacent subset
  for (std::size_t i : g)
    if (full.empty() || i > full.back() + 1) full.push_back(i);
  if (full.size() > 1) subsets.push_back(full);
  bool ok = true;
  for (const auto& s : subsets) {
    std::vector<Vertex> walk = p.vertices();
    for (std::size_t i : s) walk[i] = p[i - 1] + p[i + 1] - p[i];
    ++checked;
    if (time_of(walk) != t) ok = false;
  }
  return ok;
}

void criteria_3_4(std::vector<ReplicaStats>& stats) {
  const ExperimentConfig cfg = chain_config();
  stats = run_all(cfg, threads());
  int chain_ok = 0, chain_na = 0, oracle_checked = 0, oracle_ok = 0;
  for (const ReplicaStats& s : stats) {
    if (!s.chain_ok) {
      ++chain_na;
      continue;
    }
    // Recompute the chain from the reported quantities.
    const Rational gap = *s.t_plus - s.t;
    const bool chain = cfg.beta * *s.min_gturns_Oplus <= gap && gap <= cfg.beta * *s.min_gturns_O;
    chain_ok += chain && *s.chain_ok;
    if (s.N <= 4) {
      const auto spec = std::make_shared<const DistributionSpec>(cfg.spec);
      const Vertex v{0, 0}, w{s.N, 0};
      const Environment env = sample_certified(spec, v, w, s.seed).env;
      ++oracle_checked;
      const auto att = oracle::attached_minimum(env, env.box(), v, w, cfg.beta);
      oracle_ok += *oracle::min_passage_time(env, env.box(), v, w) == s.t && att.value == *s.t_plus;
    }
  }
  report(3, chain_ok == static_cast<int>(stats.size()) && oracle_ok == oracle_checked,
         "t + beta min_O+ G <= t+ <= t + beta min_O G on every fully enumerated replica",
         std::to_string(chain_ok) + "/" + std::to_string(stats.size()) + " replicas (" + std::to_string(chain_na) +
             " not fully enumerated); t and t+ match the brute-force oracle on " + std::to_string(oracle_ok) + "/" +
             std::to_string(oracle_checked) + " replicas with N <= 4");

  std::int64_t lib_checked = 0, hand_checked = 0;
  int lib_ok = 0, hand_ok = 0;
  const auto spec = std::make_shared<const DistributionSpec>(cfg.spec);
  for (const ReplicaStats& s : stats) {
    lib_checked += s.swaps_checked;
    lib_ok += s.swap_ok == true;
    const Vertex v{0, 0}, w{s.N, 0};
    const Environment env = sample_certified(spec, v, w, s.seed).env;
    const GeodesicSet g = enumerate_geodesics(env, v, w, {cfg.caps.enumeration, cfg.caps.sample_paths});
    bool all = !g.saturated;
    for (const LatticePath& p : g.sample_paths) all = swaps_by_hand(env, p, hand_checked) && all;
    hand_ok += all;
  }
  report(4, lib_ok == static_cast<int>(stats.size()) && hand_ok == static_cast<int>(stats.size()),
         "every admissible single and full G-turn swap of every geodesic keeps the passage time",
         std::to_string(lib_ok) + "/" + std::to_string(stats.size()) + " replicas (" + std::to_string(lib_checked) +
             " swaps); independent recheck " + std::to_string(hand_ok) + "/" + std::to_string(stats.size()) + " (" +
             std::to_string(hand_checked) + " swaps)");
}

void criteria_5_6_7() {
  ExperimentConfig cfg = default_config(atoms_12_useful());
  cfg.N_grid = {6, 10, 14, 18};
  cfg.replicas = 200;
  cfg.seed = 4242;
  cfg.toggles = {true, false, false, true, false};
  const auto t0 = Clock::now();
  const SuiteResult res = theorem_suite(cfg, threads());
  const double secs = seconds_since(t0);
  const bool useful = is_useful(cfg.spec);

  std::ostringstream d5;
  bool pass5 = useful && secs <= kCrit5Seconds;
  d5 << "useful " << (useful ? "yes" : "no") << "; ";
  const PerN* p10 = nullptr;
  const PerN* p18 = nullptr;
  bool piv_positive = true;
  for (const PerN& p : res.report.per_N) {
    const Estimate& e = p.stats.at("log2count/N");
    pass5 = pass5 && e.samples == cfg.replicas && e.ci_lo > 0;
    d5 << "N=" << p.N << " mean " << fixed(e.mean) << " CI [" << fixed(e.ci_lo) << ", " << fixed(e.ci_hi) << "]; ";
    piv_positive = piv_positive && p.stats.at("pivotal/N").ci_lo > 0;
    if (p.N == 10) p10 = &p;
    if (p.N == 18) p18 = &p;
  }
  d5 << fixed(secs, 1) << " s (<= " << fixed(kCrit5Seconds, 0) << " s)";
  report(5, pass5, "mean log2(count)/N positive with 95% CI excluding 0 at N = 6, 10, 14, 18 (R = 200)", d5.str());

  auto rel = [&](const char* stat) {
    const double a = p10->stats.at(stat).mean, b = p18->stats.at(stat).mean;
    return std::abs(b - a) / a;
  };
  const double rp = rel("pivotal/N"), ru = rel("union/N");
  std::ostringstream d6;
  d6 << "pivotal/N " << fixed(p10->stats.at("pivotal/N").mean) << " -> " << fixed(p18->stats.at("pivotal/N").mean)
     << " (change " << fixed(rp) << "); union/N " << fixed(p10->stats.at("union/N").mean) << " -> "
     << fixed(p18->stats.at("union/N").mean) << " (change " << fixed(ru) << "); tolerance " << kPlateauTolerance
     << "; pivotal/N CI excludes 0 at every N: " << (piv_positive ? "yes" : "no");
  report(6, rp <= kPlateauTolerance && ru <= kPlateauTolerance && piv_positive,
         "pivotal/N and union/N plateau between N = 10 and N = 18, pivotal/N bounded away from 0", d6.str());

  int ok = 0;
  for (const ReplicaStats& s : res.replicas) {
    BigInt bound = 1;
    for (std::int64_t i = 0; i < s.max_geodesic_length; ++i) bound *= 4;
    ok += s.count && *s.count <= bound && s.count_bound_ok == true;
  }
  report(7, ok == static_cast<int>(res.replicas.size()), "count <= (2d)^L with L the longest geodesic",
         std::to_string(ok) + "/" + std::to_string(res.replicas.size()) + " replicas");
}

void criterion_8() {
  std::ostringstream det;
  bool pass = true;
  for (int n : {64, 125}) {
    const NBox B = NBox::j_box(Vertex{0, 0}, 1, n);
    const auto bnd = B.region().outer_boundary();
    std::mt19937_64 rng(static_cast<std::uint64_t>(n) * 7919);
    int long_ok = 0, long_infeasible = 0, long_bad = 0, short_ok = 0;
    int same_face = 0, long_span = 0;  // infeasible pairs explained by the two obstructions below
    const Region r = B.region();
    auto face = [&](const Vertex& x) {
      for (int ax = 0; ax < x.dim(); ++ax) {
        if (x[ax] < r.lo()[ax]) return 2 * ax;
        if (x[ax] > r.hi()[ax]) return 2 * ax + 1;
      }
      return -1;
    };
    const auto th = detour_thresholds(2, n);
    for (int i = 0; i < 100; ++i) {
      const Vertex a = bnd[rng() % bnd.size()];
      Vertex b = bnd[rng() % bnd.size()];
      while (b == a) b = bnd[rng() % bnd.size()];
      try {
        const LatticePath p = construct_detour_path(a, b, B, n, DetourRegime::Long);
        const DetourReport rep = check_detour_conditions(p, a, b, B, n, Rational(1, 10), Rational(2));
        bool strict = true;
        for (const ConditionResult& c : rep.conditions) strict = strict && c.pass;
        (strict ? long_ok : long_bad)++;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InfeasibleGeometry) throw;
        ++long_infeasible;
        // Conditions (1) and (3) force monotone paths, so a same-face pair can never gain depth;
        // and when the depth target equals the index target, (6) needs a straight run longer than (3) allows.
        if (face(a) == face(b)) ++same_face;
        else if (th.deep_depth >= th.deep_index - 1 && l1_distance(a, b) >= 2 * th.deep_index) ++long_span;
      }
      try {
        const LatticePath q = construct_detour_path(a, b, B, n, DetourRegime::Short);
        short_ok += check_short_conditions(q, a, b, B, n).all_pass();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InfeasibleGeometry) throw;
      }
    }
    pass = pass && long_ok == 100 && short_ok == 100;
    det << "n=" << n << ": long " << long_ok << "/100 pass, " << long_bad << " checker failures, " << long_infeasible
        << " infeasible (" << same_face << " same-face, " << long_span << " needing a run of " << th.deep_depth
        << " > " << th.run_max << "); short " << short_ok << "/100 pass; ";
  }
  det << "the conditions are only jointly satisfiable for n far beyond desk scale";
  report(8, pass, "detour constructor meets the seven long-regime conditions (and the short-regime pair)", det.str());
}

void criterion_9() {
  ExperimentConfig cfg = default_config(DistributionSpec::uniform_scaled_int(1, 1000000, 1000000));
  cfg.N_grid = {12};
  cfg.replicas = 100;
  cfg.seed = 99;
  cfg.toggles = {true, false, false, false, false};
  const auto stats = run_all(cfg, threads());
  int unique = 0, equal = 0, certified = 0;
  for (const ReplicaStats& s : stats) {
    certified += s.certified;
    if (s.count && *s.count == 1) {
      ++unique;
      equal += s.pivotal_size == s.union_size;
    }
  }
  report(9, unique >= kUniqueMin && equal == unique && certified == 100, "unique geodesic under UniformScaledInt(1, 10^6, 10^6), N = 12",
         std::to_string(unique) + "/100 unique (>= " + std::to_string(kUniqueMin) + "); pivotal = union on " +
             std::to_string(equal) + "/" + std::to_string(unique) + "; certified boxes " + std::to_string(certified) +
             "/100");
}

void criterion_10() {
  ExperimentConfig cfg = chain_config();
  cfg.N_grid = {4, 8};
  cfg.replicas = 25;
  cfg.toggles.gray = true;
  auto once = [&](int k) {
    const SuiteResult r = theorem_suite(cfg, k);
    return std::make_pair(replicas_csv(r.replicas), aggregate_json(r.report, r.verdicts));
  };
  const auto a = once(threads());
  const auto b = once(threads());
  const auto c = once(1);
  const bool same = a == b && a == c;
  report(10, same, "identical config gives byte-identical CSV and JSON",
         "CSV " + std::to_string(a.first.size()) + " bytes, JSON " + std::to_string(a.second.size()) +
             " bytes; repeat " + (a == b ? "identical" : "different") + ", single thread " +
             (a == c ? "identical" : "different"));
}

}  // namespace

int main() {
  try {
    const auto corpus = fpt_corpus();
    criterion_1(corpus);
    criterion_2(corpus);
    std::vector<ReplicaStats> chain;
    criteria_3_4(chain);
    criteria_5_6_7();
    criterion_8();
    criterion_9();
    criterion_10();
  } catch (const std::exception& e) {
    std::cout << "acceptance aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
