#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "fpp/cli.hpp"
#include "fpp/error.hpp"
#include "fpp/geodesics.hpp"
#include "oracles.hpp"

using namespace fpp;

namespace {

const char* kAtoms12 = R"({
  "distribution": {"kind": "atoms", "atoms": [{"value": "1/1", "prob": "1/2"}, {"value": "2/1", "prob": "1/2"}]}
})";

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::IoError;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "fpp_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

int run(const std::string& args) {
  const int status = std::system((std::string(FPP_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config: exact rationals and defaults") {
  const ExperimentConfig cfg = parse_config_text(R"({
    "distribution": {"kind": "atoms", "atoms": [{"value": "1", "prob": "1/2"}, {"value": "2", "prob": "1/2"}]},
    "beta": "1/10000", "M": "5/1", "N_grid": [4, 8], "replicas": 3, "seed": 18446744073709551615
  })");
  CHECK(cfg.beta == Rational(1, 10000));
  CHECK(cfg.M == 5);
  CHECK(cfg.seed == 18446744073709551615ULL);
  CHECK(cfg.N_grid == std::vector<int>{4, 8});

  const ExperimentConfig d = parse_config_text(R"({
    "distribution": {"kind": "atoms", "atoms": [{"value": "1", "prob": "1/2"}, {"value": "2", "prob": "1/2"}]},
    "M": "5"
  })");
  CHECK(d.beta == Rational(1, 25));
  CHECK(d.alpha == 1);
  CHECK_FALSE(d.fixed_margin);
}

TEST_CASE("config: errors") {
  CHECK(kind_of(R"({"distribution": {"kind": "atoms", "atoms": [{"value": "1", "prob": "99/100"}]}})") ==
        ErrorKind::ValidationError);
  CHECK(kind_of(R"({"distribution": {"kind": "atoms", "atoms": [{"value": "1", "prob": "1"}]}, "bogus": 1})") ==
        ErrorKind::ParseError);
  CHECK(kind_of(R"({"distribution": {"kind": "atoms", "atoms": [{"value": "1", "prob": "1"}]}, "N_grid": [5, 3]})") ==
        ErrorKind::ValidationError);
  CHECK(kind_of(R"({"distribution": {"kind": "atoms", "atoms": [{"value": "x", "prob": "1"}]}})") ==
        ErrorKind::ParseError);
  CHECK(kind_of("{\n  \"distribution\": \n}") == ErrorKind::ParseError);
  try {
    parse_config_text(R"({"distribution": {"kind": "atoms", "atoms": [{"value": "1", "prob": "1"}]}, "caps": {"x": 1}})");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("caps.x") != std::string::npos);
  }
  try {
    parse_config_text("{\n  \"distribution\": \n}");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("/nonexistent/fpp.json"), Error);
}

TEST_CASE("config: serialize then parse is the identity") {
  ExperimentConfig a = parse_config_text(kAtoms12);
  CHECK(parse_config_text(serialize_config(a)) == a);

  ExperimentConfig b = default_config(DistributionSpec::uniform_scaled_int(1, 1000000, 1000000));
  b.fixed_margin = 7;
  b.delta1 = Rational(3, 17);
  b.toggles.gray = true;
  b.toggles.attached = false;
  b.caps.enumeration = 12345;
  b.spec.pc_table[2].directed_pc = Rational(6447, 10000);
  b.spec.pc_table[3].pc = Rational(2488, 10000);
  const std::string text = serialize_config(b);
  CHECK(parse_config_text(text) == b);
  CHECK(serialize_config(parse_config_text(text)) == text);
}

TEST_CASE("region parsing") {
  CHECK(parse_region("0,-1..4,2") == Region(Vertex{0, -1}, Vertex{4, 2}));
  CHECK(parse_region(to_string(Region(Vertex{1, 2, 3}, Vertex{4, 5, 6}))) == Region(Vertex{1, 2, 3}, Vertex{4, 5, 6}));
  CHECK_THROWS_AS(parse_region("0,0"), Error);
}

TEST_CASE("plot data") {
  AggregateReport empty;
  CHECK(plot_data(empty) == "N\tstatistic\tmean\tci_lo\tci_hi\n");

  AggregateReport one;
  PerN p;
  p.N = 6;
  Estimate e;
  e.mean = 1.5;
  e.ci_lo = 1.25;
  e.ci_hi = 1.75;
  p.stats["t/N"] = e;
  one.per_N.push_back(p);
  CHECK(plot_data(one) == "N\tstatistic\tmean\tci_lo\tci_hi\n6\tt/N\t1.500000\t1.250000\t1.750000\n");

  ReplicaStats s;
  s.N = 10;
  s.t = 13;
  s.union_size = 12;
  s.pivotal_size = 9;
  ReplicaStats s2 = s;
  s2.N = 4;
  s2.t = 5;
  const AggregateReport rep = aggregate({s, s2});
  const auto path = scratch("plot.tsv");
  emit_plot_data(rep, path.string());
  const std::string first = slurp(path.string());
  emit_plot_data(rep, path.string());
  CHECK(slurp(path.string()) == first);
  CHECK(first.find("\n4\t") < first.find("\n10\t"));
  CHECK_THROWS_AS(emit_plot_data(rep, "/nonexistent/dir/plot.tsv"), Error);
}

TEST_CASE("verify: path optimality") {
  const Region box(Vertex{-2, -2}, Vertex{6, 2});
  const Environment flat = sample_environment(DistributionSpec::point_mass(1), box, 0);
  CHECK(verify_path_optimality(flat, parse_path("(0,0) (1,0) (2,0) (3,0)")).pass);
  const VerifyResult detour = verify_path_optimality(flat, parse_path("(0,0) (0,1) (1,1) (1,0)"));
  CHECK_FALSE(detour.pass);
  CHECK(detour.witness.find("(0,0) (1,0)") != std::string::npos);
}

TEST_CASE("verify: pivotal edge claim fails with an avoiding geodesic") {
  // Two geodesics (0,0)->(1,1): through (1,0) and through (0,1).
  const Region box(Vertex{-1, -1}, Vertex{2, 2});
  const Environment env = oracle::table_environment(box, 5, {{Edge({0, 0}, {1, 0}), Weight(1)},
                                                             {Edge({1, 0}, {1, 1}), Weight(1)},
                                                             {Edge({0, 0}, {0, 1}), Weight(1)},
                                                             {Edge({0, 1}, {1, 1}), Weight(1)}});
  const auto geos = oracle::all_geodesics(env, box, Vertex{0, 0}, Vertex{1, 1});
  REQUIRE(geos.size() == 2);
  const Edge claimed({0, 0}, {1, 0});
  const VerifyResult r = verify_pivotal_edge(env, Vertex{0, 0}, Vertex{1, 1}, claimed);
  CHECK_FALSE(r.pass);
  const std::string prefix = "geodesic avoiding the edge: ";
  REQUIRE(r.witness.rfind(prefix, 0) == 0);
  const LatticePath witness = parse_path(r.witness.substr(prefix.size()));
  CHECK(std::find(geos.begin(), geos.end(), witness) != geos.end());
  const auto edges = witness.edges();
  CHECK(std::find(edges.begin(), edges.end(), claimed) == edges.end());

  // On a unique geodesic every edge is pivotal.
  const Environment flat = sample_environment(DistributionSpec::point_mass(1), box, 0);
  CHECK(verify_pivotal_edge(flat, Vertex{0, 0}, Vertex{2, 0}, Edge({1, 0}, {2, 0})).pass);
}

TEST_CASE("verify: black box and detour conditions") {
  const NBox B = NBox::j_box(Vertex{0, 0}, 1, 2);
  const Environment ones = sample_environment(DistributionSpec::point_mass(1), B.region().expanded(2), 0);
  // delta1 = 0: condition (1) is vacuous; point mass meets (2) and (3).
  CHECK(verify_black_box(ones, B, 0, 10).pass);
  // Straight unit-weight crossings have t = F- |x - y| < (F- + delta1)|x - y|.
  const VerifyResult nb = verify_black_box(ones, B, Rational(1, 10), 10);
  CHECK_FALSE(nb.pass);
  CHECK(nb.witness.find("Cond1") != std::string::npos);

  const int n = 64;
  const NBox D = NBox::j_box(Vertex{0, 0}, 1, n);
  const Region r = D.region();
  const Vertex a{r.lo()[0] - 1, 30}, b{r.hi()[0] + 1, 30};
  std::vector<Vertex> v{a};
  while (!(v.back() == b)) v.push_back(v.back() + Vertex{1, 0});
  const VerifyResult res =
      verify_detour(LatticePath(v), a, b, D, n, DetourRegime::Long, Rational(1, 10), Rational(2));
  CHECK_FALSE(res.pass);
  CHECK(res.witness.rfind("condition (3)", 0) == 0);
}

TEST_CASE("command line exit codes") {
  const auto cfg = scratch("cfg.json");
  write_file(cfg.string(), kAtoms12);
  CHECK(run("--schema") == 0);
  CHECK(run("--config " + cfg.string() + " fpt --from 0,0 --to 5,0") == 0);
  CHECK(run("--config " + cfg.string() + " verify --subject path-optimality --path '(0,0) (1,0)'") == 0);
  CHECK(run("--config " + cfg.string() +
            " verify --subject path-optimality --path '(0,0) (0,1) (0,2) (1,2) (2,2) (2,1) (2,0)'") == 2);
  CHECK(run("--config /nonexistent.json fpt --from 0,0 --to 5,0") == 1);
  CHECK(run("--config " + cfg.string() + " verify --subject nonsense") == 1);
  CHECK(run("--bogus-flag") == 1);

  const auto out1 = scratch("run1"), out2 = scratch("run2");
  const auto small = scratch("small.json");
  write_file(small.string(), R"({
    "distribution": {"kind": "atoms", "atoms": [{"value": "1", "prob": "1/2"}, {"value": "2", "prob": "1/2"}]},
    "N_grid": [4, 6], "replicas": 5, "seed": 9
  })");
  CHECK(run("--config " + small.string() + " --threads 1 --out " + out1.string() + " experiment") == 0);
  CHECK(run("--config " + small.string() + " --threads 3 --out " + out2.string() + " experiment") == 0);
  for (const char* f : {"replicas.csv", "aggregate.json", "plot.tsv"}) {
    CHECK(slurp((out1 / f).string()) == slurp((out2 / f).string()));
    CHECK_FALSE(slurp((out1 / f).string()).empty());
  }
}
