#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "fpp/boxes.hpp"
#include "fpp/cli.hpp"
#include "fpp/detour.hpp"
#include "fpp/error.hpp"
#include "fpp/experiments.hpp"
#include "fpp/geodesics.hpp"

namespace {

using namespace fpp;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::optional<std::uint64_t> cap;
};

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg;
  if (c.config.empty()) {
    cfg = default_config(DistributionSpec::from_atoms({{Rational(1), Rational(1, 2)}, {Rational(2), Rational(1, 2)}}));
  } else {
    cfg = parse_config(c.config);
  }
  if (c.seed) cfg.seed = *c.seed;
  if (c.cap) cfg.caps.enumeration = *c.cap;
  return cfg;
}

// Writes to out/name when --out is set, otherwise to stdout.
void emit(const Common& c, const std::string& name, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(c.out);
  write_file((std::filesystem::path(c.out) / name).string(), content);
}

std::shared_ptr<const DistributionSpec> spec_of(const ExperimentConfig& cfg) {
  return std::make_shared<const DistributionSpec>(cfg.spec);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string edge_list(const std::set<Edge>& edges) {
  std::ostringstream os;
  for (const Edge& e : edges) os << "  " << to_string(e) << '\n';
  return os.str();
}

int cmd_sample(const Common& c, const std::string& box) {
  const ExperimentConfig cfg = load(c);
  const Environment env = sample_environment(cfg.spec, parse_region(box), cfg.seed);
  emit(c, "env.txt", env.dump());
  return 0;
}

int cmd_fpt(const Common& c, const std::string& from, const std::string& to) {
  const ExperimentConfig cfg = load(c);
  const Vertex v = parse_vertex(from), w = parse_vertex(to);
  const CertifiedEnvironment ce = sample_certified(spec_of(cfg), v, w, cfg.seed);
  const FptResult r = first_passage_time(ce.env, v, w);
  std::ostringstream os;
  os << "t " << to_string(r.value) << '\n'
     << "certified " << yes_no(ce.certified) << '\n'
     << "box " << to_string(ce.env.box()) << '\n'
     << "geodesic " << to_string(r.one_geodesic) << '\n';
  emit(c, "fpt.txt", os.str());
  return 0;
}

int cmd_geodesics(const Common& c, const std::string& from, const std::string& to) {
  const ExperimentConfig cfg = load(c);
  const Vertex v = parse_vertex(from), w = parse_vertex(to);
  const CertifiedEnvironment ce = sample_certified(spec_of(cfg), v, w, cfg.seed);
  std::ostringstream os;
  os << "t " << to_string(first_passage_time(ce.env, v, w).value) << '\n';
  os << "certified " << yes_no(ce.certified) << '\n';
  try {
    const GeodesicDag dag(ce.env, v, w);
    os << "count " << dag.count() << '\n' << "saturated no\n";
    os << "union " << dag.union_edges().size() << '\n' << edge_list(dag.union_edges());
    os << "pivotal " << dag.pivotal_edges().size() << '\n' << edge_list(dag.pivotal_edges());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroWeightPresent) throw;
    const GeodesicSet g = enumerate_geodesics(ce.env, v, w, {cfg.caps.enumeration, cfg.caps.sample_paths});
    os << "count " << g.count << '\n' << "saturated " << yes_no(g.saturated) << '\n';
    os << "union " << g.union_edges.size() << '\n' << edge_list(g.union_edges);
    os << "pivotal " << g.pivotal_edges.size() << '\n' << edge_list(g.pivotal_edges);
  }
  emit(c, "geodesics.txt", os.str());
  return 0;
}

int cmd_boxes(const Common& c, std::optional<int> N_opt) {
  const ExperimentConfig cfg = load(c);
  const auto spec = spec_of(cfg);
  const int N = N_opt ? *N_opt : cfg.N_grid.front();
  const Vertex v(spec->d);
  const Vertex w = Vertex::unit(spec->d, 0) * N;
  CertifiedEnvironment ce = sample_certified(spec, v, w, cfg.seed);

  std::optional<GeodesicDag> dag;
  std::optional<GeodesicSet> geos;
  std::set<Edge> uni;
  try {
    dag.emplace(ce.env, v, w);
    uni = dag->union_edges();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroWeightPresent) throw;
    geos = enumerate_geodesics(ce.env, v, w, {cfg.caps.enumeration, cfg.caps.sample_paths});
    uni = geos->union_edges;
  }
  Region hull = Region::bounding(v, w);
  for (const Edge& e : uni) hull = Region::hull(hull, Region::bounding(e.lo(), e.hi()));
  const std::vector<NBox> boxes = j_boxes_meeting(hull, cfg.n);
  Region cover = hull;
  for (const NBox& B : boxes)
    cover = Region::hull(cover, B.region().expanded(static_cast<int>(black_margin(*spec, B, cfg.delta1))));
  const Environment env = sample_certified(spec, v, w, cfg.seed, cover).env;

  std::ostringstream os;
  os << "l,j,n,black,white,gray,failing_condition\n";
  for (const NBox& B : boxes) {
    BoxClassification k = classify_black(env, B, cfg.delta1, cfg.M);
    k = dag ? classify_white_gray(B, *dag, k) : classify_white_gray(B, *geos, k);
    std::string l = to_csv_coords(B.l);
    for (char& ch : l)
      if (ch == ',') ch = ';';
    auto tri = [](const std::optional<bool>& b) { return b ? std::string(*b ? "1" : "0") : std::string("NA"); };
    os << l << ',' << B.j << ',' << B.n << ',' << (k.black ? 1 : 0) << ',' << tri(k.white) << ',' << tri(k.gray) << ','
       << (k.failing_condition ? to_string(*k.failing_condition) : std::string("NA")) << '\n';
  }
  emit(c, "boxes.csv", os.str());
  return 0;
}

DetourRegime parse_regime(const std::string& s, const Vertex& a, const Vertex& b, const ExperimentConfig& cfg) {
  if (s == "long") return DetourRegime::Long;
  if (s == "short") return DetourRegime::Short;
  if (s == "degenerate") return DetourRegime::Degenerate;
  if (s == "auto") return select_regime(a, b, cfg.n, cfg.delta1, cfg.spec.f_plus());
  throw Error(ErrorKind::ParseError, "unknown regime '" + s + "'");
}

NBox parse_box(const std::string& l, int j, int n) { return NBox::j_box(parse_vertex(l), j, n); }

int cmd_detour(const Common& c, const std::string& l, int j, const std::string& a_s, const std::string& b_s,
               const std::string& regime_s) {
  const ExperimentConfig cfg = load(c);
  const NBox B = parse_box(l, j, cfg.n);
  const Vertex a = parse_vertex(a_s), b = parse_vertex(b_s);
  const DetourRegime regime = parse_regime(regime_s, a, b, cfg);
  const LatticePath p = construct_detour_path(a, b, B, cfg.n, regime);
  std::ostringstream os;
  os << "regime " << to_string(regime) << '\n' << "path " << to_string(p) << '\n';
  if (regime != DetourRegime::Degenerate) {
    const DetourReport rep = regime == DetourRegime::Short
                                 ? check_short_conditions(p, a, b, B, cfg.n)
                                 : check_detour_conditions(p, a, b, B, cfg.n, cfg.delta1, cfg.spec.f_plus());
    os << "condition\tresult\twitness\n";
    for (const ConditionResult& r : rep.conditions)
      os << r.index << '\t' << (r.pass ? "pass" : (r.flagged ? "flagged" : "fail")) << '\t' << r.witness << '\n';
  }
  emit(c, "detour.txt", os.str());
  return 0;
}

int cmd_experiment(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const SuiteResult res = theorem_suite(cfg, c.threads);
  const std::string dir = c.out.empty() ? "." : c.out;
  std::filesystem::create_directories(dir);
  write_file((std::filesystem::path(dir) / "replicas.csv").string(), replicas_csv(res.replicas));
  write_file((std::filesystem::path(dir) / "aggregate.json").string(), aggregate_json(res.report, res.verdicts));
  emit_plot_data(res.report, (std::filesystem::path(dir) / "plot.tsv").string());
  for (const Verdict& v : res.verdicts) std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << '\n';
  return 0;
}

struct VerifyArgs {
  std::string subject, path, from, to, edge, l, a, b, regime = "auto";
  int j = 1;
};

int cmd_verify(const Common& c, const VerifyArgs& va) {
  const ExperimentConfig cfg = load(c);
  const auto spec = spec_of(cfg);
  VerifyResult r;
  if (va.subject == "path-optimality") {
    const LatticePath p = parse_path(va.path);
    const CertifiedEnvironment ce = sample_certified(spec, p.front(), p.back(), cfg.seed,
                                                     Region::bounding(p.front(), p.back()));
    Region hull = ce.env.box();
    for (const Vertex& x : p.vertices()) hull = Region::hull(hull, Region::bounding(x, x));
    const Environment env = sample_environment(spec, hull, cfg.seed);
    r = verify_path_optimality(env, p);
  } else if (va.subject == "pivotal-edge") {
    const Vertex v = parse_vertex(va.from), w = parse_vertex(va.to);
    const LatticePath ep = parse_path(va.edge);
    if (ep.size() != 2) throw Error(ErrorKind::ParseError, "edge needs two vertices");
    r = verify_pivotal_edge(sample_certified(spec, v, w, cfg.seed).env, v, w, Edge(ep[0], ep[1]));
  } else if (va.subject == "black-box") {
    const NBox B = parse_box(va.l, va.j, cfg.n);
    const Region cover = B.region().expanded(static_cast<int>(black_margin(*spec, B, cfg.delta1)));
    r = verify_black_box(sample_environment(spec, cover, cfg.seed), B, cfg.delta1, cfg.M);
  } else if (va.subject == "detour-conditions") {
    const NBox B = parse_box(va.l, va.j, cfg.n);
    const Vertex a = parse_vertex(va.a), b = parse_vertex(va.b);
    r = verify_detour(parse_path(va.path), a, b, B, cfg.n, parse_regime(va.regime, a, b, cfg), cfg.delta1,
                      cfg.spec.f_plus());
  } else {
    throw Error(ErrorKind::ParseError, "unknown subject '" + va.subject + "'");
  }
  std::cout << (r.pass ? "PASS" : "FAIL") << ' ' << va.subject << '\n';
  if (!r.pass) std::cout << "witness " << r.witness << '\n';
  return r.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-passage percolation geodesic toolkit"};
  app.require_subcommand(0, 1);
  Common c;
  bool schema = false;
  app.add_option("--config", c.config, "Experiment config (JSON)");
  app.add_option("--seed", c.seed, "Override the config seed");
  app.add_option("--out", c.out, "Output directory");
  app.add_option("--threads", c.threads, "Worker threads for experiments")->check(CLI::PositiveNumber);
  app.add_option("--cap", c.cap, "Geodesic enumeration cap");
  app.add_flag("--schema", schema, "Print the config JSON schema and exit");

  std::string box, from, to, l, a, b, regime = "auto";
  int j = 1;
  std::optional<int> N;
  VerifyArgs va;

  auto* sample = app.add_subcommand("sample", "Dump a sampled environment");
  sample->add_option("--box", box, "Region lo..hi")->required();
  auto* fpt = app.add_subcommand("fpt", "First passage time on a certified box");
  auto* geo = app.add_subcommand("geodesics", "Geodesic count, union and pivotal edges");
  for (auto* s : {fpt, geo}) {
    s->add_option("--from", from, "Start vertex")->required();
    s->add_option("--to", to, "End vertex")->required();
  }
  auto* boxes = app.add_subcommand("boxes", "Classify the JBoxes meeting the geodesics from 0 to N e1");
  boxes->add_option("--N", N, "Endpoint distance (default: first of N_grid)");
  auto* detour = app.add_subcommand("detour", "Construct and check a planted detour path");
  detour->add_option("--l", l, "Box label")->required();
  detour->add_option("--j", j, "Signed axis label")->required();
  detour->add_option("--a", a, "Entry point")->required();
  detour->add_option("--b", b, "Exit point")->required();
  detour->add_option("--regime", regime, "auto|long|short|degenerate");
  auto* experiment = app.add_subcommand("experiment", "Run the replica grid and write CSV, JSON and plot data");
  auto* verify = app.add_subcommand("verify", "Check a claim and print a witness on failure");
  verify->add_option("--subject", va.subject, "path-optimality|pivotal-edge|black-box|detour-conditions")
      ->required();
  verify->add_option("--path", va.path, "Path as vertex tuples");
  verify->add_option("--from", va.from, "Start vertex");
  verify->add_option("--to", va.to, "End vertex");
  verify->add_option("--edge", va.edge, "Edge as two vertex tuples");
  verify->add_option("--l", va.l, "Box label");
  verify->add_option("--j", va.j, "Signed axis label");
  verify->add_option("--a", va.a, "Entry point");
  verify->add_option("--b", va.b, "Exit point");
  verify->add_option("--regime", va.regime, "auto|long|short");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (schema) {
      std::cout << config_schema();
      return 0;
    }
    if (sample->parsed()) return cmd_sample(c, box);
    if (fpt->parsed()) return cmd_fpt(c, from, to);
    if (geo->parsed()) return cmd_geodesics(c, from, to);
    if (boxes->parsed()) return cmd_boxes(c, N);
    if (detour->parsed()) return cmd_detour(c, l, j, a, b, regime);
    if (experiment->parsed()) return cmd_experiment(c);
    if (verify->parsed()) return cmd_verify(c, va);
    std::cout << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fpp: " << e.what() << '\n';
    return 1;
  }
}
