#include "fpp/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "fpp/boxes.hpp"
#include "fpp/error.hpp"
#include "fpp/geodesics.hpp"

namespace fpp {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::ParseError, "key '" + key + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      parse_fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

Rational get_rational(const json& j, const std::string& key) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      parse_fail(key, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  parse_fail(key, "expected a \"num/den\" string");
}

std::int64_t get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) parse_fail(key, "expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t get_u64(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  parse_fail(key, "expected a non-negative integer");
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) parse_fail(key, "expected true or false");
  return j.get<bool>();
}

DistributionSpec parse_distribution(const json& j, int d) {
  if (!j.is_object() || !j.contains("kind")) parse_fail("distribution", "expected an object with 'kind'");
  const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
  DistributionSpec spec;
  if (kind == "atoms") {
    reject_unknown(j, "distribution", {"kind", "atoms"});
    if (!j.contains("atoms") || !j.at("atoms").is_array()) parse_fail("distribution.atoms", "expected an array");
    std::vector<Atom> atoms;
    for (const json& a : j.at("atoms")) {
      reject_unknown(a, "distribution.atoms[]", {"value", "prob"});
      if (!a.contains("value") || !a.contains("prob")) parse_fail("distribution.atoms[]", "needs value and prob");
      atoms.push_back({get_rational(a.at("value"), "distribution.atoms[].value"),
                       get_rational(a.at("prob"), "distribution.atoms[].prob")});
    }
    spec.kind = DistributionSpec::Kind::Atoms;
    spec.atoms = std::move(atoms);
  } else if (kind == "uniform_scaled_int") {
    reject_unknown(j, "distribution", {"kind", "lo", "hi", "den"});
    for (const char* k : {"lo", "hi", "den"})
      if (!j.contains(k)) parse_fail(std::string("distribution.") + k, "missing");
    spec.kind = DistributionSpec::Kind::UniformScaledInt;
    spec.range = {get_int(j.at("lo"), "distribution.lo"), get_int(j.at("hi"), "distribution.hi"),
                  get_int(j.at("den"), "distribution.den")};
  } else {
    parse_fail("distribution.kind", "expected \"atoms\" or \"uniform_scaled_int\"");
  }
  spec.d = d;
  return spec;
}

ordered_json rational_json(const Rational& r) { return to_string(r); }

}  // namespace

ExperimentConfig parse_config_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  reject_unknown(j, "", {"d", "distribution", "critical", "N_grid", "replicas", "seed", "margin", "M", "beta",
                         "alpha", "n", "delta1", "k", "caps", "statistics"});
  if (!j.contains("distribution")) parse_fail("distribution", "missing");
  const int d = j.contains("d") ? static_cast<int>(get_int(j.at("d"), "d")) : 2;
  DistributionSpec spec = parse_distribution(j.at("distribution"), d);

  if (j.contains("critical")) {
    const json& c = j.at("critical");
    if (!c.is_object()) parse_fail("critical", "expected an object keyed by dimension");
    for (const auto& [key, entry] : c.items()) {
      int dim = 0;
      try {
        std::size_t used = 0;
        dim = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        parse_fail("critical." + key, "dimension keys must be integers");
      }
      reject_unknown(entry, "critical." + key, {"pc", "directed_pc"});
      CriticalProbabilities cp;
      if (entry.contains("pc")) cp.pc = get_rational(entry.at("pc"), "critical." + key + ".pc");
      if (entry.contains("directed_pc"))
        cp.directed_pc = get_rational(entry.at("directed_pc"), "critical." + key + ".directed_pc");
      spec.pc_table[dim] = cp;
    }
  }
  spec.validate();

  ExperimentConfig cfg = default_config(spec);
  if (j.contains("N_grid")) {
    if (!j.at("N_grid").is_array()) parse_fail("N_grid", "expected an array");
    cfg.N_grid.clear();
    for (const json& x : j.at("N_grid")) cfg.N_grid.push_back(static_cast<int>(get_int(x, "N_grid[]")));
  }
  if (j.contains("replicas")) cfg.replicas = static_cast<int>(get_int(j.at("replicas"), "replicas"));
  if (j.contains("seed")) cfg.seed = get_u64(j.at("seed"), "seed");
  if (j.contains("margin")) {
    const json& m = j.at("margin");
    if (m.is_string() && m.get<std::string>() == "certified")
      cfg.fixed_margin.reset();
    else
      cfg.fixed_margin = get_int(m, "margin");
  }
  if (j.contains("M")) cfg.M = get_rational(j.at("M"), "M");
  cfg.beta = j.contains("beta") ? get_rational(j.at("beta"), "beta") : Rational(1) / (cfg.M * cfg.M);
  if (j.contains("alpha")) cfg.alpha = get_rational(j.at("alpha"), "alpha");
  if (j.contains("n")) cfg.n = static_cast<int>(get_int(j.at("n"), "n"));
  if (j.contains("delta1")) cfg.delta1 = get_rational(j.at("delta1"), "delta1");
  if (j.contains("k")) cfg.k = static_cast<int>(get_int(j.at("k"), "k"));
  if (j.contains("caps")) {
    const json& c = j.at("caps");
    reject_unknown(c, "caps", {"enumeration", "sample_paths", "attached_prefixes", "attached_optimizers"});
    if (c.contains("enumeration")) cfg.caps.enumeration = get_u64(c.at("enumeration"), "caps.enumeration");
    if (c.contains("sample_paths")) cfg.caps.sample_paths = get_u64(c.at("sample_paths"), "caps.sample_paths");
    if (c.contains("attached_prefixes"))
      cfg.caps.attached_prefixes = get_u64(c.at("attached_prefixes"), "caps.attached_prefixes");
    if (c.contains("attached_optimizers"))
      cfg.caps.attached_optimizers = get_u64(c.at("attached_optimizers"), "caps.attached_optimizers");
  }
  if (j.contains("statistics")) {
    const json& s = j.at("statistics");
    reject_unknown(s, "statistics", {"count", "enumerate", "attached", "pivotal_check", "gray"});
    if (s.contains("count")) cfg.toggles.count = get_bool(s.at("count"), "statistics.count");
    if (s.contains("enumerate")) cfg.toggles.enumerate = get_bool(s.at("enumerate"), "statistics.enumerate");
    if (s.contains("attached")) cfg.toggles.attached = get_bool(s.at("attached"), "statistics.attached");
    if (s.contains("pivotal_check"))
      cfg.toggles.pivotal_check = get_bool(s.at("pivotal_check"), "statistics.pivotal_check");
    if (s.contains("gray")) cfg.toggles.gray = get_bool(s.at("gray"), "statistics.gray");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  ordered_json j;
  j["d"] = cfg.spec.d;
  ordered_json dist;
  if (cfg.spec.kind == DistributionSpec::Kind::Atoms) {
    dist["kind"] = "atoms";
    ordered_json atoms = ordered_json::array();
    for (const Atom& a : cfg.spec.atoms) atoms.push_back({{"value", to_string(a.value)}, {"prob", to_string(a.prob)}});
    dist["atoms"] = atoms;
  } else {
    dist["kind"] = "uniform_scaled_int";
    dist["lo"] = cfg.spec.range.lo;
    dist["hi"] = cfg.spec.range.hi;
    dist["den"] = cfg.spec.range.den;
  }
  j["distribution"] = dist;
  ordered_json crit = ordered_json::object();
  for (const auto& [dim, cp] : cfg.spec.pc_table) {
    ordered_json e = ordered_json::object();
    if (cp.pc) e["pc"] = to_string(*cp.pc);
    if (cp.directed_pc) e["directed_pc"] = to_string(*cp.directed_pc);
    crit[std::to_string(dim)] = e;
  }
  j["critical"] = crit;
  j["N_grid"] = cfg.N_grid;
  j["replicas"] = cfg.replicas;
  j["seed"] = cfg.seed;
  j["margin"] = cfg.fixed_margin ? ordered_json(*cfg.fixed_margin) : ordered_json("certified");
  j["M"] = rational_json(cfg.M);
  j["beta"] = rational_json(cfg.beta);
  j["alpha"] = rational_json(cfg.alpha);
  j["n"] = cfg.n;
  j["delta1"] = rational_json(cfg.delta1);
  j["k"] = cfg.k;
  j["caps"] = {{"enumeration", cfg.caps.enumeration},
               {"sample_paths", cfg.caps.sample_paths},
               {"attached_prefixes", cfg.caps.attached_prefixes},
               {"attached_optimizers", cfg.caps.attached_optimizers}};
  j["statistics"] = {{"count", cfg.toggles.count},
                     {"enumerate", cfg.toggles.enumerate},
                     {"attached", cfg.toggles.attached},
                     {"pivotal_check", cfg.toggles.pivotal_check},
                     {"gray", cfg.toggles.gray}};
  return j.dump(2) + "\n";
}

std::string config_schema() {
  static const char* kSchema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "fpp experiment config",
  "type": "object",
  "additionalProperties": false,
  "required": ["distribution"],
  "$defs": {
    "rational": {
      "oneOf": [
        {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"},
        {"type": "integer"}
      ]
    },
    "cap": {"type": "integer", "minimum": 1}
  },
  "properties": {
    "d": {"type": "integer", "minimum": 2, "maximum": 6, "default": 2},
    "distribution": {
      "oneOf": [
        {
          "type": "object",
          "additionalProperties": false,
          "required": ["kind", "atoms"],
          "properties": {
            "kind": {"const": "atoms"},
            "atoms": {
              "type": "array",
              "minItems": 1,
              "items": {
                "type": "object",
                "additionalProperties": false,
                "required": ["value", "prob"],
                "properties": {"value": {"$ref": "#/$defs/rational"}, "prob": {"$ref": "#/$defs/rational"}}
              }
            }
          }
        },
        {
          "type": "object",
          "additionalProperties": false,
          "required": ["kind", "lo", "hi", "den"],
          "properties": {
            "kind": {"const": "uniform_scaled_int"},
            "lo": {"type": "integer", "minimum": 0},
            "hi": {"type": "integer"},
            "den": {"type": "integer", "minimum": 1}
          }
        }
      ]
    },
    "critical": {
      "type": "object",
      "patternProperties": {
        "^[0-9]+$": {
          "type": "object",
          "additionalProperties": false,
          "properties": {"pc": {"$ref": "#/$defs/rational"}, "directed_pc": {"$ref": "#/$defs/rational"}}
        }
      },
      "additionalProperties": false
    },
    "N_grid": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
    "replicas": {"type": "integer", "minimum": 1, "default": 100},
    "seed": {"type": "integer", "minimum": 0, "default": 1},
    "margin": {"oneOf": [{"const": "certified"}, {"type": "integer", "minimum": 0}], "default": "certified"},
    "M": {"$ref": "#/$defs/rational", "default": "10/1"},
    "beta": {"$ref": "#/$defs/rational", "description": "default M^-2"},
    "alpha": {"$ref": "#/$defs/rational", "description": "default: largest support point below F+"},
    "n": {"type": "integer", "minimum": 1, "default": 4},
    "delta1": {"$ref": "#/$defs/rational", "default": "0/1"},
    "k": {"type": "integer", "minimum": 1, "default": 2},
    "caps": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "enumeration": {"$ref": "#/$defs/cap"},
        "sample_paths": {"$ref": "#/$defs/cap"},
        "attached_prefixes": {"$ref": "#/$defs/cap"},
        "attached_optimizers": {"$ref": "#/$defs/cap"}
      }
    },
    "statistics": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "count": {"type": "boolean"},
        "enumerate": {"type": "boolean"},
        "attached": {"type": "boolean"},
        "pivotal_check": {"type": "boolean"},
        "gray": {"type": "boolean"}
      }
    }
  }
}
)";
  return kSchema;
}

Region parse_region(std::string_view text) {
  const std::size_t dots = text.find("..");
  if (dots == std::string_view::npos) throw Error(ErrorKind::ParseError, "region needs 'lo..hi': " + std::string(text));
  const Vertex lo = parse_vertex(text.substr(0, dots));
  const Vertex hi = parse_vertex(text.substr(dots + 2));
  if (lo.dim() != hi.dim()) throw Error(ErrorKind::ParseError, "region corners differ in dimension");
  return Region(lo, hi);
}

std::string plot_data(const AggregateReport& report) {
  std::vector<std::tuple<int, std::string, const Estimate*>> rows;
  for (const PerN& p : report.per_N)
    for (const auto& [name, e] : p.stats) rows.emplace_back(p.N, name, &e);
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::ostringstream os;
  os << "N\tstatistic\tmean\tci_lo\tci_hi\n";
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.*f", report.precision, x);
    return std::string(buf);
  };
  for (const auto& [N, name, e] : rows)
    os << N << '\t' << name << '\t' << num(e->mean) << '\t' << num(e->ci_lo) << '\t' << num(e->ci_hi) << '\n';
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

void emit_plot_data(const AggregateReport& report, const std::string& path) { write_file(path, plot_data(report)); }

VerifyResult verify_path_optimality(const Environment& env, const LatticePath& p) {
  if (p.empty()) throw Error(ErrorKind::ValidationError, "empty path");
  const Weight own = passage_time(env, p);
  const FptResult best = first_passage_time(env, p.front(), p.back());
  if (best.value < own) {
    return {false, "faster path with time " + to_string(best.value) + " < " + to_string(own) + ": " +
                       to_string(best.one_geodesic)};
  }
  if (!p.self_avoiding()) return {false, "path is not self-avoiding"};
  return {true, ""};
}

VerifyResult verify_pivotal_edge(const Environment& env, const Vertex& v, const Vertex& w, const Edge& e) {
  const Weight t = first_passage_time(env, v, w).value;
  const Environment cut = apply_overrides(env, {{e, Weight::blocked()}});
  try {
    const FptResult without = first_passage_time(cut, v, w);
    if (without.value == t) return {false, "geodesic avoiding the edge: " + to_string(without.one_geodesic)};
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::Disconnected) throw;
  }
  return {true, ""};
}

VerifyResult verify_black_box(const Environment& env, const NBox& B, const Rational& delta1, const Rational& M) {
  const BoxClassification c = classify_black(env, B, delta1, M);
  if (c.black) return {true, ""};
  std::string w = c.failing_condition ? to_string(*c.failing_condition) : std::string("not black");
  if (!c.witness.empty()) w += ": " + c.witness;
  return {false, w};
}

VerifyResult verify_detour(const LatticePath& p, const Vertex& a, const Vertex& b, const NBox& B, int n,
                           DetourRegime regime, const Rational& delta1, const std::optional<Rational>& f_plus) {
  if (regime == DetourRegime::Degenerate)
    throw Error(ErrorKind::ValidationError, "the degenerate regime has no conditions to verify");
  const DetourReport rep = regime == DetourRegime::Short ? check_short_conditions(p, a, b, B, n)
                                                         : check_detour_conditions(p, a, b, B, n, delta1, f_plus);
  if (rep.all_pass()) return {true, ""};
  const ConditionResult* f = rep.first_failure();
  return {false, "condition (" + std::to_string(f->index) + "): " + f->witness};
}

}  // namespace fpp
