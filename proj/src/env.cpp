#include "fpp/env.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fpp/error.hpp"

namespace fpp {

namespace bmp = boost::multiprecision;

CriticalTable default_critical_table() {
  CriticalTable t;
  t[2].pc = Rational(1, 2);
  return t;
}

DistributionSpec DistributionSpec::point_mass(const Rational& value, int d) {
  return from_atoms({{value, Rational(1)}}, d);
}

DistributionSpec DistributionSpec::from_atoms(std::vector<Atom> atoms, int d) {
  DistributionSpec s;
  s.kind = Kind::Atoms;
  s.atoms = std::move(atoms);
  s.d = d;
  s.validate();
  return s;
}

DistributionSpec DistributionSpec::uniform_scaled_int(std::int64_t lo, std::int64_t hi, std::int64_t den, int d) {
  DistributionSpec s;
  s.kind = Kind::UniformScaledInt;
  s.range = {lo, hi, den};
  s.d = d;
  s.validate();
  return s;
}

void DistributionSpec::validate() const {
  if (d < 2 || d > kMaxDim) throw Error(ErrorKind::ValidationError, "dimension d must be in [2, " + std::to_string(kMaxDim) + "]");
  if (kind == Kind::Atoms) {
    if (atoms.empty()) throw Error(ErrorKind::ValidationError, "atom list is empty");
    Rational total = 0;
    std::set<Rational> seen;
    for (const auto& a : atoms) {
      if (a.value < 0) throw Error(ErrorKind::ValidationError, "negative atom value " + to_string(a.value));
      if (a.prob <= 0 || a.prob > 1) throw Error(ErrorKind::ValidationError, "atom probability out of (0,1]: " + to_string(a.prob));
      if (!seen.insert(a.value).second) throw Error(ErrorKind::ValidationError, "duplicate atom value " + to_string(a.value));
      total += a.prob;
    }
    if (total != 1) throw Error(ErrorKind::ValidationError, "atom probabilities sum to " + to_string(total) + ", not 1");
  } else {
    if (range.den <= 0) throw Error(ErrorKind::ValidationError, "uniform denominator must be positive");
    if (range.lo < 0) throw Error(ErrorKind::ValidationError, "uniform lower end must be non-negative");
    if (range.lo > range.hi) throw Error(ErrorKind::ValidationError, "uniform range has lo > hi");
  }
}

namespace {

// Number of k in [lo, hi] with k/den <= x.
std::int64_t uniform_count_le(const ScaledIntRange& r, const Rational& x) {
  BigInt num = bmp::numerator(x), den = bmp::denominator(x);
  // k <= x*den_r  <=>  k <= floor(num*den_r/den)
  BigInt lhs = num * r.den;
  BigInt fl = lhs / den;
  if (lhs < 0 && lhs % den != 0) fl -= 1;
  if (fl < r.lo) return 0;
  if (fl >= r.hi) return r.hi - r.lo + 1;
  return to_int64(fl) - r.lo + 1;
}

}  // namespace

Rational DistributionSpec::prob_eq(const Rational& x) const {
  if (kind == Kind::Atoms) {
    for (const auto& a : atoms) {
      if (a.value == x) return a.prob;
    }
    return 0;
  }
  Rational k = x * range.den;
  if (bmp::denominator(k) != 1) return 0;
  BigInt kk = bmp::numerator(k);
  if (kk < range.lo || kk > range.hi) return 0;
  return Rational(1, range.hi - range.lo + 1);
}

Rational DistributionSpec::prob_le(const Rational& x) const {
  if (kind == Kind::Atoms) {
    Rational p = 0;
    for (const auto& a : atoms) {
      if (a.value <= x) p += a.prob;
    }
    return p;
  }
  return Rational(uniform_count_le(range, x), range.hi - range.lo + 1);
}

Rational DistributionSpec::prob_lt(const Rational& x) const { return prob_le(x) - prob_eq(x); }

Rational DistributionSpec::f_minus() const {
  if (kind == Kind::Atoms) {
    Rational m = atoms.front().value;
    for (const auto& a : atoms) m = std::min(m, a.value);
    return m;
  }
  return Rational(range.lo, range.den);
}

std::optional<Rational> DistributionSpec::f_plus() const {
  if (kind == Kind::Atoms) {
    Rational m = atoms.front().value;
    for (const auto& a : atoms) m = std::max(m, a.value);
    return m;
  }
  return Rational(range.hi, range.den);
}

Rational DistributionSpec::mean() const {
  if (kind == Kind::Atoms) {
    Rational m = 0;
    for (const auto& a : atoms) m += a.value * a.prob;
    return m;
  }
  return Rational(BigInt(range.lo) + range.hi, BigInt(2) * range.den);
}

Rational DistributionSpec::median() const {
  const Rational half(1, 2);
  if (kind == Kind::Atoms) {
    std::vector<Atom> sorted = atoms;
    std::sort(sorted.begin(), sorted.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    Rational c = 0;
    for (const auto& a : sorted) {
      c += a.prob;
      if (c >= half) return a.value;
    }
    return sorted.back().value;
  }
  std::int64_t count = range.hi - range.lo + 1;
  std::int64_t k = range.lo + (count + 1) / 2 - 1;  // smallest k with (k-lo+1)/count >= 1/2
  return Rational(k, range.den);
}

Rational DistributionSpec::default_alpha() const {
  Rational top = *f_plus();
  if (kind == Kind::Atoms) {
    std::optional<Rational> best;
    for (const auto& a : atoms) {
      if (a.value < top && (!best || a.value > *best)) best = a.value;
    }
    return best.value_or(top);
  }
  return range.hi > range.lo ? Rational(range.hi - 1, range.den) : top;
}

std::int64_t DistributionSpec::common_denominator() const {
  if (kind == Kind::UniformScaledInt) return range.den;
  BigInt l = 1;
  for (const auto& a : atoms) l = lcm(l, bmp::denominator(a.value));
  return to_int64(l);
}

DerivedStats derived_stats(const DistributionSpec& spec) {
  Rational fm = spec.f_minus();
  return {fm, spec.f_plus(), spec.prob_le(fm)};
}

bool is_useful(const DistributionSpec& spec) {
  DerivedStats s = derived_stats(spec);
  auto it = spec.pc_table.find(spec.d);
  if (s.f_minus == 0) {
    if (it == spec.pc_table.end() || !it->second.pc) {
      throw Error(ErrorKind::MissingCriticalProbability, "no p_c for d=" + std::to_string(spec.d));
    }
    return s.f_at_f_minus < *it->second.pc;
  }
  if (it == spec.pc_table.end() || !it->second.directed_pc) {
    throw Error(ErrorKind::MissingCriticalProbability, "no directed p_c for d=" + std::to_string(spec.d));
  }
  return s.f_at_f_minus < *it->second.directed_pc;
}

Rational f_plus_m(const DistributionSpec& spec, const Rational& M) {
  auto fp = spec.f_plus();
  if (!fp) return M;
  if (spec.prob_eq(*fp) == 0) return *fp - 1 / (M * M);
  return *fp;
}

Rational f_minus_m(const DistributionSpec& spec, const Rational& M) {
  Rational fm = spec.f_minus();
  if (spec.prob_eq(fm) == 0) return fm + 1 / (M * M);
  return fm;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Counter-mode stream: splitmix64 seeded by a hash of (seed, edge coordinates).
class EdgeStream {
 public:
  explicit EdgeStream(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Exactly uniform on [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    for (;;) {
      std::uint64_t x = next();
      if (x <= limit) return x % bound;
    }
  }

 private:
  std::uint64_t state_;
};

std::uint64_t edge_key(std::uint64_t seed, const Vertex& lo, int axis) {
  std::uint64_t h = mix_seed(seed, 0xC0FFEEULL);
  for (int i = 0; i < lo.dim(); ++i) h = mix_seed(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(lo[i])));
  return mix_seed(h, static_cast<std::uint64_t>(axis));
}

class Sampler {
 public:
  Sampler(const DistributionSpec& spec, std::int64_t scale) : spec_(spec) {
    if (spec.kind == DistributionSpec::Kind::Atoms) {
      BigInt q = 1;
      for (const auto& a : spec.atoms) q = lcm(q, bmp::denominator(a.prob));
      if (q > (BigInt(1) << 62)) throw Error(ErrorKind::Overflow, "probability denominators too large to sample exactly");
      bound_ = static_cast<std::uint64_t>(to_int64(q));
      std::uint64_t c = 0;
      for (const auto& a : spec.atoms) {
        c += static_cast<std::uint64_t>(to_int64(bmp::numerator(Rational(a.prob * q))));
        cumulative_.push_back(c);
        Rational t = a.value * scale;
        ticks_.push_back(to_int64(bmp::numerator(t)));
      }
    } else {
      bound_ = static_cast<std::uint64_t>(spec.range.hi - spec.range.lo + 1);
      factor_ = scale / spec.range.den;
    }
  }

  std::int64_t draw(EdgeStream& s) const {
    std::uint64_t u = s.below(bound_);
    if (spec_.kind == DistributionSpec::Kind::Atoms) {
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      return ticks_[static_cast<std::size_t>(it - cumulative_.begin())];
    }
    return (spec_.range.lo + static_cast<std::int64_t>(u)) * factor_;
  }

 private:
  const DistributionSpec& spec_;
  std::uint64_t bound_ = 1;
  std::vector<std::uint64_t> cumulative_;
  std::vector<std::int64_t> ticks_;
  std::int64_t factor_ = 1;
};

}  // namespace

bool Environment::covers(const Edge& e) const { return box_.contains(e.lo()) || box_.contains(e.hi()); }

std::int64_t Environment::slot(const Edge& e) const {
  if (e.lo().dim() != dim() || !covers(e)) return -1;
  return storage_.index(e.lo()) * dim() + e.axis();
}

std::int64_t Environment::ticks(const Edge& e) const {
  std::int64_t s = slot(e);
  if (s < 0) throw Error(ErrorKind::EdgeOutOfBox, to_string(e) + " not in " + to_string(box_));
  return (*ticks_)[static_cast<std::size_t>(s)];
}

Weight Environment::weight(const Edge& e) const { return from_ticks(ticks(e)); }

Weight Environment::from_ticks(std::int64_t t) const {
  if (t == kBlockedTicks) return Weight::blocked();
  return Weight(Rational(t, scale_));
}

std::optional<std::int64_t> Environment::to_ticks(const Weight& w) const {
  if (w.is_blocked()) return kBlockedTicks;
  Rational t = w.value() * scale_;
  if (bmp::denominator(t) != 1) return std::nullopt;
  return to_int64(bmp::numerator(t));
}

std::vector<std::pair<Edge, Weight>> Environment::edges() const {
  std::vector<std::pair<Edge, Weight>> out;
  for (std::int64_t i = 0; i < storage_.size(); ++i) {
    Vertex v = storage_.vertex(i);
    for (int k = 0; k < dim(); ++k) {
      Vertex u = v + Vertex::unit(dim(), k);
      if (!box_.contains(v) && !box_.contains(u)) continue;
      out.emplace_back(Edge(v, u), from_ticks(ticks_at(i, k)));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::string Environment::dump() const {
  std::ostringstream os;
  os << dim() << ' ' << to_string(box_) << ' ' << seed_ << '\n';
  for (const auto& [e, w] : edges()) {
    os << to_csv_coords(e.lo()) << ' ' << to_csv_coords(e.hi()) << ' ' << to_string(w) << '\n';
  }
  return os.str();
}

bool operator==(const Environment& a, const Environment& b) {
  if (!(a.box_ == b.box_)) return false;
  if (a.scale_ == b.scale_ && a.ticks_ && b.ticks_) return *a.ticks_ == *b.ticks_;
  return a.edges() == b.edges();
}

Environment sample_environment(const DistributionSpec& spec, const Region& box, std::uint64_t seed) {
  return sample_environment(std::make_shared<const DistributionSpec>(spec), box, seed);
}

Environment sample_environment(std::shared_ptr<const DistributionSpec> spec, const Region& box, std::uint64_t seed) {
  spec->validate();
  if (box.empty()) throw Error(ErrorKind::ValidationError, "empty sampling box");
  if (box.dim() != spec->d) throw Error(ErrorKind::ValidationError, "box dimension differs from spec.d");
  Environment env;
  env.box_ = box;
  env.storage_ = box.expanded(1);
  env.spec_ = std::move(spec);
  env.seed_ = seed;
  env.scale_ = env.spec_->common_denominator();
  const int d = box.dim();
  Sampler sampler(*env.spec_, env.scale_);
  auto ticks = std::make_shared<std::vector<std::int64_t>>(static_cast<std::size_t>(env.storage_.size() * d), 0);
  for (std::int64_t i = 0; i < env.storage_.size(); ++i) {
    Vertex v = env.storage_.vertex(i);
    for (int k = 0; k < d; ++k) {
      Vertex u = v + Vertex::unit(d, k);
      if (!box.contains(v) && !box.contains(u)) continue;
      EdgeStream stream(edge_key(seed, v, k));
      (*ticks)[static_cast<std::size_t>(i * d + k)] = sampler.draw(stream);
    }
  }
  env.ticks_ = std::move(ticks);
  return env;
}

Environment rescaled(const Environment& env, std::int64_t new_scale) {
  if (new_scale == env.scale_) return env;
  if (new_scale % env.scale_ != 0) throw Error(ErrorKind::ValidationError, "rescale to a non-multiple scale");
  const std::int64_t f = new_scale / env.scale_;
  Environment out = env;
  out.scale_ = new_scale;
  auto ticks = std::make_shared<std::vector<std::int64_t>>(*env.ticks_);
  for (auto& t : *ticks) {
    if (t != Environment::kBlockedTicks) t = checked_mul(t, f);
  }
  out.ticks_ = std::move(ticks);
  return out;
}

Environment apply_overrides(const Environment& env, const std::vector<std::pair<Edge, Weight>>& pairs) {
  if (pairs.empty()) return env;
  BigInt scale = env.scale_;
  for (const auto& [e, w] : pairs) {
    if (!env.covers(e)) throw Error(ErrorKind::EdgeOutOfBox, to_string(e) + " not in " + to_string(env.box_));
    if (!w.is_blocked()) scale = lcm(scale, bmp::denominator(w.value()));
  }
  Environment out = rescaled(env, to_int64(scale));
  if (out.ticks_ == env.ticks_) out.ticks_ = std::make_shared<std::vector<std::int64_t>>(*env.ticks_);
  const Rational fm = env.spec().f_minus();
  for (const auto& [e, w] : pairs) {
    (*out.ticks_)[static_cast<std::size_t>(out.slot(e))] = *out.to_ticks(w);
    out.overrides_[e] = w;
    if (!w.is_blocked() && w.value() < fm) out.lowering_ = true;
  }
  return out;
}

}  // namespace fpp
