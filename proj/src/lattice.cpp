#include "fpp/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "fpp/error.hpp"

namespace fpp {

Vertex::Vertex(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::ValidationError, "dimension out of range");
}

Vertex::Vertex(std::initializer_list<int> coords) : Vertex(static_cast<int>(coords.size())) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Vertex::Vertex(const std::vector<int>& coords) : Vertex(static_cast<int>(coords.size())) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Vertex Vertex::unit(int dim, int axis, int sign) {
  Vertex v(dim);
  v[axis] = sign;
  return v;
}

Vertex& Vertex::operator+=(const Vertex& o) {
  for (int i = 0; i < dim_; ++i) (*this)[i] += o[i];
  return *this;
}

Vertex& Vertex::operator-=(const Vertex& o) {
  for (int i = 0; i < dim_; ++i) (*this)[i] -= o[i];
  return *this;
}

Vertex Vertex::operator*(int k) const {
  Vertex out = *this;
  for (int i = 0; i < dim_; ++i) out[i] *= k;
  return out;
}

bool operator==(const Vertex& a, const Vertex& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const Vertex& a, const Vertex& b) {
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  for (int i = 0; i < a.dim_; ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

int l1_norm(const Vertex& v) {
  int s = 0;
  for (int i = 0; i < v.dim(); ++i) s += std::abs(v[i]);
  return s;
}

int l1_distance(const Vertex& a, const Vertex& b) { return l1_norm(a - b); }

int linf_distance(const Vertex& a, const Vertex& b) {
  int m = 0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::optional<int> step_axis(const Vertex& a, const Vertex& b) {
  if (a.dim() != b.dim() || l1_distance(a, b) != 1) return std::nullopt;
  for (int i = 0; i < a.dim(); ++i) {
    if (a[i] != b[i]) return i;
  }
  return std::nullopt;
}

std::string to_csv_coords(const Vertex& v) {
  std::string s;
  for (int i = 0; i < v.dim(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string to_string(const Vertex& v) { return "(" + to_csv_coords(v) + ")"; }

Vertex parse_vertex(std::string_view text) {
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw Error(ErrorKind::ParseError, "unbalanced vertex '" + std::string(text) + "'");
    text = text.substr(1, text.size() - 2);
  }
  std::vector<int> coords;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (tok.empty()) throw Error(ErrorKind::ParseError, "empty coordinate in '" + std::string(text) + "'");
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(std::string(tok), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Error(ErrorKind::ParseError, "bad coordinate '" + std::string(tok) + "'");
    coords.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxDim)) {
    throw Error(ErrorKind::ParseError, "bad vertex '" + std::string(text) + "'");
  }
  return Vertex(coords);
}

Edge::Edge(const Vertex& a, const Vertex& b) {
  if (!step_axis(a, b)) {
    throw Error(ErrorKind::ValidationError, "edge endpoints not adjacent: " + to_string(a) + " " + to_string(b));
  }
  if (a < b) {
    lo_ = a;
    hi_ = b;
  } else {
    lo_ = b;
    hi_ = a;
  }
}

int Edge::axis() const { return *step_axis(lo_, hi_); }

std::strong_ordering operator<=>(const Edge& a, const Edge& b) {
  if (auto c = a.lo_ <=> b.lo_; c != 0) return c;
  return a.hi_ <=> b.hi_;
}

std::string to_string(const Edge& e) { return to_string(e.lo()) + " " + to_string(e.hi()); }

Region::Region(const Vertex& lo, const Vertex& hi) : lo_(lo), hi_(hi) {
  if (lo.dim() != hi.dim()) throw Error(ErrorKind::ValidationError, "region corner dimensions differ");
  empty_ = false;
  for (int i = 0; i < lo.dim(); ++i) {
    if (hi[i] < lo[i]) empty_ = true;
  }
  if (empty_) {
    size_ = 0;
    return;
  }
  std::int64_t s = 1;
  for (int i = lo.dim() - 1; i >= 0; --i) {
    stride_[static_cast<std::size_t>(i)] = s;
    s *= extent(i);
  }
  size_ = s;
}

Region Region::bounding(const Vertex& a, const Vertex& b) {
  Vertex lo(a.dim()), hi(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::min(a[i], b[i]);
    hi[i] = std::max(a[i], b[i]);
  }
  return Region(lo, hi);
}

Region Region::hull(const Region& a, const Region& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Vertex lo(a.dim()), hi(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::min(a.lo_[i], b.lo_[i]);
    hi[i] = std::max(a.hi_[i], b.hi_[i]);
  }
  return Region(lo, hi);
}

bool Region::contains(const Vertex& v) const {
  if (empty_ || v.dim() != dim()) return false;
  for (int i = 0; i < v.dim(); ++i) {
    if (v[i] < lo_[i] || v[i] > hi_[i]) return false;
  }
  return true;
}

bool Region::contains(const Region& r) const {
  if (r.empty()) return true;
  return contains(r.lo_) && contains(r.hi_);
}

bool Region::intersects(const Region& r) const {
  if (empty_ || r.empty_) return false;
  for (int i = 0; i < dim(); ++i) {
    if (r.hi_[i] < lo_[i] || r.lo_[i] > hi_[i]) return false;
  }
  return true;
}

Region Region::expanded(int margin) const {
  Vertex lo = lo_, hi = hi_;
  for (int i = 0; i < dim(); ++i) {
    lo[i] -= margin;
    hi[i] += margin;
  }
  return Region(lo, hi);
}

std::int64_t Region::index(const Vertex& v) const {
  std::int64_t idx = 0;
  for (int i = 0; i < dim(); ++i) idx += (v[i] - lo_[i]) * stride(i);
  return idx;
}

Vertex Region::vertex(std::int64_t index) const {
  Vertex v(dim());
  for (int i = 0; i < dim(); ++i) {
    v[i] = lo_[i] + static_cast<int>(index / stride(i));
    index %= stride(i);
  }
  return v;
}

int Region::depth(const Vertex& v) const {
  if (!contains(v)) return 0;
  int d = std::numeric_limits<int>::max();
  for (int i = 0; i < dim(); ++i) {
    d = std::min({d, v[i] - lo_[i] + 1, hi_[i] - v[i] + 1});
  }
  return d;
}

bool Region::on_outer_boundary(const Vertex& v) const {
  if (empty_ || contains(v)) return false;
  int out_axes = 0;
  for (int i = 0; i < dim(); ++i) {
    if (v[i] == lo_[i] - 1 || v[i] == hi_[i] + 1) {
      ++out_axes;
    } else if (v[i] < lo_[i] || v[i] > hi_[i]) {
      return false;
    }
  }
  return out_axes == 1;
}

std::vector<Vertex> Region::outer_boundary() const {
  std::vector<Vertex> out;
  Region shell = expanded(1);
  for (std::int64_t i = 0; i < shell.size(); ++i) {
    Vertex v = shell.vertex(i);
    if (on_outer_boundary(v)) out.push_back(v);
  }
  return out;
}

std::string to_string(const Region& r) { return to_csv_coords(r.lo()) + ".." + to_csv_coords(r.hi()); }

}  // namespace fpp
