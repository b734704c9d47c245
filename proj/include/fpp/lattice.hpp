#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpp {

inline constexpr int kMaxDim = 6;

// A point of Z^d, 2 <= d <= kMaxDim (d = 1 is allowed only for scratch use).
class Vertex {
 public:
  Vertex() = default;
  explicit Vertex(int dim);
  Vertex(std::initializer_list<int> coords);
  explicit Vertex(const std::vector<int>& coords);

  static Vertex unit(int dim, int axis, int sign = 1);

  int dim() const noexcept { return dim_; }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  Vertex& operator+=(const Vertex& o);
  Vertex& operator-=(const Vertex& o);
  friend Vertex operator+(Vertex a, const Vertex& b) { return a += b; }
  friend Vertex operator-(Vertex a, const Vertex& b) { return a -= b; }
  Vertex operator*(int k) const;

  friend bool operator==(const Vertex& a, const Vertex& b);
  // Lexicographic over coordinates.
  friend std::strong_ordering operator<=>(const Vertex& a, const Vertex& b);

 private:
  std::array<int, kMaxDim> c_{};
  int dim_ = 0;
};

int l1_norm(const Vertex& v);
int l1_distance(const Vertex& a, const Vertex& b);
int linf_distance(const Vertex& a, const Vertex& b);
// Returns the axis index of a unit step a->b, or nullopt when not L1-adjacent.
std::optional<int> step_axis(const Vertex& a, const Vertex& b);

std::string to_string(const Vertex& v);        // "(x,y,...)"
std::string to_csv_coords(const Vertex& v);    // "x,y,..."
Vertex parse_vertex(std::string_view text);    // accepts "(x,y)" or "x,y"

// Non-oriented nearest-neighbour edge; lo() < hi() lexicographically.
class Edge {
 public:
  Edge() = default;
  Edge(const Vertex& a, const Vertex& b);  // throws ValidationError unless adjacent

  const Vertex& lo() const noexcept { return lo_; }
  const Vertex& hi() const noexcept { return hi_; }
  int axis() const;
  bool touches(const Vertex& v) const { return v == lo_ || v == hi_; }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend std::strong_ordering operator<=>(const Edge& a, const Edge& b);

 private:
  Vertex lo_, hi_;
};

std::string to_string(const Edge& e);  // "(x,y) (x',y')"

// Axis-aligned box [lo_1,hi_1] x ... x [lo_d,hi_d], inclusive bounds.
// Linear indices enumerate vertices in lexicographic order.
class Region {
 public:
  Region() = default;
  Region(const Vertex& lo, const Vertex& hi);

  static Region bounding(const Vertex& a, const Vertex& b);
  static Region hull(const Region& a, const Region& b);

  int dim() const noexcept { return lo_.dim(); }
  const Vertex& lo() const noexcept { return lo_; }
  const Vertex& hi() const noexcept { return hi_; }
  bool empty() const noexcept { return empty_; }
  std::int64_t size() const noexcept { return size_; }
  int extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }

  bool contains(const Vertex& v) const;
  bool contains(const Region& r) const;
  bool intersects(const Region& r) const;
  Region expanded(int margin) const;

  std::int64_t index(const Vertex& v) const;  // v must be contained
  Vertex vertex(std::int64_t index) const;
  std::int64_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  // L-infinity depth of v inside the region: min over faces of the distance to
  // the complement, so inner-boundary vertices have depth 1; 0 outside.
  int depth(const Vertex& v) const;
  // Outer boundary: vertices outside adjacent to the region.
  bool on_outer_boundary(const Vertex& v) const;
  std::vector<Vertex> outer_boundary() const;

  friend bool operator==(const Region& a, const Region& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  Vertex lo_, hi_;
  std::array<std::int64_t, kMaxDim> stride_{};
  std::int64_t size_ = 0;
  bool empty_ = true;
};

std::string to_string(const Region& r);  // "lo..hi" with comma coordinates

}  // namespace fpp
