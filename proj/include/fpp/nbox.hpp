#pragma once

#include <string>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

// One member of the cube system at scale n:
//   SCube  S(l;n) = {v : n l_i <= v_i < n(l_i+1)}
//   TCube  T(l;n) = {v : n l_i - n <= v_i <= n(l_i+2)}
//   JBox   B^j(l;n) = T(l;n) ∩ T(l + 2 sgn(j) e_|j|; n)
// j is a signed 1-based axis label, 0 for S and T cubes.
struct NBox {
  enum class Kind { SCube, TCube, JBox };

  Kind kind = Kind::SCube;
  Vertex l;
  int j = 0;
  int n = 1;

  static NBox s_cube(const Vertex& l, int n);
  static NBox t_cube(const Vertex& l, int n);
  static NBox j_box(const Vertex& l, int j, int n);

  int dim() const { return l.dim(); }
  Region region() const;
  int short_axis() const;  // |j| - 1; throws WrongKind unless JBox

  friend bool operator==(const NBox&, const NBox&) = default;
};

std::string to_string(const NBox& b);

// The 2d boxes B^{±i}(l;n) surrounding S(l;n).
std::vector<NBox> surrounding_j_boxes(const Vertex& l, int n);

}  // namespace fpp
