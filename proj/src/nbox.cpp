#include "fpp/nbox.hpp"

#include <cstdlib>

#include "fpp/error.hpp"

namespace fpp {

NBox NBox::s_cube(const Vertex& l, int n) { return {Kind::SCube, l, 0, n}; }

NBox NBox::t_cube(const Vertex& l, int n) { return {Kind::TCube, l, 0, n}; }

NBox NBox::j_box(const Vertex& l, int j, int n) {
  if (j == 0 || std::abs(j) > l.dim()) throw Error(ErrorKind::ValidationError, "axis label j out of range");
  return {Kind::JBox, l, j, n};
}

Region NBox::region() const {
  if (n < 1) throw Error(ErrorKind::ValidationError, "box scale n must be positive");
  Vertex lo(dim()), hi(dim());
  for (int i = 0; i < dim(); ++i) {
    switch (kind) {
      case Kind::SCube:
        lo[i] = n * l[i];
        hi[i] = n * (l[i] + 1) - 1;
        break;
      case Kind::TCube:
      case Kind::JBox:
        lo[i] = n * l[i] - n;
        hi[i] = n * (l[i] + 2);
        break;
    }
  }
  if (kind == Kind::JBox) {
    int a = short_axis();
    if (j > 0) {
      lo[a] = n * l[a] + n;  // T(l+2e) starts at n(l+2) - n
    } else {
      hi[a] = n * l[a];  // T(l-2e) ends at n(l-2+2)
    }
  }
  return Region(lo, hi);
}

int NBox::short_axis() const {
  if (kind != Kind::JBox) throw Error(ErrorKind::WrongKind, "short axis requested for a cube");
  return std::abs(j) - 1;
}

std::string to_string(const NBox& b) {
  switch (b.kind) {
    case NBox::Kind::SCube:
      return "S" + to_string(b.l) + "/" + std::to_string(b.n);
    case NBox::Kind::TCube:
      return "T" + to_string(b.l) + "/" + std::to_string(b.n);
    case NBox::Kind::JBox:
      break;
  }
  return "B^" + std::to_string(b.j) + to_string(b.l) + "/" + std::to_string(b.n);
}

std::vector<NBox> surrounding_j_boxes(const Vertex& l, int n) {
  std::vector<NBox> out;
  for (int i = 1; i <= l.dim(); ++i) {
    out.push_back(NBox::j_box(l, i, n));
    out.push_back(NBox::j_box(l, -i, n));
  }
  return out;
}

}  // namespace fpp
