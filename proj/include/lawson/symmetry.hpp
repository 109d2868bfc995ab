#pragma once

#include <string>
#include <vector>

#include "lawson/tessellation.hpp"

namespace lawson {

// Element of the symmetry group with the parity of its action on the unit
// normal: +1 for elements preserving nu, -1 for reversing.
struct GroupElement {
  Mat4 matrix;
  int parity = +1;
  std::string label;
};

// The full symmetry group of the genus m-1 surface, generated by the m+2
// sphere reflections (even on nu) and the 2m circle reflections (odd).
struct SymGroup {
  std::vector<GroupElement> elements;  // closed under composition
  std::vector<GroupElement> sphere_generators;
  std::vector<GroupElement> circle_generators;

  static SymGroup lawson(const LawsonParams& p);

  int size() const { return static_cast<int>(elements.size()); }
  // index of the element matching the matrix within tol, or -1
  int find(const Mat4& m, double tol = 1e-9) const;
};

}  // namespace lawson
