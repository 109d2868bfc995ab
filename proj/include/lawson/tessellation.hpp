#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lawson/sphere.hpp"

namespace lawson {

// Parameters of the genus m-1 construction. m = 1, 2 are rejected: those
// cases degenerate to the great sphere and the Clifford torus.
struct LawsonParams {
  int m;
  GreatCircleFrame frame;

  explicit LawsonParams(int m_, GreatCircleFrame f = GreatCircleFrame::standard())
      : m(m_), frame(std::move(f)) {
    if (m < 3) throw GeometryError("LawsonParams: m must be >= 3");
  }
};

// Subdivision points, indexed by doubled integers so half indices stay exact:
// k2 = 2k refers to q_k, odd k2 to the midpoint q_{k2/2}.
Angle q_lower_angle(const LawsonParams& p, std::int64_t k2);  // (2k-1)pi/2m
Angle q_upper_angle(std::int64_t k2);                         // (2k-1)pi/4
Vec4 q_lower(const LawsonParams& p, std::int64_t k2);
Vec4 q_upper(const LawsonParams& p, std::int64_t k2);

// Cell of the tessellation: interval index i on C (with optional half tag)
// and j on C-perp. tag 0 keeps the full interval [q_i, q_{i+1}], tags +/-
// the outer/inner halves split at the midpoint.
struct CellIndex {
  std::int64_t i = 0;
  int itag = 0;
  std::int64_t j = 0;
  int jtag = 0;
};

// doubled endpoints of the (possibly halved) interval [q_a, q_b]
std::pair<std::int64_t, std::int64_t> interval_endpoints(std::int64_t idx, int tag);

// A spherical tetrahedron of the tessellation, kept with its face spans and
// inward normals; membership is the four half-space sign tests, which the
// convexity of the cell justifies.
struct Tetra {
  CellIndex index;
  std::array<Vec4, 4> verts;      // q_a, q_b on C then q^c, q^d on C-perp
  std::array<Subspace, 4> faces;  // {a,c,d}, {b,c,d}, {a,b,c}, {a,b,d}
  std::array<Vec4, 4> inward;

  bool contains(const Vec4& x, double tol = 1e-10) const;
};

Tetra omega(const LawsonParams& p, const CellIndex& idx);

// dihedral angle along the edge shared by two faces, from inward normals
double tetra_dihedral(const Tetra& t, int face_a, int face_b);

// The three non-identity symmetries of the cell: reflections through
// Sigma_{i pi/m}, Sigma^{j pi/2} and their intersection circle.
std::array<Isometry4, 3> cell_symmetries(const LawsonParams& p, std::int64_t i,
                                         std::int64_t j);

// The boundary quadrilateral: the four cell edges avoiding C and C-perp.
struct Quad {
  std::int64_t i = 0, j = 0;
  std::array<std::pair<Vec4, Vec4>, 4> edges;  // q_i q^j, q^j q_{i+1}, q_{i+1} q^{j+1}, q^{j+1} q_i
  std::array<Vec4, 4> verts;                   // q_i, q_{i+1}, q^j, q^{j+1}
  std::vector<Vec4> samples;
};

Quad quad(const LawsonParams& p, std::int64_t i, std::int64_t j,
          int samples_per_edge = 128);

// Closure of a component cut out by the four mutually orthogonal spheres
// Sigma^0, Sigma^{pi/2}, Sigma_0, Sigma_{pi/2}; each slot is +1 / -1 / 0 (*).
struct OmuPattern {
  int sup0 = 0;  // side of Sigma^0
  int sup1 = 0;  // side of Sigma^{pi/2}
  int sub0 = 0;  // side of Sigma_0
  int sub1 = 0;  // side of Sigma_{pi/2}

  bool contains(const GreatCircleFrame& f, const Vec4& x, double tol = 1e-10) const;
};

// Decompositions of the positive domains into tessellation cells, split by
// the parity of m where the listings differ.
std::vector<CellIndex> omu_decompose_up_star(const LawsonParams& p);   // x3,x4 >= 0
std::vector<CellIndex> omu_decompose_up_plus(const LawsonParams& p);   // and x2 >= 0
std::vector<CellIndex> omu_decompose_up_plusplus(const LawsonParams& p);  // and x1 >= 0

// Orbit-space projection of the cell (i,j): collapse along the rotation
// family of the cell's axis circle onto the hemisphere at p_{i pi/m}.
Vec4 project_tetra(const LawsonParams& p, std::int64_t i, std::int64_t j,
                   const Vec4& x);
// the axis circle C_{i pi/m}^{j pi/2} itself
GreatCircle cell_axis(const LawsonParams& p, std::int64_t i, std::int64_t j);

}  // namespace lawson
