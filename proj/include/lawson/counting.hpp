#pragma once

#include "lawson/jacobi.hpp"

namespace lawson {

// Input for the subdivision bounds: a domain with an outer Dirichlet part
// (the rest of the outer boundary natural) cut along interface curves into
// pieces. Each cut curve is a vertex set; an edge lies on a cut when both
// endpoints belong to the same curve.
struct MRInput {
  TriMesh mesh;
  Eigen::VectorXd potential;
  std::vector<int> outer_dirichlet;
  std::vector<std::vector<int>> cuts;
  double lambda = 0.0;
  double band = 0.0;    // half-width treating |mu - lambda| <= band as equality
  int first_piece = 0;  // which piece plays the distinguished role
};

struct MRReport {
  int n_pieces = 0;
  // counts with the cut Dirichlet (variant i) and cut Neumann (variant ii)
  int whole_strictly_below = 0;
  int whole_below_or_equal = 0;
  int rhs_dirichlet = 0;  // piece_1 strict + others <=, all cuts Dirichlet
  int rhs_neumann = 0;    // piece_1 <= + others strict, all cuts Neumann
  bool holds_lower = false;   // whole_< >= rhs_dirichlet
  bool holds_upper = false;   // whole_<= <= rhs_neumann
  bool conclusive = false;    // no eigenvalue near the band edges anywhere
  std::vector<std::array<int, 2>> piece_counts_dirichlet;  // {<, <=} per piece
  std::vector<std::array<int, 2>> piece_counts_neumann;
};

MRReport montiel_ros_check(const MRInput& in);

// Number of nodal domains of a vertex field, with interval semantics:
// vertices with |value| below rel_band * max|value| are unassigned and may
// merge same-sign components but never join opposite signs.
struct NodalCount {
  int lo = 0;
  int hi = 0;
};
NodalCount nodal_domains(const TriMesh& mesh, const Eigen::VectorXd& values,
                         double rel_band = 1e-6);

}  // namespace lawson
