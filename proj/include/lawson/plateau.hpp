#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lawson/symmetry.hpp"
#include "lawson/trimesh.hpp"

namespace lawson {

// Triangulated spanning disc for the fundamental cell (0,0): boundary on the
// cell's quadrilateral, interior inside the cell, invariant under the cell's
// three reflections.
struct DiscMesh {
  int m = 3;
  int resolution = 0;  // boundary edges per quadrilateral side
  TriMesh mesh;

  enum class Role : char { Interior, Boundary, Corner };
  std::vector<Role> role;
  std::vector<int> edge_id;  // 0..3 on boundary vertices, -1 elsewhere
  // quadrilateral edges in boundary order: q_0 q^0, q^0 q_1, q_1 q^1, q^1 q_0
  std::array<std::pair<Vec4, Vec4>, 4> qedge;

  // cell stabilizer (reflections through Sigma_0, Sigma^0 and the axis
  // circle) as matrices plus the combinatorial vertex permutations
  std::array<Mat4, 3> stab;
  std::array<std::vector<int>, 3> stab_perm;

  // fixed curves of the stabilizer as vertex flags
  std::vector<char> on_alpha;  // trace of Sigma_0
  std::vector<char> on_beta;   // trace of Sigma^0
  int center_vertex = -1;      // the intersection point of the two traces

  LawsonParams params() const { return LawsonParams(m); }
};

enum class DiscSeed { BentDisc, BilinearPatch };

// Triangulated seed with boundary exactly on the quadrilateral and interior
// inside the cell. resolution >= 4.
DiscMesh init_disc(const LawsonParams& p, int resolution,
                   DiscSeed seed = DiscSeed::BentDisc);

struct SolveOptions {
  double tol = 1e-9;       // sup-norm of the pointwise mean-curvature proxy
  int max_iters = 200000;
  bool slide_boundary = true;  // boundary vertices move along their edge arc
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;  // recorded every iteration
  double area = 0.0;
  int non_monotone_steps = 0;  // accepted steps that raised the residual
};

// Projected gradient descent on the vertex positions (area from geodesic
// triangle areas), with the cell-stabilizer symmetrization applied every
// iteration. Throws on self-intersection of the projected disc.
SolveReport minimize_area(DiscMesh& disc, const SolveOptions& opts = {});

double disc_area(const DiscMesh& disc);

// 1->4 subdivision preserving roles, edge assignments and stabilizer
// permutations; new midpoints reprojected to the sphere / boundary arcs.
DiscMesh subdivide_disc(const DiscMesh& disc);

// Convenience: seed at a coarse level and re-minimize through `levels`
// subdivisions (resolution doubles each level).
DiscMesh build_disc(const LawsonParams& p, int resolution, const SolveOptions& opts = {},
                    DiscSeed seed = DiscSeed::BentDisc);

// graphicality of a vertex set with respect to rotation along a circle:
// no two distinct vertices on one orbit (checked through orbit projection)
bool orbits_injective(const GreatCircle& axis, const Vec4& base,
                      const std::vector<Vec4>& pts, double merge_tol = 1e-6);

}  // namespace lawson
