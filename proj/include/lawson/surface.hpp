#pragma once

#include <map>
#include <string>
#include <vector>

#include "lawson/plateau.hpp"
#include "lawson/symmetry.hpp"

namespace lawson {

// Closed genus m-1 surface: copies of the spanning disc under the symmetry
// group, welded along shared boundary edges, with a globally consistent
// normal pinned at the umbilic q^1.
struct SurfaceMesh {
  int m = 3;
  int resolution = 0;
  TriMesh mesh;  // closed, consistently oriented

  std::vector<Vec4> normal;       // unit, tangent to S^3
  std::vector<double> a2;         // |A|^2 per vertex
  std::vector<double> det_shape;  // det of the fitted shape operator
  std::vector<double> gauss_defect;  // angle-defect Gaussian curvature

  // provenance: the cell copy each triangle came from
  struct CellCopy {
    std::int64_t i = 0, j = 0;  // cell of the tessellation, i+j even
    Mat4 map;                   // group element taking the base disc here
  };
  std::vector<CellCopy> copies;
  std::vector<int> tri_copy;        // triangle -> copy id
  std::vector<int> copy_of_vertex;  // one witnessing copy per vertex

  SymGroup group;
  std::vector<std::vector<int>> group_perm;  // vertex permutation per element
  std::vector<int> orbit;                    // orbit id under the full group

  // special vertices (exact q-points): key (i2 doubled index) on C / C-perp
  std::map<std::int64_t, int> vertex_on_c;
  std::map<std::int64_t, int> vertex_on_cperp;

  double weld_mismatch = 0.0;  // worst seam distance absorbed by welding

  LawsonParams params() const { return LawsonParams(m); }
};

// Welds the 4m disc copies; throws when seams exceed the weld tolerance
// (an unconverged disc) or the result is not a closed orientable surface
// of the right genus.
SurfaceMesh assemble_surface(const DiscMesh& disc, double weld_tol = 1e-8);

// Fills normal, a2, det_shape, gauss_defect. Normals are area-weighted
// triangle normals; |A|^2 comes from a least-squares height fit over the
// 1-ring (2-ring fallback) in normal coordinates of S^3.
void estimate_curvature(SurfaceMesh& s);
// same estimator for baseline meshes (great sphere, Clifford torus)
void estimate_curvature_fields(const TriMesh& mesh, std::vector<Vec4>& normal,
                               std::vector<double>& a2, std::vector<double>& det_shape,
                               std::vector<double>& gauss_defect);

// --- marked sets -------------------------------------------------------------

// vertices on the symmetry sphere Sigma_{i pi/m} / Sigma^{j pi/2}
std::vector<int> vertices_on_sigma_lower(const SurfaceMesh& s, std::int64_t i,
                                         double tol = 1e-7);
std::vector<int> vertices_on_sigma_upper(const SurfaceMesh& s, std::int64_t j,
                                         double tol = 1e-7);
// vertices on the boundary segment between q_i and q^j (quarter great circle)
std::vector<int> segment_vertices(const SurfaceMesh& s, std::int64_t i, std::int64_t j,
                                  double tol = 1e-7);

// submesh of triangles whose barycenter lies in the given chamber
struct Submesh {
  TriMesh mesh;
  std::vector<int> to_parent;  // vertex map into the surface
  std::vector<int> tri_parent;
};
Submesh extract_chamber(const SurfaceMesh& s, const OmuPattern& pattern);

// index of the vertex at an exact point (e.g. a q-point), or -1
int vertex_at(const SurfaceMesh& s, const Vec4& p, double tol = 1e-9);

}  // namespace lawson
