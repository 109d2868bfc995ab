#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "lawson/sphere.hpp"

namespace lawson {

// Which metric the intrinsic quantities (edge lengths, angles, areas) use:
// great-circle distances for meshes on S^3, straight distances for the flat
// test meshes.
enum class Metric { Sphere, Flat };

struct TriMesh {
  std::vector<Vec4> pos;
  std::vector<std::array<int, 3>> tri;
  Metric metric = Metric::Sphere;

  int num_vertices() const { return static_cast<int>(pos.size()); }
  int num_triangles() const { return static_cast<int>(tri.size()); }
};

double edge_length(const TriMesh& m, const Vec4& p, const Vec4& q);

long euler_characteristic(const TriMesh& m);
// boundary edges appear in exactly one triangle
std::vector<std::array<int, 2>> boundary_edges(const TriMesh& m);
std::vector<char> boundary_vertex_mask(const TriMesh& m);
bool is_closed(const TriMesh& m);
bool is_edge_manifold(const TriMesh& m);

// Flip windings by breadth-first traversal so neighboring triangles induce
// opposite orientations on their shared edge. Fails on non-orientable input.
bool orient_consistently(TriMesh& m);

// uniform 1->4 split; midpoints reprojected to S^3 for Metric::Sphere
TriMesh subdivide(const TriMesh& m);

// l'Huilier spherical excess from geodesic side lengths (Heron for Flat)
double triangle_area_from_lengths(Metric metric, double a, double b, double c);
double triangle_area(const TriMesh& m, int t);
double total_area(const TriMesh& m);
// lumped vertex areas (one third of incident triangle areas)
Eigen::VectorXd vertex_masses(const TriMesh& m);
// corner angles from intrinsic side lengths; row t holds angles at tri[t][0..2]
std::array<double, 3> triangle_angles(const TriMesh& m, int t);

// area-weighted triangle normals projected tangent to S^3 (Sphere metric)
std::vector<Vec4> vertex_normals_s3(const TriMesh& m);

// cotan weights from intrinsic edge lengths (Euclidean flattening per
// triangle); returns the triplets of the PSD stiffness matrix and counts
// edges whose total weight is negative
struct CotanData {
  std::vector<Eigen::Triplet<double>> triplets;
  int negative_edges = 0;
};
CotanData cotan_stiffness(const TriMesh& m);

// one-ring (vertex -> neighbor vertices) adjacency
std::vector<std::vector<int>> vertex_neighbors(const TriMesh& m);
std::vector<std::vector<int>> vertex_triangles(const TriMesh& m);

// Spatial hash for matching vertices of symmetric meshes: resolves a query
// position to the index of the unique vertex within tol, or -1.
class VertexLocator {
 public:
  explicit VertexLocator(const std::vector<Vec4>& pts, double tol = 1e-8);
  int find(const Vec4& p) const;
  std::vector<int> find_all(const Vec4& p) const;  // every vertex within tol
  // distance to the nearest registered vertex (for weld diagnostics)
  double nearest_distance(const Vec4& p) const;

 private:
  using Key = std::array<std::int64_t, 4>;
  Key key_of(const Vec4& p) const;
  const std::vector<Vec4>& pts_;
  double tol_, cell_;
  std::map<Key, std::vector<int>> grid_;
};

// permutation induced by an isometry mapping the vertex set to itself;
// throws if some image fails to land on a vertex within tol
std::vector<int> vertex_permutation(const TriMesh& m, const Mat4& iso, double tol = 1e-8);

// --- baseline meshes --------------------------------------------------------

// great two-sphere {x4 = 0} in S^3, icosahedral subdivision
TriMesh make_great_sphere_mesh(int subdivisions);
// minimal flat torus, na x nb grid
TriMesh make_clifford_torus_mesh(int na, int nb);
// flat unit disc (polar rings), Metric::Flat, embedded in the x1x2 plane
TriMesh make_flat_disc_mesh(int rings, int wedges);
// flat a x b rectangle grid, Metric::Flat
TriMesh make_flat_rectangle_mesh(double a, double b, int nx, int ny);

}  // namespace lawson
