#include "lawson/surface.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numeric>
#include <set>

namespace lawson {

namespace {

// a generic interior point of the base cell, used to locate cell images
Vec4 cell_probe(const LawsonParams& p) {
  Vec4 v = 0.31 * q_lower(p, 0) + 0.23 * q_lower(p, 2) + 0.27 * q_upper(p, 0) +
           0.19 * q_upper(p, 2);
  return v.normalized();
}

}  // namespace

SurfaceMesh assemble_surface(const DiscMesh& disc, double weld_tol) {
  LawsonParams p(disc.m);
  SurfaceMesh s;
  s.m = disc.m;
  s.resolution = disc.resolution;
  s.group = SymGroup::lawson(p);

  // one group element per cell with i+j even
  Vec4 probe = cell_probe(p);
  std::map<std::pair<std::int64_t, std::int64_t>, Mat4> cell_map;
  std::vector<Tetra> cells;
  std::vector<std::pair<std::int64_t, std::int64_t>> cell_ids;
  for (std::int64_t i = 0; i < 2 * p.m; ++i)
    for (std::int64_t j = 0; j < 4; ++j)
      if ((i + j) % 2 == 0) {
        cells.push_back(omega(p, {i, 0, j, 0}));
        cell_ids.push_back({i, j});
      }
  for (const GroupElement& e : s.group.elements) {
    Vec4 img = e.matrix * probe;
    for (size_t c = 0; c < cells.size(); ++c)
      if (cells[c].contains(img, 1e-9)) {
        cell_map.emplace(cell_ids[c], e.matrix);
        break;
      }
  }
  if (cell_map.size() != cells.size())
    throw GeometryError("assemble_surface: group does not cover all cells");

  // instantiate copies and weld by position hashing
  const int nv = disc.mesh.num_vertices();
  std::vector<Vec4> welded;
  VertexLocator* loc = nullptr;
  std::vector<int> copy_vertex_global;  // per copy*nv
  s.mesh.metric = Metric::Sphere;

  auto rebuild_locator = [&]() {
    delete loc;
    loc = new VertexLocator(welded, weld_tol);
  };
  rebuild_locator();

  for (const auto& [ij, mat] : cell_map) {
    SurfaceMesh::CellCopy copy{ij.first, ij.second, mat};
    int copy_id = int(s.copies.size());
    s.copies.push_back(copy);
    std::vector<int> global(nv);
    bool grew = false;
    for (int v = 0; v < nv; ++v) {
      Vec4 pos = mat * disc.mesh.pos[v];
      int hit = loc->find(pos);
      if (hit < 0) {
        welded.push_back(pos);
        global[v] = int(welded.size()) - 1;
        grew = true;
      } else {
        global[v] = hit;
        s.weld_mismatch = std::max(s.weld_mismatch, (welded[hit] - pos).norm());
      }
    }
    if (grew) rebuild_locator();
    for (const auto& t : disc.mesh.tri) {
      s.mesh.tri.push_back({global[t[0]], global[t[1]], global[t[2]]});
      s.tri_copy.push_back(copy_id);
    }
    copy_vertex_global.insert(copy_vertex_global.end(), global.begin(), global.end());
  }
  delete loc;
  s.mesh.pos = welded;
  s.copy_of_vertex.assign(s.mesh.num_vertices(), -1);
  for (size_t k = 0; k < copy_vertex_global.size(); ++k)
    if (s.copy_of_vertex[copy_vertex_global[k]] < 0)
      s.copy_of_vertex[copy_vertex_global[k]] = int(k / nv);

  if (!is_edge_manifold(s.mesh) || !is_closed(s.mesh))
    throw GeometryError("assemble_surface: weld mismatch above tolerance, surface not closed");
  if (euler_characteristic(s.mesh) != 4 - 2 * p.m)
    throw GeometryError("assemble_surface: wrong Euler characteristic");
  if (!orient_consistently(s.mesh))
    throw GeometryError("assemble_surface: surface not orientable");

  // q-point vertices
  for (std::int64_t i = 0; i < 2 * p.m; ++i) {
    int v = vertex_at(s, q_lower(p, 2 * i));
    if (v < 0) throw GeometryError("assemble_surface: missing q-point on C");
    s.vertex_on_c[2 * i] = v;
  }
  for (std::int64_t j = 0; j < 4; ++j) {
    int v = vertex_at(s, q_upper(p, 2 * j));
    if (v < 0) throw GeometryError("assemble_surface: missing q-point on C-perp");
    s.vertex_on_cperp[2 * j] = v;
  }

  // normal convention: nu(q^1) = q^0 at the umbilic
  estimate_curvature(s);
  {
    Vec4 target = q_upper(p, 0);  // q^0
    int vq1 = s.vertex_on_cperp.at(2);
    if (s.normal[vq1].dot(target) < 0) {
      for (auto& t : s.mesh.tri) std::swap(t[1], t[2]);
      estimate_curvature(s);
    }
    if (s.normal[vq1].dot(target) < 0.5)
      throw GeometryError("assemble_surface: normal convention could not be pinned");
  }

  // permutations and orbits under the full group
  s.group_perm.reserve(s.group.size());
  for (const GroupElement& e : s.group.elements)
    s.group_perm.push_back(vertex_permutation(s.mesh, e.matrix, weld_tol));
  s.orbit.assign(s.mesh.num_vertices(), -1);
  int next_orbit = 0;
  for (int v = 0; v < s.mesh.num_vertices(); ++v) {
    if (s.orbit[v] >= 0) continue;
    for (const auto& perm : s.group_perm) s.orbit[perm[v]] = next_orbit;
    ++next_orbit;
  }
  return s;
}

// --- curvature ---------------------------------------------------------------

namespace {

// least-squares height fit h = d x + e y + (a x^2 + 2 b x y + c y^2)/2 in
// normal coordinates at the vertex; returns false when under-determined
bool weingarten_fit(const Vec4& pos, const Vec4& nu, const std::vector<Vec4>& nbrs,
                    double& a2, double& det_shape) {
  if (nbrs.size() < 5) return false;
  // tangent basis
  Vec4 e1 = Vec4::Zero();
  for (int d = 0; d < 4; ++d) {
    Vec4 cand = Vec4::Unit(d);
    cand -= cand.dot(pos) * pos;
    cand -= cand.dot(nu) * nu;
    if (cand.norm() > 0.5) {
      e1 = cand.normalized();
      break;
    }
  }
  if (e1.norm() == 0.0) return false;
  Vec4 e2 = cross4(pos, nu, e1);
  e2.normalize();

  Eigen::MatrixXd m(nbrs.size(), 5);
  Eigen::VectorXd rhs(nbrs.size());
  for (size_t k = 0; k < nbrs.size(); ++k) {
    const Vec4& q = nbrs[k];
    double c = std::clamp(pos.dot(q), -1.0, 1.0);
    double theta = std::acos(c);
    Vec4 w = q - c * pos;
    double wn = w.norm();
    if (wn < 1e-15) return false;
    w *= theta / wn;  // exponential-map coordinates in T_pos S^3
    double x = w.dot(e1), y = w.dot(e2), h = w.dot(nu);
    m(k, 0) = x;
    m(k, 1) = y;
    m(k, 2) = 0.5 * x * x;
    m(k, 3) = x * y;
    m(k, 4) = 0.5 * y * y;
    rhs(k) = h;
  }
  Eigen::VectorXd sol = m.colPivHouseholderQr().solve(rhs);
  double a = sol[2], b = sol[3], c = sol[4];
  a2 = a * a + 2 * b * b + c * c;
  det_shape = a * c - b * b;
  return true;
}

}  // namespace

void estimate_curvature_fields(const TriMesh& mesh, std::vector<Vec4>& normal,
                               std::vector<double>& a2, std::vector<double>& det_shape,
                               std::vector<double>& gauss_defect) {
  normal = vertex_normals_s3(mesh);
  const int nv = mesh.num_vertices();
  a2.assign(nv, 0.0);
  det_shape.assign(nv, 0.0);
  gauss_defect.assign(nv, 0.0);
  auto nbrs = vertex_neighbors(mesh);
  auto bmask = boundary_vertex_mask(mesh);

  for (int v = 0; v < nv; ++v) {
    std::vector<Vec4> ring;
    for (int u : nbrs[v]) ring.push_back(mesh.pos[u]);
    double va2, vdet;
    if (!weingarten_fit(mesh.pos[v], normal[v], ring, va2, vdet)) {
      // degenerate 1-ring: widen to the 2-ring
      std::set<int> two;
      for (int u : nbrs[v]) {
        two.insert(u);
        for (int w : nbrs[u])
          if (w != v) two.insert(w);
      }
      ring.clear();
      for (int u : two) ring.push_back(mesh.pos[u]);
      if (!weingarten_fit(mesh.pos[v], normal[v], ring, va2, vdet))
        throw GeometryError("estimate_curvature: degenerate neighborhood");
    }
    a2[v] = va2;
    det_shape[v] = vdet;
  }

  // intrinsic angle defect (interior vertices); oracle for the Gauss relation
  Eigen::VectorXd mass = vertex_masses(mesh);
  std::vector<double> angle_sum(nv, 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto ang = triangle_angles(mesh, t);
    for (int k = 0; k < 3; ++k) angle_sum[mesh.tri[t][k]] += ang[k];
  }
  for (int v = 0; v < nv; ++v)
    gauss_defect[v] = bmask[v] ? 0.0 : (2.0 * M_PI - angle_sum[v]) / mass[v];
}

void estimate_curvature(SurfaceMesh& s) {
  estimate_curvature_fields(s.mesh, s.normal, s.a2, s.det_shape, s.gauss_defect);
}

// --- marked sets ---------------------------------------------------------------

std::vector<int> vertices_on_sigma_lower(const SurfaceMesh& s, std::int64_t i, double tol) {
  LawsonParams p = s.params();
  // Sigma_{i pi/m} has unit normal along C at angle i pi/m + pi/2
  Vec4 n = p.frame.p_lower(Angle::pi_times(i, p.m).plus_half_pi());
  std::vector<int> out;
  for (int v = 0; v < s.mesh.num_vertices(); ++v)
    if (std::abs(n.dot(s.mesh.pos[v])) <= tol) out.push_back(v);
  return out;
}

std::vector<int> vertices_on_sigma_upper(const SurfaceMesh& s, std::int64_t j, double tol) {
  LawsonParams p = s.params();
  Vec4 n = p.frame.p_upper(Angle::pi_times(j, 2).plus_half_pi());
  std::vector<int> out;
  for (int v = 0; v < s.mesh.num_vertices(); ++v)
    if (std::abs(n.dot(s.mesh.pos[v])) <= tol) out.push_back(v);
  return out;
}

std::vector<int> segment_vertices(const SurfaceMesh& s, std::int64_t i, std::int64_t j,
                                  double tol) {
  LawsonParams p = s.params();
  Vec4 qa = q_lower(p, 2 * i), qb = q_upper(p, 2 * j);
  std::vector<int> out;
  for (int v = 0; v < s.mesh.num_vertices(); ++v) {
    const Vec4& x = s.mesh.pos[v];
    Vec4 r = x - qa.dot(x) * qa - qb.dot(x) * qb;
    if (r.norm() <= tol && qa.dot(x) >= -tol && qb.dot(x) >= -tol) out.push_back(v);
  }
  return out;
}

Submesh extract_chamber(const SurfaceMesh& s, const OmuPattern& pattern) {
  LawsonParams p = s.params();
  Submesh sub;
  sub.mesh.metric = s.mesh.metric;
  std::vector<int> vmap(s.mesh.num_vertices(), -1);
  for (int t = 0; t < s.mesh.num_triangles(); ++t) {
    const auto& tr = s.mesh.tri[t];
    Vec4 b = (s.mesh.pos[tr[0]] + s.mesh.pos[tr[1]] + s.mesh.pos[tr[2]]).normalized();
    if (!pattern.contains(p.frame, b, 0.0)) continue;
    std::array<int, 3> nt;
    for (int k = 0; k < 3; ++k) {
      int v = tr[k];
      if (vmap[v] < 0) {
        vmap[v] = int(sub.mesh.pos.size());
        sub.mesh.pos.push_back(s.mesh.pos[v]);
        sub.to_parent.push_back(v);
      }
      nt[k] = vmap[v];
    }
    sub.mesh.tri.push_back(nt);
    sub.tri_parent.push_back(t);
  }
  return sub;
}

int vertex_at(const SurfaceMesh& s, const Vec4& p, double tol) {
  VertexLocator loc(s.mesh.pos, tol);
  return loc.find(p);
}

}  // namespace lawson
