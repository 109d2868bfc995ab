#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lawson/plateau.hpp>
#include <lawson/surface.hpp>

using namespace lawson;

TEST_CASE("seed disc: topology, boundary count, cell membership") {
  LawsonParams p(3);
  const int n = 8;
  DiscMesh d = init_disc(p, n);
  CHECK(euler_characteristic(d.mesh) == 1);
  CHECK(boundary_edges(d.mesh).size() == size_t(4 * n));
  int boundary_count = 0;
  for (auto r : d.role)
    if (r != DiscMesh::Role::Interior) ++boundary_count;
  CHECK(boundary_count == 4 * n);

  Tetra cell = omega(p, {0, 0, 0, 0});
  for (const Vec4& v : d.mesh.pos) CHECK(cell.contains(v, 1e-9));

  CHECK_THROWS_AS(init_disc(p, 3), GeometryError);

  // boundary vertices sit on their assigned arcs
  for (int v = 0; v < d.mesh.num_vertices(); ++v) {
    if (d.role[v] != DiscMesh::Role::Boundary) continue;
    const auto& [a, b] = d.qedge[d.edge_id[v]];
    Vec4 r = d.mesh.pos[v] - a.dot(d.mesh.pos[v]) * a - b.dot(d.mesh.pos[v]) * b;
    CHECK(r.norm() < 1e-10);
  }
}

TEST_CASE("minimized disc: symmetry, graphicality, center point") {
  LawsonParams p(3);
  SolveOptions opts;
  opts.tol = 1e-9;
  DiscMesh d = build_disc(p, 8, opts);
  SolveReport rep = minimize_area(d, opts);
  CHECK(rep.converged);
  CHECK(rep.residual < opts.tol);

  // invariance under the three cell reflections, as a vertex permutation
  for (int k = 0; k < 3; ++k) {
    double worst = 0;
    for (int v = 0; v < d.mesh.num_vertices(); ++v)
      worst = std::max(worst, (d.stab[k] * d.mesh.pos[v] -
                               d.mesh.pos[d.stab_perm[k][v]])
                                  .norm());
    CHECK(worst < 1e-9);
  }

  // graphical along the cell axis: orbit projection injective on vertices
  CHECK(orbits_injective(cell_axis(p, 0, 0), p.frame.p_lower(Angle()), d.mesh.pos));

  // the center vertex realizes the intersection with the axis segment
  Vec4 c = d.mesh.pos[d.center_vertex];
  GreatCircle axis = cell_axis(p, 0, 0);
  CHECK(axis.contains(c, 1e-9));
  CHECK(c.dot(p.frame.p_lower(Angle())) > 0);  // on the inner arc

  // and no other vertex lies on the axis segment
  int on_axis = 0;
  for (const Vec4& v : d.mesh.pos)
    if (axis.contains(v, 1e-7)) ++on_axis;
  CHECK(on_axis == 1);
}

TEST_CASE("two seeds, one minimizer") {
  LawsonParams p(3);
  SolveOptions opts;
  opts.tol = 1e-9;
  DiscMesh a = init_disc(p, 8, DiscSeed::BentDisc);
  DiscMesh b = init_disc(p, 8, DiscSeed::BilinearPatch);
  minimize_area(a, opts);
  minimize_area(b, opts);
  // same combinatorics: Hausdorff distance collapses to vertex-wise distance
  double worst = 0;
  for (int v = 0; v < a.mesh.num_vertices(); ++v)
    worst = std::max(worst, (a.mesh.pos[v] - b.mesh.pos[v]).norm());
  CHECK(worst < 1e-6);
}

TEST_CASE("residual history is monotone and the area shrinks") {
  LawsonParams p(4);
  DiscMesh d = init_disc(p, 8);
  double area0 = disc_area(d);
  SolveOptions opts;
  opts.tol = 1e-9;
  SolveReport rep = minimize_area(d, opts);
  CHECK(rep.converged);
  CHECK(rep.non_monotone_steps == 0);
  for (size_t i = 1; i < rep.residual_history.size(); ++i)
    CHECK(rep.residual_history[i] <= rep.residual_history[i - 1] + 1e-12);
  CHECK(disc_area(d) < area0);
}

TEST_CASE("assembled surface: closed, right genus, welded exactly") {
  for (int m : {3, 4}) {
    LawsonParams p(m);
    SolveOptions opts;
    opts.tol = 1e-9;
    DiscMesh d = build_disc(p, 8, opts);
    SurfaceMesh s = assemble_surface(d);
    CHECK(is_closed(s.mesh));
    CHECK(euler_characteristic(s.mesh) == 4 - 2 * m);
    CHECK(int(s.copies.size()) == 4 * m);
    CHECK(s.weld_mismatch < 1e-8);
    CHECK(s.group.size() == 16 * m);

    // normal convention at the marked vertices
    int vq1 = s.vertex_on_cperp.at(2);
    CHECK((s.normal[vq1] - q_upper(p, 0)).norm() < 1e-6);
    int vq_1 = s.vertex_on_c.at(2);
    Vec4 target = p.frame.p_lower(
        Angle::pi_times(2 - 1, 2 * m) + Angle::pi_times(1, 2));  // q_{1 + m/2}
    CHECK((s.normal[vq_1] - target).norm() < 1e-6);

    // every group element maps the vertex set to itself and the recorded
    // parity matches the action on the normal
    for (int e = 0; e < s.group.size(); ++e) {
      const auto& perm = s.group_perm[e];
      const Mat4& g = s.group.elements[e].matrix;
      double worst_pos = 0, worst_nrm = 0;
      for (int v = 0; v < s.mesh.num_vertices(); v += 7) {
        worst_pos = std::max(worst_pos, (g * s.mesh.pos[v] - s.mesh.pos[perm[v]]).norm());
        worst_nrm = std::max(
            worst_nrm, (double(s.group.elements[e].parity) * g * s.normal[v] -
                        s.normal[perm[v]])
                           .norm());
      }
      CHECK(worst_pos < 1e-8);
      CHECK(worst_nrm < 1e-5);
    }
  }
}

TEST_CASE("half-disc graphicality along the two circle families") {
  LawsonParams p(3);
  SolveOptions opts;
  opts.tol = 1e-9;
  DiscMesh d = build_disc(p, 8, opts);

  // D_{0+}^{0}: vertices with x2 >= 0; graphical along C-perp rotation
  std::vector<Vec4> upper_half, right_half;
  for (const Vec4& v : d.mesh.pos) {
    if (v[1] >= -1e-12) upper_half.push_back(v);
    if (v[3] >= -1e-12) right_half.push_back(v);
  }
  CHECK(orbits_injective(p.frame.circle(), p.frame.p_lower(Angle()), upper_half));
  CHECK(orbits_injective(p.frame.circle_perp(), p.frame.p_upper(Angle()), right_half));
}

TEST_CASE("point-rotation symmetry at q-points") {
  // reflect through q_1 composed with a quarter turn along C preserves the
  // surface and reverses the normal
  LawsonParams p(3);
  SolveOptions opts;
  opts.tol = 1e-9;
  DiscMesh d = build_disc(p, 6, opts);
  SurfaceMesh s = assemble_surface(d);
  Vec4 q1 = q_lower(p, 2);
  Mat4 point_reflection = 2.0 * q1 * q1.transpose() - Mat4::Identity();
  Mat4 iso = point_reflection * rot_along(p.frame.circle(), Angle::pi_times(1, 2)).matrix();
  auto perm = vertex_permutation(s.mesh, iso, 1e-8);
  double worst = 0;
  for (int v = 0; v < s.mesh.num_vertices(); v += 3)
    worst = std::max(worst, (iso * s.normal[v] + s.normal[perm[v]]).norm());
  CHECK(worst < 1e-5);
}

TEST_CASE("curvature estimates on the baselines") {
  {  // totally geodesic sphere: |A|^2 vanishes, defect matches K = 1
    TriMesh m = make_great_sphere_mesh(3);
    std::vector<Vec4> nrm;
    std::vector<double> a2, det, defect;
    estimate_curvature_fields(m, nrm, a2, det, defect);
    for (double v : a2) CHECK(std::abs(v) < 0.02);
    for (int v = 0; v < m.num_vertices(); ++v)
      CHECK(std::abs(defect[v] - 1.0) < 0.05);
  }
  {  // Clifford torus: |A|^2 = 2 from the closed-form principal curvatures
    TriMesh m = make_clifford_torus_mesh(48, 48);
    std::vector<Vec4> nrm;
    std::vector<double> a2, det, defect;
    estimate_curvature_fields(m, nrm, a2, det, defect);
    for (double v : a2) CHECK(std::abs(v - 2.0) < 0.05);
    // flat: gauss defect ~ 0 = 1 + det(shape)
    for (int v = 0; v < m.num_vertices(); ++v) {
      CHECK(std::abs(defect[v]) < 0.05);
      CHECK(std::abs(1.0 + det[v]) < 0.05);
    }
  }
}

TEST_CASE("gauss relation on the surface") {
  LawsonParams p(3);
  SolveOptions opts;
  opts.tol = 1e-9;
  DiscMesh d8 = build_disc(p, 8, opts);
  SurfaceMesh s8 = assemble_surface(d8);
  DiscMesh d16 = subdivide_disc(d8);
  minimize_area(d16, opts);
  SurfaceMesh s16 = assemble_surface(d16);

  auto median_gap = [](const SurfaceMesh& s) {
    std::vector<double> gaps;
    for (int v = 0; v < s.mesh.num_vertices(); ++v)
      gaps.push_back(std::abs(s.gauss_defect[v] - (1.0 + s.det_shape[v])));
    std::sort(gaps.begin(), gaps.end());
    return gaps[gaps.size() / 2];
  };
  double g8 = median_gap(s8), g16 = median_gap(s16);
  CHECK(g8 < 1.0);
  CHECK(g16 < 0.75 * g8);  // first-order decrease under refinement
}
