#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lawson/tessellation.hpp>

using namespace lawson;

namespace {

std::uint64_t rng_state = 42;
double uniform() {
  rng_state = rng_state * 6364136223846793005ull + 1442695040888963407ull;
  return double(rng_state >> 11) / double(1ull << 53);
}
Vec4 random_point() {
  Vec4 v;
  for (int d = 0; d < 4; ++d) {
    double u1 = std::max(1e-16, uniform()), u2 = uniform();
    v[d] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  return v.normalized();
}

}  // namespace

TEST_CASE("q-points") {
  LawsonParams p(3);
  // q_1 = p_{pi/6} for m = 3
  CHECK((q_lower(p, 2) - Vec4(std::cos(M_PI / 6), std::sin(M_PI / 6), 0, 0)).norm() < 1e-15);
  // q^1 = p^{pi/4}
  CHECK((q_upper(p, 2) - Vec4(0, 0, std::cos(M_PI / 4), std::sin(M_PI / 4))).norm() < 1e-15);
  // antipodality q_{i+m} = -q_i
  for (std::int64_t i = 0; i < 6; ++i)
    CHECK((q_lower(p, 2 * (i + 3)) + q_lower(p, 2 * i)).norm() < 1e-14);
  CHECK_THROWS_AS(LawsonParams(2), GeometryError);
}

TEST_CASE("cells: vertices, rotation images, reflection halves") {
  LawsonParams p(4);
  Tetra base = omega(p, {0, 0, 0, 0});
  CHECK((base.verts[0] - q_lower(p, 0)).norm() < 1e-15);
  CHECK((base.verts[1] - q_lower(p, 2)).norm() < 1e-15);
  CHECK((base.verts[2] - q_upper(p, 0)).norm() < 1e-15);
  CHECK((base.verts[3] - q_upper(p, 2)).norm() < 1e-15);

  // rotation along C by pi/m maps cell (0,j) to cell (1,j)
  Isometry4 r = rot_along(p.frame.circle(), Angle::pi_times(1, p.m));
  Tetra next = omega(p, {1, 0, 0, 0});
  for (int k = 0; k < 4; ++k) CHECK(next.contains(r.matrix() * base.verts[k], 1e-10));

  // reflection through Sigma^0 maps the (0+,0+) quarter to (0+,0-)
  Isometry4 refl = reflect_through(p.frame.sigma_upper(Angle::pi_times(0, 1)));
  Tetra qpp = omega(p, {0, +1, 0, +1});
  Tetra qpm = omega(p, {0, +1, 0, -1});
  for (int k = 0; k < 4; ++k) CHECK(qpm.contains(refl.matrix() * qpp.verts[k], 1e-10));
}

TEST_CASE("dihedral angles: pi/2 except pi/m along the upper edge") {
  for (int m : {3, 5}) {
    LawsonParams p(m);
    Tetra t = omega(p, {0, 0, 0, 0});
    // faces 0,1 = the two triangles sharing the upper edge q^j q^{j+1}
    CHECK(std::abs(tetra_dihedral(t, 0, 1) - M_PI / m) < 1e-10);
    CHECK(std::abs(tetra_dihedral(t, 2, 3) - M_PI / 2) < 1e-10);
    CHECK(std::abs(tetra_dihedral(t, 0, 2) - M_PI / 2) < 1e-10);
    CHECK(std::abs(tetra_dihedral(t, 0, 3) - M_PI / 2) < 1e-10);
    CHECK(std::abs(tetra_dihedral(t, 1, 2) - M_PI / 2) < 1e-10);
    CHECK(std::abs(tetra_dihedral(t, 1, 3) - M_PI / 2) < 1e-10);
  }
}

TEST_CASE("disjoint-interior decompositions cover the sphere") {
  LawsonParams p(3);
  std::vector<Tetra> cells;
  for (std::int64_t i = 0; i < 2 * p.m; ++i)
    for (std::int64_t j = 0; j < 4; ++j) cells.push_back(omega(p, {i, 0, j, 0}));
  for (int trial = 0; trial < 300; ++trial) {
    Vec4 x = random_point();
    int strict = 0, loose = 0;
    for (const Tetra& t : cells) {
      if (t.contains(x, -1e-6)) ++strict;  // clearly interior
      if (t.contains(x, 1e-10)) ++loose;
    }
    CHECK(loose >= 1);
    CHECK(strict <= 1);
  }
  // quarter decomposition of one cell
  Tetra full = omega(p, {1, 0, 1, 0});
  std::vector<Tetra> quarters = {omega(p, {1, -1, 1, -1}), omega(p, {1, +1, 1, -1}),
                                 omega(p, {1, -1, 1, +1}), omega(p, {1, +1, 1, +1})};
  for (int trial = 0; trial < 500; ++trial) {
    Vec4 x = random_point();
    if (!full.contains(x, -1e-6)) continue;
    int strict = 0, loose = 0;
    for (const Tetra& t : quarters) {
      if (t.contains(x, -1e-6)) ++strict;
      if (t.contains(x, 1e-10)) ++loose;
    }
    CHECK(loose >= 1);
    CHECK(strict <= 1);
  }
}

TEST_CASE("quadrilateral boundary and its symmetries") {
  LawsonParams p(3);
  Quad q = quad(p, 0, 0);
  CHECK((q.verts[0] - q_lower(p, 0)).norm() < 1e-15);
  CHECK((q.verts[3] - q_upper(p, 2)).norm() < 1e-15);

  // the axis-circle reflection maps the quad to itself
  auto syms = cell_symmetries(p, 0, 0);
  for (const Vec4& v : q.samples) {
    Vec4 img = syms[2].matrix() * v;
    double best = 1e9;
    for (int e = 0; e < 4; ++e)
      best = std::min(best, distance_to_segment(q.edges[e].first, q.edges[e].second, img));
    CHECK(best < 1e-9);
  }

  // edge q_1 q^1 lies on the symmetry circle C_{pi/2m}^{pi/4}
  GreatCircle c = p.frame.circle_through(Angle::pi_times(1, 2 * p.m), Angle::pi_times(1, 4));
  for (double t : {0.0, 0.3, 0.7, 1.0})
    CHECK(c.contains(geodesic(q_lower(p, 2), q_upper(p, 2), t), 1e-12));
}

TEST_CASE("positive-orthant domains and their decompositions") {
  GreatCircleFrame f = GreatCircleFrame::standard();
  // p^{pi/2} sits in the upper half-space cut by Sigma^0
  OmuPattern up{+1, 0, 0, 0};
  CHECK(up.contains(f, Vec4(0, 0, 0, 1)));
  CHECK(!up.contains(f, Vec4(0, 0, 0, -1), 1e-12));

  // the m = 3 decomposition of the positive chamber
  LawsonParams p(3);
  auto cells = omu_decompose_up_plusplus(p);
  CHECK(cells.size() == 4);
  OmuPattern target{+1, +1, +1, +1};
  std::vector<Tetra> tets;
  for (const auto& c : cells) tets.push_back(omega(p, c));
  for (int trial = 0; trial < 2000; ++trial) {
    Vec4 x = random_point();
    bool inside = target.contains(f, x, -1e-6);
    int strict = 0, loose = 0;
    for (const Tetra& t : tets) {
      if (t.contains(x, -1e-6)) ++strict;
      if (t.contains(x, 1e-9)) ++loose;
    }
    if (inside) {
      CHECK(loose >= 1);
      CHECK(strict <= 1);
    } else {
      CHECK(strict == 0);
    }
  }

  // the larger chambers, by the same sampling
  auto star_cells = omu_decompose_up_star(p);
  CHECK(star_cells.size() == size_t(4 * p.m));
  auto plus_cells = omu_decompose_up_plus(p);
  CHECK(plus_cells.size() == size_t(2 * p.m + 2));
}

TEST_CASE("cell projection collapses the axis rotation") {
  LawsonParams p(3);
  // the axis midpoint is fixed
  Vec4 axis_pt = p.frame.p_lower(Angle());  // q_{1/2} = p_0
  CHECK((project_tetra(p, 0, 0, axis_pt) - axis_pt).norm() < 1e-14);

  // orbits through the cell cross the two boundary triangle pairs once each:
  // project a sampled orbit and verify the projection is constant on it
  Tetra cell = omega(p, {0, 0, 0, 0});
  Vec4 x = (0.4 * cell.verts[0] + 0.3 * cell.verts[1] + 0.2 * cell.verts[2] +
            0.1 * cell.verts[3])
               .normalized();
  GreatCircle axis = cell_axis(p, 0, 0);
  Vec4 base = project_tetra(p, 0, 0, x);
  int crossings_plus = 0, crossings_minus = 0;
  bool prev_plus = false, prev_minus = false;
  const int steps = 4000;
  for (int k = 0; k <= steps; ++k) {
    double t = 2.0 * M_PI * k / steps;
    Vec4 orb = rot_along(axis, Angle::radians(t)).matrix() * x;
    CHECK((project_tetra(p, 0, 0, orb) - base).norm() < 1e-10);
    // count sign changes against the two face pairs of the cell
    bool in_plus = cell.inward[0].dot(orb) >= 0 && cell.inward[1].dot(orb) >= 0;
    bool in_minus = cell.inward[2].dot(orb) >= 0 && cell.inward[3].dot(orb) >= 0;
    if (k > 0 && in_plus != prev_plus) ++crossings_plus;
    if (k > 0 && in_minus != prev_minus) ++crossings_minus;
    prev_plus = in_plus;
    prev_minus = in_minus;
  }
  // the orbit enters and leaves each side band exactly once
  CHECK(crossings_plus == 2);
  CHECK(crossings_minus == 2);
}
