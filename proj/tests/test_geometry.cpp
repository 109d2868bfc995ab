#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lawson/sphere.hpp>
#include <lawson/verify.hpp>

using namespace lawson;

namespace {

Vec4 e(int i) { return Vec4::Unit(i); }

// seeded pseudo-random orthonormal frames for property tests
Mat4 random_rotation(std::uint64_t seed) {
  std::uint64_t s = seed;
  auto next = [&]() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return double(s >> 11) / double(1ull << 53) - 0.5;
  };
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = next();
  Eigen::HouseholderQR<Mat4> qr(m);
  Mat4 q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace

TEST_CASE("reflections match the coordinate-frame table") {
  GreatCircleFrame f = GreatCircleFrame::standard();
  // Sigma^0 = span(p_0, p_{pi/2}, p^0) reflects as diag(1,1,1,-1)
  Isometry4 r = reflect_through(f.sigma_upper(Angle::pi_times(0, 1)));
  Mat4 expect = Mat4::Identity();
  expect(3, 3) = -1;
  CHECK((r.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);

  // full space reflects as the identity
  Subspace all = Subspace::span_of({e(0), e(1), e(2), e(3)});
  CHECK((reflect_through(all).matrix() - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);

  // the circle through p_0, p^0 sends p_{pi/2} to its antipode
  GreatCircle c00 = f.circle_through(Angle::pi_times(0, 1), Angle::pi_times(0, 1));
  Vec4 img = reflect_through(c00.span()).matrix() * e(1);
  CHECK((img + e(1)).norm() < 1e-12);
}

TEST_CASE("reflection is an involution on random subspaces") {
  std::uint64_t seed = 7;
  for (int trial = 0; trial < 25; ++trial) {
    Mat4 q = random_rotation(++seed * 1257787);
    for (int dim = 0; dim <= 4; ++dim) {
      std::vector<Vec4> basis;
      for (int d = 0; d < dim; ++d) basis.push_back(q.col(d));
      Isometry4 r = reflect_through(Subspace::span_of(basis));
      CHECK((r.matrix() * r.matrix() - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("rotations about and along the base circle") {
  GreatCircleFrame f = GreatCircleFrame::standard();
  GreatCircle c = f.circle();

  // rot_about(C, phi) p^0 = p^phi
  Angle phi = Angle::pi_times(3, 11);
  Vec4 img = rot_about(c, phi).matrix() * f.p_upper(Angle());
  CHECK((img - f.p_upper(phi)).norm() < 1e-12);

  // a full turn is the identity
  CHECK((rot_about(c, Angle::pi_times(2, 1)).matrix() - Mat4::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // rot_along(C, pi/m) o reflect(Sigma^{pi/4}) maps the frame points as the
  // twist map does
  const int m = 5;
  Isometry4 tw = rot_along(c, Angle::pi_times(1, m))
                     .compose(reflect_through(f.sigma_upper(Angle::pi_times(1, 4))));
  CHECK((tw.matrix() * e(0) - f.p_lower(Angle::pi_times(1, m))).norm() < 1e-12);
  CHECK((tw.matrix() * e(1) -
         f.p_lower(Angle::pi_times(1, 2) + Angle::pi_times(1, m)))
            .norm() < 1e-12);
  CHECK((tw.matrix() * e(2) - e(3)).norm() < 1e-12);
  CHECK((tw.matrix() * e(3) - e(2)).norm() < 1e-12);
}

TEST_CASE("coordinate Killing matrices, entry for entry") {
  GreatCircleFrame f = GreatCircleFrame::standard();
  auto entry = [](int to, int from) {
    Mat4 m = Mat4::Zero();
    m(to, from) = 1.0;
    return m;
  };
  // K_{C-perp} = K^C: x^1 p_{pi/2} - x^2 p_0
  CHECK((killing_about(f.circle_perp()).matrix() - (entry(1, 0) - entry(0, 1)))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  // K_C: x^3 p^{pi/2} - x^4 p^0
  CHECK((killing_about(f.circle()).matrix() - (entry(3, 2) - entry(2, 3)))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  Angle zero = Angle::pi_times(0, 1), half = Angle::pi_times(1, 2);
  // K_{C_{pi/2}^{pi/2}}: x^1 p^0 - x^3 p_0
  CHECK((killing_about(f.circle_through(half, half)).matrix() -
         (entry(2, 0) - entry(0, 2)))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  // K_{C_0^0}: x^4 p_{pi/2} - x^2 p^{pi/2}
  CHECK((killing_about(f.circle_through(zero, zero)).matrix() -
         (entry(1, 3) - entry(3, 1)))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  // K_{C_0^{pi/2}}: x^2 p^0 - x^3 p_{pi/2}
  CHECK((killing_about(f.circle_through(zero, half)).matrix() -
         (entry(2, 1) - entry(1, 2)))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  // K_{C_{pi/2}^0}: x^1 p^{pi/2} - x^4 p_0
  CHECK((killing_about(f.circle_through(half, zero)).matrix() -
         (entry(3, 0) - entry(0, 3)))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // axis points are fixed: K_{C_{pi/2}^{pi/2}} vanishes at p^{pi/2}
  CHECK(killing_about(f.circle_through(half, half)).at(e(3)).norm() == 0.0);
}

TEST_CASE("orbit projection") {
  GreatCircleFrame f = GreatCircleFrame::standard();
  GreatCircle c = f.circle();
  Vec4 p0 = f.p_lower(Angle());

  // fixed points of the projection
  Vec4 x(0.6, 0.0, 0.0, 0.8);
  CHECK((orbit_project(c, p0, x) - x).norm() < 1e-12);

  // points on C map to the base point; brute-force oracle over the sampled
  // orbit confirms the hemisphere intersection
  Vec4 y = f.p_lower(Angle::pi_times(5, 9));
  Vec4 proj = orbit_project(c, p0, y);
  CHECK((proj - p0).norm() < 1e-12);
  {
    double best = 1e9;
    Vec4 best_pt = Vec4::Zero();
    for (int k = 0; k < 40000; ++k) {
      double t = 2.0 * M_PI * k / 40000;
      Vec4 orb = rot_along(c, Angle::radians(t)).matrix() * y;
      // hemisphere span(C-perp, p0) with x . p0 >= 0
      double off = std::abs(orb[1]);
      if (orb[0] >= -1e-9 && off < best) {
        best = off;
        best_pt = orb;
      }
    }
    CHECK(best < 2e-4);  // limited by the sampling resolution of the oracle
    CHECK((best_pt - proj).norm() < 1e-3);
  }

  // orthogonality of orbit and hemisphere at a generic intersection: the
  // orbit tangent aligns with the hemisphere normal within S^3
  Vec4 z = Vec4(0.5, 0.5, 0.5, 0.5);
  Vec4 pz = orbit_project(c, p0, z);
  Vec4 orbit_tangent = killing_along(c).at(pz).normalized();
  Vec4 hemi_normal = (e(1) - e(1).dot(pz) * pz).normalized();
  CHECK(std::abs(std::abs(orbit_tangent.dot(hemi_normal)) - 1.0) < 1e-9);
}

TEST_CASE("geodesics and cones") {
  GreatCircleFrame f = GreatCircleFrame::standard();
  Vec4 p = f.p_lower(Angle()), q = f.p_lower(Angle::pi_times(1, 2));
  CHECK((geodesic(p, q, 0.0) - p).norm() == 0.0);
  CHECK((geodesic(p, q, 0.5) - f.p_lower(Angle::pi_times(1, 4))).norm() < 1e-12);
  CHECK_THROWS_AS(geodesic(p, Vec4(-p), 0.5), GeometryError);

  // midpoint identity for the subdivision points
  LawsonParams params(4);
  Vec4 a = q_lower(params, 2), b = q_lower(params, 4), mid = q_lower(params, 3);
  CHECK((geodesic(a, b, 0.5) - mid).norm() < 1e-12);

  // hemisphere membership, exact form; the equator C itself is inside the
  // closed hemisphere, the antipode of the pole is not
  CHECK(hemisphere_contains(f.circle_perp(), f.p_upper(Angle()), e(2)));
  CHECK(hemisphere_contains(f.circle_perp(), f.p_upper(Angle()), e(0)));
  CHECK(!hemisphere_contains(f.circle_perp(), f.p_upper(Angle()), Vec4(-e(2))));
  CHECK(!hemisphere_contains(f.circle_perp(), f.p_upper(Angle()), e(3)));
}

TEST_CASE("geometry identity suite at small scale") {
  SuiteReport rep = suite_geometry({3}, 6);
  for (const auto& c : rep.checks) {
    INFO(c.name, " deviation ", c.value);
    CHECK(c.pass);
  }
}
