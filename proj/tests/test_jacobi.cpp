#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lawson/jacobi.hpp>
#include <lawson/surface.hpp>

using namespace lawson;

namespace {

Eigen::VectorXd curvature_potential(const TriMesh& m) {
  std::vector<Vec4> nrm;
  std::vector<double> a2, det, defect;
  estimate_curvature_fields(m, nrm, a2, det, defect);
  Eigen::VectorXd pot(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) pot[v] = a2[v] + 2.0;
  return pot;
}

}  // namespace

TEST_CASE("assembly basics: row sums, PSD stiffness, residual bound") {
  TriMesh m = make_great_sphere_mesh(3);
  DiscreteOperator op = assemble_operator(m, curvature_potential(m));
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.size());
  CHECK((op.stiffness * ones).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(ones.dot(op.stiffness * ones) > -1e-12);
  Spectrum sp = solve_smallest(op, 6, 1e-10);
  for (int i = 0; i < sp.residuals.size(); ++i) CHECK(sp.residuals[i] < 1e-8);

  // constant function has negative quadratic form: index >= 1 for free
  double q = ones.dot(op.pencil * ones);
  CHECK(q < 0);
}

TEST_CASE("great sphere: lambda_1 -> -2, three zero modes") {
  TriMesh m = make_great_sphere_mesh(4);
  DiscreteOperator op = assemble_operator(m, curvature_potential(m));
  Spectrum sp = solve_smallest(op, 8, 1e-10);
  CHECK(std::abs(sp.eigenvalues[0] + 2.0) < 0.04);
  for (int i = 1; i <= 3; ++i) CHECK(std::abs(sp.eigenvalues[i]) < 0.05);
  CHECK(sp.eigenvalues[4] > 1.0);
  CountResult c = count_with_band(sp, 0.05);
  CHECK(c.index == 1);
  CHECK(c.nullity == 3);
}

TEST_CASE("clifford torus: flat-torus oracle spectrum, index 5 nullity 4") {
  TriMesh m = make_clifford_torus_mesh(64, 64);
  DiscreteOperator op = assemble_operator(m, curvature_potential(m));
  Spectrum sp = solve_smallest(op, 12, 1e-10);
  // oracle: eigenvalues 2(k^2+l^2) - 4 of the flat square torus of side
  // sqrt(2) pi, enumerated with multiplicity
  std::vector<double> oracle;
  for (int k = -3; k <= 3; ++k)
    for (int l = -3; l <= 3; ++l) oracle.push_back(2.0 * (k * k + l * l) - 4.0);
  std::sort(oracle.begin(), oracle.end());
  for (int i = 0; i < 9; ++i) CHECK(std::abs(sp.eigenvalues[i] - oracle[i]) < 0.08);
  CountResult c = count_with_band(sp, 0.1);
  CHECK(c.index == 5);
  CHECK(c.nullity == 4);
}

TEST_CASE("potential-only pencil is diagonal") {
  // single triangle pair with stiffness ignored: eigenvalues equal the
  // negated potential values
  TriMesh m;
  m.metric = Metric::Flat;
  m.pos = {Vec4(0, 0, 0, 0), Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Vec4(1, 1, 0, 0)};
  m.tri = {{0, 1, 2}, {1, 3, 2}};
  Eigen::VectorXd pot(4);
  pot << 1.0, 2.0, 3.0, 4.0;
  DiscreteOperator op = assemble_operator(m, pot);
  op.pencil = -SparseMat((Eigen::VectorXd(op.potential.cwiseProduct(op.mass))).asDiagonal());
  Spectrum sp = solve_smallest(op, 4, 1e-12);
  std::vector<double> expect = {-4, -3, -2, -1};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(sp.eigenvalues[i] - expect[i]) < 1e-10);
}

TEST_CASE("dirichlet disc: first Bessel zero squared") {
  TriMesh m = make_flat_disc_mesh(28, 56);
  Eigen::VectorXd pot = Eigen::VectorXd::Constant(m.num_vertices(), 0.0);
  MixedBC bc;
  auto bmask = boundary_vertex_mask(m);
  for (int v = 0; v < m.num_vertices(); ++v)
    if (bmask[v]) bc.dirichlet.push_back(v);
  DiscreteOperator op = assemble_operator(m, pot, &bc);
  Spectrum sp = solve_smallest(op, 3, 1e-10);
  const double j01_sq = 5.783185962946785;  // first zero of J_0, squared
  CHECK(std::abs(sp.eigenvalues[0] - j01_sq) / j01_sq < 0.01);
}

TEST_CASE("neumann constant mode") {
  TriMesh m = make_flat_rectangle_mesh(1.0, 1.0, 10, 10);
  Eigen::VectorXd pot = Eigen::VectorXd::Zero(m.num_vertices());
  DiscreteOperator op = assemble_operator(m, pot);
  Spectrum sp = solve_smallest(op, 3, 1e-12);
  CHECK(std::abs(sp.eigenvalues[0]) < 1e-10);
  Eigen::VectorXd v0 = sp.vectors.col(0);
  double spread = v0.maxCoeff() - v0.minCoeff();
  CHECK(spread < 1e-6 * v0.cwiseAbs().maxCoeff());
}

TEST_CASE("inertia counting agrees with the spectrum") {
  TriMesh m = make_flat_rectangle_mesh(M_PI, M_PI / 2, 24, 12);
  Eigen::VectorXd pot = Eigen::VectorXd::Constant(m.num_vertices(), 3.0);
  MixedBC bc;
  auto bmask = boundary_vertex_mask(m);
  for (int v = 0; v < m.num_vertices(); ++v)
    if (bmask[v]) bc.dirichlet.push_back(v);
  DiscreteOperator op = assemble_operator(m, pot, &bc);
  Spectrum sp = solve_smallest(op, 10, 1e-10);
  for (double t : {-2.5, -1.0, 0.0, 1.5, 4.0}) {
    int by_inertia = count_below(op, t);
    int by_spectrum = 0;
    for (int i = 0; i < sp.eigenvalues.size(); ++i)
      if (sp.eigenvalues[i] < t) ++by_spectrum;
    if (by_inertia <= 10) CHECK(by_inertia == by_spectrum);
  }
}

TEST_CASE("eigenvalue convergence under refinement") {
  // Dirichlet rectangle oracle: lambda_{k,l} = k^2 + 4 l^2 on [0,pi] x [0,pi/2]
  auto solve_at = [](int nx) {
    TriMesh m = make_flat_rectangle_mesh(M_PI, M_PI / 2, nx, nx / 2);
    Eigen::VectorXd pot = Eigen::VectorXd::Zero(m.num_vertices());
    MixedBC bc;
    auto bmask = boundary_vertex_mask(m);
    for (int v = 0; v < m.num_vertices(); ++v)
      if (bmask[v]) bc.dirichlet.push_back(v);
    DiscreteOperator op = assemble_operator(m, pot, &bc);
    return solve_smallest(op, 6, 1e-10);
  };
  Spectrum coarse = solve_at(16), fine = solve_at(32);
  std::vector<double> oracle;
  for (int k = 1; k <= 6; ++k)
    for (int l = 1; l <= 6; ++l) oracle.push_back(k * k + 4.0 * l * l);
  std::sort(oracle.begin(), oracle.end());
  for (int i = 0; i < 6; ++i) {
    double ec = std::abs(coarse.eigenvalues[i] - oracle[i]);
    double ef = std::abs(fine.eigenvalues[i] - oracle[i]);
    CHECK(ef < ec);
    CHECK(ef < 0.01 * oracle[i]);
  }
}

TEST_CASE("bc monotonicity: dirichlet never below neumann") {
  TriMesh m = make_flat_disc_mesh(12, 24);
  Eigen::VectorXd pot = Eigen::VectorXd::Zero(m.num_vertices());
  MixedBC bc;
  auto bmask = boundary_vertex_mask(m);
  for (int v = 0; v < m.num_vertices(); ++v)
    if (bmask[v]) bc.dirichlet.push_back(v);
  DiscreteOperator neumann = assemble_operator(m, pot);
  DiscreteOperator dirichlet = assemble_operator(m, pot, &bc);
  Spectrum sn = solve_smallest(neumann, 4, 1e-10);
  Spectrum sd = solve_smallest(dirichlet, 4, 1e-10);
  for (int i = 0; i < 4; ++i) CHECK(sd.eigenvalues[i] >= sn.eigenvalues[i] - 1e-10);
}
