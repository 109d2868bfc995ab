#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lawson/counting.hpp>

using namespace lawson;

namespace {

// closed-form mixed-condition spectrum of the flat rectangle [0,a] x [0,b]
// split per axis: Dirichlet-Dirichlet sin(k pi x / a), Neumann-Neumann
// cos(k pi x / a), mixed sin((k+1/2) pi x / a)
std::vector<double> rectangle_modes_1d(double len, bool left_d, bool right_d, int kmax) {
  std::vector<double> out;
  for (int k = 0; k <= kmax; ++k) {
    double mu;
    if (left_d && right_d)
      mu = (k + 1.0) * M_PI / len;
    else if (!left_d && !right_d)
      mu = k * M_PI / len;
    else
      mu = (k + 0.5) * M_PI / len;
    out.push_back(mu * mu);
  }
  return out;
}

std::vector<double> rectangle_spectrum(double a, double b, bool lx, bool rx, bool ly,
                                       bool ry, int kmax) {
  auto mx = rectangle_modes_1d(a, lx, rx, kmax);
  auto my = rectangle_modes_1d(b, ly, ry, kmax);
  std::vector<double> out;
  for (double u : mx)
    for (double v : my) out.push_back(u + v);
  std::sort(out.begin(), out.end());
  return out;
}

int count_below_value(const std::vector<double>& spec, double t) {
  int n = 0;
  for (double v : spec)
    if (v < t) ++n;
  return n;
}

}  // namespace

TEST_CASE("subdivision bounds on a rectangle cut in half, against the oracle") {
  // [0,2] x [0,1], all-Dirichlet outer boundary, cut at x = 1
  const double a = 2.0, b = 1.0;
  const int nx = 40, ny = 20;
  TriMesh m = make_flat_rectangle_mesh(a, b, nx, ny);
  Eigen::VectorXd pot = Eigen::VectorXd::Zero(m.num_vertices());

  MRInput in;
  in.mesh = m;
  in.potential = pot;
  auto bmask = boundary_vertex_mask(m);
  for (int v = 0; v < m.num_vertices(); ++v)
    if (bmask[v]) in.outer_dirichlet.push_back(v);
  std::vector<int> cut;
  for (int v = 0; v < m.num_vertices(); ++v)
    if (std::abs(m.pos[v][0] - 1.0) < 1e-12) cut.push_back(v);
  in.cuts.push_back(cut);
  // probe between oracle eigenvalues, away from both spectra
  in.lambda = 30.0;
  in.band = 0.4;

  MRReport rep = montiel_ros_check(in);
  CHECK(rep.n_pieces == 2);
  CHECK(rep.conclusive);
  CHECK(rep.holds_lower);
  CHECK(rep.holds_upper);

  // margins match the closed-form counts (discretization shifts are far
  // below the probe separation at this resolution)
  auto whole = rectangle_spectrum(a, b, true, true, true, true, 12);
  auto piece_d = rectangle_spectrum(1.0, b, true, true, true, true, 12);
  auto piece_n_first = rectangle_spectrum(1.0, b, true, false, true, true, 12);
  CHECK(rep.whole_strictly_below == count_below_value(whole, in.lambda - 1e-9));
  CHECK(rep.piece_counts_dirichlet[0][0] == count_below_value(piece_d, in.lambda - 1e-9));
  // the two pieces are congruent; variant (ii) mixes <= on the first with <
  // on the second
  CHECK(rep.rhs_neumann ==
        count_below_value(piece_n_first, in.lambda + 1e-9) +
            count_below_value(piece_n_first, in.lambda - 1e-9));
}

TEST_CASE("trivial subdivision reduces to identities") {
  TriMesh m = make_flat_rectangle_mesh(1.0, 1.0, 12, 12);
  MRInput in;
  in.mesh = m;
  in.potential = Eigen::VectorXd::Zero(m.num_vertices());
  auto bmask = boundary_vertex_mask(m);
  for (int v = 0; v < m.num_vertices(); ++v)
    if (bmask[v]) in.outer_dirichlet.push_back(v);
  in.lambda = 70.0;
  in.band = 1.0;
  MRReport rep = montiel_ros_check(in);
  CHECK(rep.n_pieces == 1);
  CHECK(rep.rhs_dirichlet == rep.whole_strictly_below);
  CHECK(rep.rhs_neumann == rep.whole_below_or_equal);
  CHECK(rep.holds_lower);
  CHECK(rep.holds_upper);
}

TEST_CASE("nodal domain counting with interval semantics") {
  TriMesh m = make_flat_rectangle_mesh(1.0, 1.0, 20, 20);
  Eigen::VectorXd f(m.num_vertices());

  // one sign change along x: two domains
  for (int v = 0; v < m.num_vertices(); ++v) f[v] = std::sin(2.0 * M_PI * m.pos[v][0]);
  NodalCount nc = nodal_domains(m, f);
  CHECK(nc.lo <= 2);
  CHECK(nc.hi >= 2);
  CHECK(nc.hi <= 3);

  // positive function: exactly one
  for (int v = 0; v < m.num_vertices(); ++v) f[v] = 1.0 + 0.1 * m.pos[v][0];
  nc = nodal_domains(m, f);
  CHECK(nc.lo == 1);
  CHECK(nc.hi == 1);

  // checkerboard of four cells
  for (int v = 0; v < m.num_vertices(); ++v)
    f[v] = std::sin(2.0 * M_PI * m.pos[v][0]) * std::sin(2.0 * M_PI * m.pos[v][1]);
  nc = nodal_domains(m, f);
  CHECK(nc.lo <= 4);
  CHECK(4 <= nc.hi);
}

TEST_CASE("courant bounds on the dirichlet square") {
  TriMesh m = make_flat_rectangle_mesh(1.0, 1.0, 24, 24);
  Eigen::VectorXd pot = Eigen::VectorXd::Zero(m.num_vertices());
  MixedBC bc;
  auto bmask = boundary_vertex_mask(m);
  for (int v = 0; v < m.num_vertices(); ++v)
    if (bmask[v]) bc.dirichlet.push_back(v);
  DiscreteOperator op = assemble_operator(m, pot, &bc);
  Spectrum sp = solve_smallest(op, 8, 1e-10);
  for (int i = 0; i < 8; ++i) {
    NodalCount nc = nodal_domains(m, Eigen::VectorXd(sp.vectors.col(i)));
    if (i == 0) {
      CHECK(nc.lo == 1);
      CHECK(nc.hi == 1);
    } else {
      CHECK(nc.hi <= i + 1);
      CHECK(nc.lo >= 2);
    }
  }
  // lambda_1 is simple
  CHECK(sp.eigenvalues[1] - sp.eigenvalues[0] > 1.0);
}
