#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lawson/verify.hpp>

using namespace lawson;

namespace {

const BuiltSurface& built(int m) {
  static std::map<int, BuiltSurface> cache;
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, build_and_analyze(m, 8, 1e-9, 16)).first;
  return it->second;
}

}  // namespace

TEST_CASE("six fields, full-rank Gram, marked-point values") {
  const BuiltSurface& b = built(3);
  double smin = jacobi_gram_min_singular(b.surf, b.op, b.basis);
  CHECK(smin > 1e-3);

  // values recompute from the stored Killing matrices
  for (const auto& j : b.basis) {
    for (int v = 0; v < b.surf.mesh.num_vertices(); v += 11) {
      double expect = j.killing.at(b.surf.mesh.pos[v]).dot(b.surf.normal[v]);
      CHECK(std::abs(j.values[v] - expect) < 1e-12);
    }
  }

  // J_C(q^1) != 0 and J_{C-perp}(q_1) != 0
  int vq_up1 = b.surf.vertex_on_cperp.at(2);
  int vq_1 = b.surf.vertex_on_c.at(2);
  CHECK(std::abs(b.basis[0].values[vq_up1]) > 0.5);
  CHECK(std::abs(b.basis[1].values[vq_1]) > 0.5);

  // the four mixed fields vanish at the umbilic q^1
  for (int k = 2; k < 6; ++k) CHECK(std::abs(b.basis[k].values[vq_up1]) < 1e-9);
}

TEST_CASE("parity classification against the paper's table") {
  const BuiltSurface& b = built(3);
  // expected signatures under (Sigma^0, Sigma^{pi/2}, Sigma_0)
  const double expect[6][3] = {
      {-1, -1, +1},  // J_C
      {+1, +1, -1},  // J_{C-perp}
      {-1, +1, -1},  // J_{C_0^0}
      {+1, -1, -1},  // J_{C_0^{pi/2}}
      {-1, +1, +1},  // J_{C_{pi/2}^0}
      {+1, -1, +1},  // J_{C_{pi/2}^{pi/2}}
  };
  for (int k = 0; k < 6; ++k) {
    auto sig = block_signature(b.surf, b.op, b.basis[k].values);
    for (int g = 0; g < 3; ++g) {
      CHECK(sig[g].classified);
      CHECK(std::abs(sig[g].sign - expect[k][g]) < 1e-3);
    }
  }

  // J_C even under every Sigma_{i pi/m}
  LawsonParams p(3);
  for (int i = 0; i < 3; ++i) {
    Mat4 r = reflect_through(p.frame.sigma_lower(Angle::pi_times(i, 3))).matrix();
    auto fit = classify_under(b.surf, b.op, b.basis[0].values, r);
    CHECK(fit.classified);
    CHECK(std::abs(fit.sign - 1.0) < 1e-3);
  }
}

TEST_CASE("twist map and discrete derivative identities") {
  const BuiltSurface& b = built(3);
  LawsonParams p(3);
  Mat4 t = twist_map(p);
  // the twist agrees with rot-along composed with the Sigma^{pi/4} reflection
  Mat4 alt = rot_along(p.frame.circle(), Angle::pi_times(1, 3)).matrix() *
             reflect_through(p.frame.sigma_upper(Angle::pi_times(1, 4))).matrix();
  CHECK((t - alt).cwiseAbs().maxCoeff() < 1e-12);

  // D of a constant vanishes
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(b.surf.mesh.num_vertices());
  CHECK(discrete_derivative(b.surf, ones).cwiseAbs().maxCoeff() == 0.0);

  // Lemma-level identities: D J_{C_0^0} = J_{C_{pi/2}^{pi/2}} and the pair
  // D J_{C_{pi/2}^0} = J_{C_0^{pi/2}}; near-exact on the symmetric mesh
  auto rel_err = [&](const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
    Eigen::VectorXd diff = got - want;
    return std::sqrt(mass_inner(b.op, diff, diff) / mass_inner(b.op, want, want));
  };
  CHECK(rel_err(discrete_derivative(b.surf, b.basis[2].values), b.basis[5].values) < 1e-8);
  CHECK(rel_err(discrete_derivative(b.surf, b.basis[5].values),
                Eigen::VectorXd(-b.basis[2].values)) < 1e-8);
  CHECK(rel_err(discrete_derivative(b.surf, b.basis[4].values), b.basis[3].values) < 1e-8);
  CHECK(rel_err(discrete_derivative(b.surf, b.basis[3].values),
                Eigen::VectorXd(-b.basis[4].values)) < 1e-8);
}

TEST_CASE("mirror-composition identity for odd m") {
  const BuiltSurface& b = built(3);
  LawsonParams p(3);
  // J_{C_0^0} o refl_{C_{pi/2}^{pi/4}} = J_{C_0^{pi/2}}
  GreatCircle c = p.frame.circle_through(Angle::pi_times(1, 2), Angle::pi_times(1, 4));
  Mat4 r = reflect_through(c.span()).matrix();
  auto perm = vertex_permutation(b.surf.mesh, r, 1e-8);
  Eigen::VectorXd composed(b.surf.mesh.num_vertices());
  for (int v = 0; v < composed.size(); ++v) composed[v] = b.basis[2].values[perm[v]];
  Eigen::VectorXd diff = composed - b.basis[3].values;
  double rel = std::sqrt(mass_inner(b.op, diff, diff) /
                         mass_inner(b.op, b.basis[3].values, b.basis[3].values));
  CHECK(rel < 1e-8);
}

TEST_CASE("operator residuals: small on the basis, order one on noise") {
  const BuiltSurface& b = built(3);
  for (const auto& j : b.basis) {
    double r = operator_residual(b.op, j.values);
    CHECK(r < 0.5);
  }
  // a generic smooth non-Jacobi field keeps an order-one residual
  Eigen::VectorXd noise(b.surf.mesh.num_vertices());
  for (int v = 0; v < noise.size(); ++v) {
    const Vec4& x = b.surf.mesh.pos[v];
    noise[v] = std::sin(3.0 * x[0]) * std::cos(2.0 * x[2]) + 0.5 * x[1] * x[3];
  }
  CHECK(operator_residual(b.op, noise) > 1.0);
}

TEST_CASE("residuals shrink under refinement") {
  const BuiltSurface& coarse = built(3);
  BuiltSurface fine = build_and_analyze(3, 16, 1e-9, 16);
  for (int k = 0; k < 6; ++k) {
    double rc = operator_residual(coarse.op, coarse.basis[k].values);
    double rf = operator_residual(fine.op, fine.basis[k].values);
    CHECK(rf < rc);
  }
}

TEST_CASE("sign checks report no violations") {
  const BuiltSurface& b = built(3);
  auto checks = sign_checks(b.surf, b.basis);
  CHECK(!checks.empty());
  for (const auto& c : checks) {
    INFO(c.name, " min ", c.min_value);
    CHECK(c.min_value >= -1e-6 * c.field_norm);
    CHECK(c.set_size > 0);
  }
}
