#include "lawson/killing.hpp"

#include <Eigen/SVD>

namespace lawson {

std::array<GreatCircle, 6> coordinate_circles(const GreatCircleFrame& f) {
  Angle zero = Angle::pi_times(0, 1);
  Angle half = Angle::pi_times(1, 2);
  return {f.circle(),
          f.circle_perp(),
          f.circle_through(zero, zero),
          f.circle_through(zero, half),
          f.circle_through(half, zero),
          f.circle_through(half, half)};
}

std::array<std::string, 6> coordinate_circle_labels() {
  return {"C", "Cperp", "C_0^0", "C_0^pi2", "C_pi2^0", "C_pi2^pi2"};
}

std::array<JacobiSample, 6> jacobi_basis(const SurfaceMesh& s,
                                         const DiscreteOperator& op) {
  auto circles = coordinate_circles(s.params().frame);
  auto labels = coordinate_circle_labels();
  std::array<JacobiSample, 6> basis;
  for (int k = 0; k < 6; ++k) {
    KillingMatrix km = killing_about(circles[k]);
    Eigen::VectorXd vals(s.mesh.num_vertices());
    for (int v = 0; v < s.mesh.num_vertices(); ++v)
      vals[v] = km.at(s.mesh.pos[v]).dot(s.normal[v]);
    basis[k] = JacobiSample{labels[k], km, vals};
  }
  if (jacobi_gram_min_singular(s, op, basis) < 1e-6)
    throw GeometryError("jacobi_basis: Gram matrix rank deficient");
  return basis;
}

double jacobi_gram_min_singular(const SurfaceMesh&, const DiscreteOperator& op,
                                const std::array<JacobiSample, 6>& basis) {
  Eigen::MatrixXd gram(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      gram(i, j) = mass_inner(op, basis[i].values, basis[j].values);
  // normalize so the scale of the fields drops out
  Eigen::VectorXd d = gram.diagonal().cwiseSqrt();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) gram(i, j) /= d[i] * d[j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  return svd.singularValues().minCoeff();
}

ParityFit classify_under(const SurfaceMesh& s, const DiscreteOperator& op,
                         const Eigen::VectorXd& field, const Mat4& iso) {
  std::vector<int> perm = vertex_permutation(s.mesh, iso);
  Eigen::VectorXd composed(field.size());
  for (int v = 0; v < field.size(); ++v) composed[v] = field[perm[v]];
  double jj = mass_inner(op, field, field);
  double js = mass_inner(op, composed, field);
  ParityFit fit;
  fit.sign = js / jj;
  Eigen::VectorXd diff = composed - fit.sign * field;
  fit.residual = std::sqrt(mass_inner(op, diff, diff) / jj);
  fit.classified = fit.residual <= 1e-6;
  return fit;
}

std::array<ParityFit, 3> block_signature(const SurfaceMesh& s,
                                         const DiscreteOperator& op,
                                         const Eigen::VectorXd& field) {
  LawsonParams p = s.params();
  Angle zero = Angle::pi_times(0, 1);
  Angle half = Angle::pi_times(1, 2);
  Mat4 r_up0 = reflect_through(p.frame.sigma_upper(zero)).matrix();
  Mat4 r_up1 = reflect_through(p.frame.sigma_upper(half)).matrix();
  Mat4 r_lo0 = reflect_through(p.frame.sigma_lower(zero)).matrix();
  return {classify_under(s, op, field, r_up0), classify_under(s, op, field, r_up1),
          classify_under(s, op, field, r_lo0)};
}

Mat4 twist_map(const LawsonParams& p) {
  // reflection through the circle spanned by q_1, q^1 composed after the
  // reflection through Sigma_0
  GreatCircle c(q_lower(p, 2), q_upper(p, 2));
  Mat4 r_circle = reflect_through(c.span()).matrix();
  Mat4 r_sigma = reflect_through(p.frame.sigma_lower(Angle::pi_times(0, 1))).matrix();
  return r_circle * r_sigma;
}

Eigen::VectorXd discrete_derivative(const SurfaceMesh& s, const Eigen::VectorXd& f) {
  LawsonParams p = s.params();
  Mat4 t = twist_map(p);
  std::vector<int> perm_fwd = vertex_permutation(s.mesh, t);
  std::vector<int> perm_bwd = vertex_permutation(s.mesh, Mat4(t.transpose()));
  double scale = 1.0 / (2.0 * std::sin(M_PI / p.m));
  Eigen::VectorXd out(f.size());
  for (int v = 0; v < f.size(); ++v)
    out[v] = scale * (f[perm_fwd[v]] - f[perm_bwd[v]]);
  return out;
}

namespace {

void push_segment_check(std::vector<SignCheck>& out, const SurfaceMesh& s,
                        const JacobiSample& field, int sign, std::int64_t i,
                        std::int64_t j, const std::string& name) {
  auto verts = segment_vertices(s, i, j);
  SignCheck c;
  c.name = name;
  c.set_size = int(verts.size());
  c.field_norm = field.values.cwiseAbs().maxCoeff();
  double m = std::numeric_limits<double>::infinity();
  for (int v : verts) m = std::min(m, sign * field.values[v]);
  c.min_value = verts.empty() ? 0.0 : m;
  c.ok = c.min_value >= -1e-7 * c.field_norm;
  out.push_back(c);
}

void push_region_check(std::vector<SignCheck>& out, const SurfaceMesh& s,
                       const JacobiSample& field, int sign, const OmuPattern& pat,
                       const std::string& name) {
  Submesh sub = extract_chamber(s, pat);
  SignCheck c;
  c.name = name;
  c.set_size = int(sub.to_parent.size());
  c.field_norm = field.values.cwiseAbs().maxCoeff();
  double m = std::numeric_limits<double>::infinity();
  for (int v : sub.to_parent) m = std::min(m, sign * field.values[v]);
  c.min_value = sub.to_parent.empty() ? 0.0 : m;
  c.ok = c.min_value >= -1e-7 * c.field_norm;
  out.push_back(c);
}

}  // namespace

std::vector<SignCheck> sign_checks(const SurfaceMesh& s,
                                   const std::array<JacobiSample, 6>& basis) {
  const int m = s.m;
  std::vector<SignCheck> out;
  const JacobiSample& j00 = basis[2];   // C_0^0
  const JacobiSample& j0p = basis[3];   // C_0^{pi/2}
  const JacobiSample& jp0 = basis[4];   // C_{pi/2}^0
  const JacobiSample& jpp = basis[5];   // C_{pi/2}^{pi/2}

  auto in_range = [m](std::int64_t i, bool odd, bool low_half) {
    if ((i % 2 != 0) != odd) return false;
    return low_half ? (2 * i <= m + 1) : (2 * i >= m + 1 && i <= m);
  };

  // segments q_i q^1; index windows follow the four sign statements
  for (std::int64_t i = 1; i <= m; ++i) {
    std::string suffix = " on q_" + std::to_string(i) + " q^1";
    if (in_range(i, true, true) || in_range(i, false, false))
      push_segment_check(out, s, j00, +1, i, 1, "J_C00 >= 0" + suffix);
    if (in_range(i, false, true) || in_range(i, true, false))
      push_segment_check(out, s, j0p, +1, i, 1, "J_C0p >= 0" + suffix);
    if (in_range(i, false, true))
      push_segment_check(out, s, jp0, -1, i, 1, "J_Cp0 <= 0" + suffix);
    if (in_range(i, true, false))
      push_segment_check(out, s, jp0, +1, i, 1, "J_Cp0 >= 0" + suffix);
    if (in_range(i, true, true))
      push_segment_check(out, s, jpp, +1, i, 1, "J_Cpp >= 0" + suffix);
    if (in_range(i, false, false))
      push_segment_check(out, s, jpp, -1, i, 1, "J_Cpp <= 0" + suffix);
  }

  // region statements on the fundamental pieces
  OmuPattern up_plus{+1, +1, +1, 0};    // x4,x3,x2 >= 0
  OmuPattern up_plusplus{+1, +1, +1, +1};
  push_region_check(out, s, j00, +1, up_plus, "J_C00 >= 0 on M^{++}_{+*}");
  push_region_check(out, s, j0p, +1, up_plus, "J_C0p >= 0 on M^{++}_{+*}");
  if (m % 2 == 0) {
    push_region_check(out, s, jpp, +1, up_plusplus, "J_Cpp >= 0 on M^{++}_{++}");
    push_region_check(out, s, jp0, -1, up_plusplus, "J_Cp0 <= 0 on M^{++}_{++}");
  }
  return out;
}

}  // namespace lawson
