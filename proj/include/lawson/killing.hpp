#pragma once

#include <array>
#include <string>

#include "lawson/jacobi.hpp"
#include "lawson/surface.hpp"

namespace lawson {

// Normal component of a Killing field sampled on the surface: the value at
// vertex v is (K x_v) . nu_v.
struct JacobiSample {
  std::string label;
  KillingMatrix killing;
  Eigen::VectorXd values;
};

// the six coordinate circles in the order C, C-perp, C_0^0, C_0^{pi/2},
// C_{pi/2}^0, C_{pi/2}^{pi/2}
std::array<GreatCircle, 6> coordinate_circles(const GreatCircleFrame& f);
std::array<std::string, 6> coordinate_circle_labels();

// the six induced fields; throws when their mass Gram matrix is rank
// deficient (broken normal convention)
std::array<JacobiSample, 6> jacobi_basis(const SurfaceMesh& s,
                                         const DiscreteOperator& op);
// smallest singular value of the normalized Gram matrix
double jacobi_gram_min_singular(const SurfaceMesh& s, const DiscreteOperator& op,
                                const std::array<JacobiSample, 6>& basis);

// sign fit of J o R = s J for one isometry that permutes the vertices
struct ParityFit {
  double sign = 0.0;      // least-squares s
  double residual = 0.0;  // ||J o R - s J||_M / ||J||_M
  bool classified = false;
};
ParityFit classify_under(const SurfaceMesh& s, const DiscreteOperator& op,
                         const Eigen::VectorXd& field, const Mat4& iso);

// signature under the three block generators (Sigma^0, Sigma^{pi/2}, Sigma_0)
std::array<ParityFit, 3> block_signature(const SurfaceMesh& s,
                                         const DiscreteOperator& op,
                                         const Eigen::VectorXd& field);

// The isometry T (rotation along C by pi/m composed with a reflection) and
// the finite difference Df = (f o T - f o T^-1) / (2 sin(pi/m)).
Mat4 twist_map(const LawsonParams& p);
Eigen::VectorXd discrete_derivative(const SurfaceMesh& s, const Eigen::VectorXd& f);

// sign reports over the marked segments and fundamental pieces
struct SignCheck {
  std::string name;
  int set_size = 0;
  double min_value = 0.0;
  double field_norm = 0.0;  // sup norm of the field
  bool ok = false;          // min >= -1e-7 * norm
};
std::vector<SignCheck> sign_checks(const SurfaceMesh& s,
                                   const std::array<JacobiSample, 6>& basis);

}  // namespace lawson
