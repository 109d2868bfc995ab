#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "lawson/angle.hpp"

namespace lawson {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Mat4X = Eigen::Matrix<double, 4, Eigen::Dynamic>;

// tolerance policy: representation-level identities vs anything downstream
// of an iterative solve
inline constexpr double kGeomTol = 1e-12;
inline constexpr double kSolveTol = 1e-9;

struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// 4D generalization of the cross product: the unique vector orthogonal to
// a, b, c with det[a b c cross4(a,b,c)] >= 0 scaling as the parallelepiped.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c);

// ---------------------------------------------------------------------------
// Domain types

// A point of the unit three-sphere.
class UnitVec4 {
 public:
  explicit UnitVec4(const Vec4& v);           // throws unless |v| = 1 within kGeomTol
  static UnitVec4 normalized(const Vec4& v);  // projects to the sphere

  const Vec4& vec() const { return v_; }
  double x1() const { return v_[0]; }
  double x2() const { return v_[1]; }
  double x3() const { return v_[2]; }
  double x4() const { return v_[3]; }

 private:
  Vec4 v_;
};

// A linear subspace of R^4 held as an orthonormal basis (dim 0..4).
class Subspace {
 public:
  Subspace() : basis_(4, 0) {}                 // the zero subspace
  explicit Subspace(const Mat4X& orthonormal_basis);

  // Gram-Schmidt span of arbitrary (possibly dependent) vectors.
  static Subspace span_of(const std::vector<Vec4>& vecs);

  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat4X& basis() const { return basis_; }
  Mat4 projector() const { return basis_ * basis_.transpose(); }
  Subspace orthogonal_complement() const;
  bool contains(const Vec4& v, double tol = kGeomTol) const;

  // intersection of two subspaces (nullspace of the stacked complements)
  static Subspace intersect(const Subspace& a, const Subspace& b,
                            double tol = 1e-10);

 private:
  Mat4X basis_;
};

// An orthogonal map of R^4 restricted to S^3.
class Isometry4 {
 public:
  enum class Kind { Reflection, Rotation, Composite };

  Isometry4(const Mat4& m, Kind kind);
  static Isometry4 identity();

  const Mat4& matrix() const { return m_; }
  Kind kind() const { return kind_; }
  Vec4 operator()(const Vec4& x) const { return m_ * x; }
  Isometry4 compose(const Isometry4& o) const {
    return Isometry4(m_ * o.m_, Kind::Composite);
  }
  Isometry4 inverse() const { return Isometry4(m_.transpose(), kind_); }

 private:
  Mat4 m_;
  Kind kind_;
};

// Antisymmetric generator of a rotation family; the field at x is matrix()*x.
class KillingMatrix {
 public:
  KillingMatrix() : m_(Mat4::Zero()) {}
  explicit KillingMatrix(const Mat4& m);
  const Mat4& matrix() const { return m_; }
  Vec4 at(const Vec4& x) const { return m_ * x; }
  KillingMatrix normalized_sign(double s) const { return KillingMatrix(s * m_); }

 private:
  Mat4 m_;
};

// An oriented great circle: ordered orthonormal pair spanning its 2-plane.
// The orientation of the totally orthogonal circle is induced by requiring
// det[a b c d] = +1, which reproduces the coordinate-plane conventions.
class GreatCircle {
 public:
  GreatCircle(const Vec4& a, const Vec4& b);

  const Vec4& a() const { return a_; }
  const Vec4& b() const { return b_; }
  Subspace span() const;
  GreatCircle perp() const;
  bool contains(const Vec4& x, double tol = kGeomTol) const;
  // point at arc parameter phi from a() toward b()
  Vec4 point(const Angle& phi) const {
    return phi.cos() * a_ + phi.sin() * b_;
  }

 private:
  Vec4 a_, b_;
};

// The coordinate frame: base circle C with base point p_0, the orthogonal
// circle with base point p^0, all orientations fixed so that the four base
// points form a positively oriented orthonormal frame.
class GreatCircleFrame {
 public:
  static GreatCircleFrame standard();
  // columns of f: p_0, p_{pi/2}, p^0, p^{pi/2}; must be in SO(4)
  explicit GreatCircleFrame(const Mat4& f);

  const Mat4& matrix() const { return f_; }
  GreatCircle circle() const { return GreatCircle(f_.col(0), f_.col(1)); }
  GreatCircle circle_perp() const { return GreatCircle(f_.col(2), f_.col(3)); }

  Vec4 p_lower(const Angle& phi) const;  // p_phi on C
  Vec4 p_upper(const Angle& phi) const;  // p^phi on C-perp
  Subspace sigma_lower(const Angle& phi) const;  // Sigma_phi = Sph(C_perp, p_phi)
  Subspace sigma_upper(const Angle& phi) const;  // Sigma^phi = Sph(C, p^phi)

  // C_phi^phi' = Sph(p_phi, p^phi'), oriented (p_phi, p^phi') except for the
  // hard-coded coordinate cases where the induced-orientation table applies.
  GreatCircle circle_through(const Angle& phi, const Angle& phi_up) const;

  // true when (phi, phi_up) lands on one of the six coordinate circles whose
  // orientation is pinned by the convention table
  static bool coordinate_orientation_is_pinned(const Angle& phi, const Angle& phi_up);

 private:
  Mat4 f_;
};

// ---------------------------------------------------------------------------
// Operations

// Pi_S - Pi_{S-perp}; restricts to the identity on S.
Isometry4 reflect_through(const Subspace& s);

// Fixes the circle pointwise and turns its orthogonal circle by phi.
Isometry4 rot_about(const GreatCircle& c, const Angle& phi);
// Turns the circle along itself by phi (= rot_about of the orthogonal circle).
Isometry4 rot_along(const GreatCircle& c, const Angle& phi);

// d/dphi at 0 of rot_about / rot_along.
KillingMatrix killing_about(const GreatCircle& c);
KillingMatrix killing_along(const GreatCircle& c);

// The unique intersection of the orbit (under rotation along c) through x
// with the closed hemisphere spanned by c-perp and the base point p on c.
// For x with vanishing component in the circle's plane the orbit is a fixed
// point and the map is the identity there.
Vec4 orbit_project(const GreatCircle& c, const Vec4& p_on_c, const Vec4& x);

// Minimizing geodesic between non-antipodal points, t in [0,1].
Vec4 geodesic(const Vec4& p, const Vec4& q, double t);
double geodesic_distance(const Vec4& p, const Vec4& q);
// distance from x to the minimizing segment pq
double distance_to_segment(const Vec4& p, const Vec4& q, const Vec4& x);

// Membership in the cone A * B (union of minimizing segments between the
// sample sets), decided by distance minimization over the sampled curves.
struct ConeSamples {
  std::vector<Vec4> pts;
  static ConeSamples single(const Vec4& p) { return ConeSamples{{p}}; }
  static ConeSamples circle(const GreatCircle& c, int n = 256);
  static ConeSamples segment(const Vec4& p, const Vec4& q, int n = 256);
};
bool cone_contains(const ConeSamples& a, const ConeSamples& b, const Vec4& x,
                   double tol = 1e-6);
// exact test for the hemisphere c-perp * p (p on c)
bool hemisphere_contains(const GreatCircle& c, const Vec4& p_on_c, const Vec4& x,
                         double tol = kGeomTol);

}  // namespace lawson
