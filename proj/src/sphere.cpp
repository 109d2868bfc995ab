#include "lawson/sphere.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace lawson {

Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
  // cofactor expansion: det[a b c w] = |w|^2 for w = cross4(a,b,c)
  Vec4 out;
  Eigen::Matrix3d m;
  for (int i = 0; i < 4; ++i) {
    int r = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      m(r, 0) = a[j];
      m(r, 1) = b[j];
      m(r, 2) = c[j];
      ++r;
    }
    out[i] = ((i % 2) ? 1.0 : -1.0) * m.determinant();
  }
  return out;
}

// --- UnitVec4 ---------------------------------------------------------------

UnitVec4::UnitVec4(const Vec4& v) : v_(v) {
  if (std::abs(v.norm() - 1.0) > kGeomTol)
    throw GeometryError("UnitVec4: not on the unit sphere");
}

UnitVec4 UnitVec4::normalized(const Vec4& v) {
  double n = v.norm();
  if (n == 0.0) throw GeometryError("UnitVec4: zero vector");
  return UnitVec4(Vec4(v / n));
}

// --- Subspace ---------------------------------------------------------------

Subspace::Subspace(const Mat4X& b) : basis_(b) {
  if (b.cols() > 4) throw GeometryError("Subspace: dim > 4");
  Eigen::MatrixXd g = b.transpose() * b;
  if (!g.isApprox(Eigen::MatrixXd::Identity(b.cols(), b.cols()), kGeomTol))
    throw GeometryError("Subspace: basis not orthonormal");
}

Subspace Subspace::span_of(const std::vector<Vec4>& vecs) {
  Mat4X b(4, 0);
  for (const Vec4& v : vecs) {
    Vec4 r = v;
    for (int i = 0; i < b.cols(); ++i) r -= b.col(i).dot(r) * b.col(i);
    if (r.norm() > 1e-10) {
      b.conservativeResize(4, b.cols() + 1);
      b.col(b.cols() - 1) = r / r.norm();
    }
  }
  return Subspace(b);
}

Subspace Subspace::orthogonal_complement() const {
  Mat4 p = Mat4::Identity() - projector();
  Eigen::JacobiSVD<Mat4> svd(p, Eigen::ComputeFullU);
  int d = 4 - dim();
  Mat4X b(4, d);
  for (int i = 0; i < d; ++i) b.col(i) = svd.matrixU().col(i);
  return Subspace(b);
}

bool Subspace::contains(const Vec4& v, double tol) const {
  return (v - projector() * v).norm() <= tol * std::max(1.0, v.norm());
}

Subspace Subspace::intersect(const Subspace& a, const Subspace& b, double tol) {
  Eigen::MatrixXd stacked(8, 4);
  stacked.topRows(4) = Mat4::Identity() - a.projector();
  stacked.bottomRows(4) = Mat4::Identity() - b.projector();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  int d = 0;
  for (int i = 0; i < 4; ++i)
    if (svd.singularValues()[i] <= tol) ++d;
  Mat4X basis(4, d);
  for (int i = 0; i < d; ++i) basis.col(i) = svd.matrixV().col(4 - d + i);
  return Subspace(basis);
}

// --- Isometry4 / KillingMatrix ----------------------------------------------

Isometry4::Isometry4(const Mat4& m, Kind kind) : m_(m), kind_(kind) {
  if (!(m.transpose() * m).isApprox(Mat4::Identity(), kGeomTol))
    throw GeometryError("Isometry4: matrix not orthogonal");
}

Isometry4 Isometry4::identity() {
  return Isometry4(Mat4::Identity(), Kind::Composite);
}

KillingMatrix::KillingMatrix(const Mat4& m) : m_(m) {
  if ((m + m.transpose()).norm() != 0.0)
    throw GeometryError("KillingMatrix: not antisymmetric");
}

// --- GreatCircle ------------------------------------------------------------

GreatCircle::GreatCircle(const Vec4& a, const Vec4& b) : a_(a), b_(b) {
  if (std::abs(a.norm() - 1.0) > kGeomTol || std::abs(b.norm() - 1.0) > kGeomTol ||
      std::abs(a.dot(b)) > kGeomTol)
    throw GeometryError("GreatCircle: basis not orthonormal");
}

Subspace GreatCircle::span() const {
  Mat4X b(4, 2);
  b.col(0) = a_;
  b.col(1) = b_;
  return Subspace(b);
}

GreatCircle GreatCircle::perp() const {
  Subspace comp = span().orthogonal_complement();
  Vec4 c = comp.basis().col(0);
  Vec4 d = comp.basis().col(1);
  Mat4 m;
  m.col(0) = a_;
  m.col(1) = b_;
  m.col(2) = c;
  m.col(3) = d;
  if (m.determinant() < 0) std::swap(c, d);
  return GreatCircle(c, d);
}

bool GreatCircle::contains(const Vec4& x, double tol) const {
  Vec4 r = x - a_.dot(x) * a_ - b_.dot(x) * b_;
  return r.norm() <= tol * std::max(1.0, x.norm());
}

// --- GreatCircleFrame --------------------------------------------------------

GreatCircleFrame GreatCircleFrame::standard() {
  return GreatCircleFrame(Mat4::Identity());
}

GreatCircleFrame::GreatCircleFrame(const Mat4& f) : f_(f) {
  if (!(f.transpose() * f).isApprox(Mat4::Identity(), kGeomTol))
    throw GeometryError("GreatCircleFrame: frame not orthonormal");
  if (f.determinant() < 0)
    throw GeometryError("GreatCircleFrame: frame must be positively oriented");
}

Vec4 GreatCircleFrame::p_lower(const Angle& phi) const {
  return phi.cos() * f_.col(0) + phi.sin() * f_.col(1);
}

Vec4 GreatCircleFrame::p_upper(const Angle& phi) const {
  return phi.cos() * f_.col(2) + phi.sin() * f_.col(3);
}

Subspace GreatCircleFrame::sigma_lower(const Angle& phi) const {
  Mat4X b(4, 3);
  b.col(0) = f_.col(2);
  b.col(1) = f_.col(3);
  b.col(2) = p_lower(phi);
  return Subspace(b);
}

Subspace GreatCircleFrame::sigma_upper(const Angle& phi) const {
  Mat4X b(4, 3);
  b.col(0) = f_.col(0);
  b.col(1) = f_.col(1);
  b.col(2) = p_upper(phi);
  return Subspace(b);
}

namespace {

// Reduce a rational multiple of pi mod pi to {0, 1/2}, or -1 when neither.
int quarter_class(const Angle& a) {
  if (!a.rational()) return -1;
  // a = pi*num/den with num/den in [0,2)
  std::int64_t num = a.num() % a.den();  // mod pi
  if (num == 0) return 0;
  if (a.den() == 2 && num == 1) return 1;
  return -1;
}

}  // namespace

bool GreatCircleFrame::coordinate_orientation_is_pinned(const Angle& phi,
                                                        const Angle& phi_up) {
  return quarter_class(phi) >= 0 && quarter_class(phi_up) >= 0;
}

GreatCircle GreatCircleFrame::circle_through(const Angle& phi, const Angle& phi_up) const {
  Vec4 p = p_lower(phi);
  Vec4 q = p_upper(phi_up);
  int cl = quarter_class(phi), cu = quarter_class(phi_up);
  if (cl == 1 && cu == 1) {
    // the one coordinate case whose pinned orientation is (p^{pi/2}, p_{pi/2})
    Vec4 s = p_lower(Angle::pi_times(1, 2));
    Vec4 t = p_upper(Angle::pi_times(1, 2));
    return GreatCircle(t, s);
  }
  if (cl >= 0 && cu >= 0) {
    // remaining coordinate cases are oriented (p_phi, p^phi') with the
    // representative in [0, pi)
    Vec4 s = (cl == 0) ? f_.col(0) : f_.col(1);
    Vec4 t = (cu == 0) ? f_.col(2) : f_.col(3);
    return GreatCircle(s, t);
  }
  return GreatCircle(p, q);
}

// --- operations ---------------------------------------------------------------

Isometry4 reflect_through(const Subspace& s) {
  Mat4 p = s.projector();
  return Isometry4(2.0 * p - Mat4::Identity(), Isometry4::Kind::Reflection);
}

namespace {

Mat4 rotation_in_plane(const Vec4& c, const Vec4& d, const Angle& phi) {
  return Mat4::Identity() + (phi.cos() - 1.0) * (c * c.transpose() + d * d.transpose()) +
         phi.sin() * (d * c.transpose() - c * d.transpose());
}

}  // namespace

Isometry4 rot_about(const GreatCircle& c, const Angle& phi) {
  GreatCircle p = c.perp();
  return Isometry4(rotation_in_plane(p.a(), p.b(), phi), Isometry4::Kind::Rotation);
}

Isometry4 rot_along(const GreatCircle& c, const Angle& phi) {
  return Isometry4(rotation_in_plane(c.a(), c.b(), phi), Isometry4::Kind::Rotation);
}

KillingMatrix killing_about(const GreatCircle& c) {
  GreatCircle p = c.perp();
  return KillingMatrix(p.b() * p.a().transpose() - p.a() * p.b().transpose());
}

KillingMatrix killing_along(const GreatCircle& c) {
  return KillingMatrix(c.b() * c.a().transpose() - c.a() * c.b().transpose());
}

Vec4 orbit_project(const GreatCircle& c, const Vec4& p_on_c, const Vec4& x) {
  if (!c.contains(p_on_c, 1e-9))
    throw GeometryError("orbit_project: base point not on the circle");
  // component of x in the circle's plane rotates; the orthogonal part rides
  double u = c.a().dot(x), v = c.b().dot(x);
  Vec4 rest = x - u * c.a() - v * c.b();
  double r = std::hypot(u, v);
  // direction of p in the plane (p is on the circle, so unit in-plane)
  double pu = c.a().dot(p_on_c), pv = c.b().dot(p_on_c);
  return r * (pu * c.a() + pv * c.b()) + rest;
}

Vec4 geodesic(const Vec4& p, const Vec4& q, double t) {
  double c = std::clamp(p.dot(q), -1.0, 1.0);
  if (c <= -1.0 + kGeomTol) throw GeometryError("geodesic: antipodal endpoints");
  double ang = std::acos(c);
  if (ang < 1e-14) return p;
  double s = std::sin(ang);
  return (std::sin((1.0 - t) * ang) * p + std::sin(t * ang) * q) / s;
}

double geodesic_distance(const Vec4& p, const Vec4& q) {
  // chord-corrected form, accurate near coincident points
  return 2.0 * std::asin(std::min(1.0, 0.5 * (p - q).norm()));
}

double distance_to_segment(const Vec4& p, const Vec4& q, const Vec4& x) {
  double c = std::clamp(p.dot(q), -1.0, 1.0);
  double ang = std::acos(c);
  if (ang < 1e-14) return geodesic_distance(p, x);
  // project x into the (p,q) plane and clamp the arc parameter
  Vec4 e = (q - c * p).normalized();
  double a = p.dot(x), b = e.dot(x);
  double t = std::atan2(b, a);
  if (t < 0.0) t = 0.0;
  if (t > ang) t = ang;
  Vec4 nearest = std::cos(t) * p + std::sin(t) * e;
  return geodesic_distance(nearest, x);
}

ConeSamples ConeSamples::circle(const GreatCircle& c, int n) {
  ConeSamples s;
  s.pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * M_PI * i / n;
    s.pts.push_back(std::cos(t) * c.a() + std::sin(t) * c.b());
  }
  return s;
}

ConeSamples ConeSamples::segment(const Vec4& p, const Vec4& q, int n) {
  ConeSamples s;
  s.pts.reserve(n + 1);
  for (int i = 0; i <= n; ++i) s.pts.push_back(geodesic(p, q, double(i) / n));
  return s;
}

bool cone_contains(const ConeSamples& a, const ConeSamples& b, const Vec4& x,
                   double tol) {
  for (const Vec4& p : a.pts)
    for (const Vec4& q : b.pts)
      if (distance_to_segment(p, q, x) <= tol) return true;
  return false;
}

bool hemisphere_contains(const GreatCircle& c, const Vec4& p_on_c, const Vec4& x,
                         double tol) {
  Subspace s = Subspace::span_of({c.perp().a(), c.perp().b(), p_on_c});
  return s.contains(x, std::max(tol, 1e-10)) && p_on_c.dot(x) >= -tol;
}

}  // namespace lawson
