#include "lawson/jacobi.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <cmath>

namespace lawson {

Eigen::VectorXd DiscreteOperator::restrict_full(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(size());
  for (int i = 0; i < size(); ++i) out[i] = full[free_to_full[i]];
  return out;
}

Eigen::VectorXd DiscreteOperator::extend_free(const Eigen::VectorXd& free) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(full_size);
  for (int i = 0; i < size(); ++i) out[free_to_full[i]] = free[i];
  return out;
}

DiscreteOperator assemble_operator(const TriMesh& mesh,
                                   const Eigen::VectorXd& potential,
                                   const MixedBC* bc) {
  const int n = mesh.num_vertices();
  if (potential.size() != n)
    throw GeometryError("assemble_operator: missing potential field");

  DiscreteOperator op;
  op.full_size = n;
  op.full_to_free.assign(n, 0);
  if (bc)
    for (int v : bc->dirichlet) op.full_to_free[v] = -1;
  for (int v = 0; v < n; ++v)
    if (op.full_to_free[v] == 0) {
      op.full_to_free[v] = int(op.free_to_full.size());
      op.free_to_full.push_back(v);
    }
  const int nf = int(op.free_to_full.size());

  Eigen::VectorXd mass_full = vertex_masses(mesh);
  CotanData cot = cotan_stiffness(mesh);
  op.negative_cotan_edges = cot.negative_edges;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(cot.triplets.size());
  for (const auto& t : cot.triplets) {
    int fa = op.full_to_free[t.row()], fb = op.full_to_free[t.col()];
    if (fa >= 0 && fb >= 0) trip.emplace_back(fa, fb, t.value());
  }
  op.stiffness.resize(nf, nf);
  op.stiffness.setFromTriplets(trip.begin(), trip.end());
  op.mass.resize(nf);
  op.potential.resize(nf);
  for (int i = 0; i < nf; ++i) {
    op.mass[i] = mass_full[op.free_to_full[i]];
    op.potential[i] = potential[op.free_to_full[i]];
  }
  SparseMat pdiag(nf, nf);
  std::vector<Eigen::Triplet<double>> pt;
  for (int i = 0; i < nf; ++i)
    pt.emplace_back(i, i, op.potential[i] * op.mass[i]);
  pdiag.setFromTriplets(pt.begin(), pt.end());
  op.pencil = op.stiffness - pdiag;
  return op;
}

namespace {

// deterministic start vector
Eigen::VectorXd seeded_vector(int n, std::uint64_t salt = 0) {
  Eigen::VectorXd v(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ull ^ (salt * 0xD1B54A32D192ED03ull);
  for (int i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = double(state >> 11) / double(1ull << 53) - 0.5;
  }
  return v;
}

struct LanczosResult {
  Eigen::VectorXd theta;   // Ritz values of the shift-inverted operator
  Eigen::MatrixXd vectors; // free-dof Ritz vectors
};

// largest eigenpairs of (pencil - sigma M)^-1 M in the M inner product
LanczosResult lanczos_largest(const SparseMat& shifted, const Eigen::VectorXd& bdiag,
                              int k, int max_ncv, double tol) {
  const int n = int(bdiag.size());
  Eigen::SimplicialLDLT<SparseMat> fac(shifted);
  if (fac.info() != Eigen::Success)
    throw GeometryError("lanczos: factorization failed");

  auto bdot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(bdiag.cwiseProduct(b));
  };

  int ncv = std::min(n, max_ncv);
  Eigen::MatrixXd v(n, ncv + 1);
  Eigen::VectorXd alpha(ncv), beta(ncv);

  Eigen::VectorXd w = seeded_vector(n);
  w /= std::sqrt(bdot(w, w));
  v.col(0) = w;

  int built = 0;
  Eigen::VectorXd theta;
  Eigen::MatrixXd tvecs;
  for (int j = 0; j < ncv; ++j) {
    w = fac.solve(bdiag.cwiseProduct(v.col(j)));
    if (j > 0) w -= beta[j - 1] * v.col(j - 1);
    alpha[j] = bdot(v.col(j), w);
    w -= alpha[j] * v.col(j);
    for (int rep = 0; rep < 2; ++rep)
      for (int i = 0; i <= j; ++i) w -= bdot(v.col(i), w) * v.col(i);
    double b = std::sqrt(std::max(0.0, bdot(w, w)));
    beta[j] = b;
    built = j + 1;
    if (b < 1e-13) {
      // invariant subspace; restart with a fresh orthogonal direction
      w = seeded_vector(n, std::uint64_t(j) + 1);
      for (int rep = 0; rep < 2; ++rep)
        for (int i = 0; i <= j; ++i) w -= bdot(v.col(i), w) * v.col(i);
      double nb = std::sqrt(std::max(0.0, bdot(w, w)));
      if (nb < 1e-14) break;  // space exhausted
      beta[j] = 0.0;
      v.col(j + 1) = w / nb;
      continue;
    }
    v.col(j + 1) = w / b;

    // convergence check on the wanted Ritz pairs
    if (built >= std::max(2 * k, 20) && (built % 10 == 0 || built == ncv)) {
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
      for (int i = 0; i < built; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < built) tri(i, i + 1) = tri(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        int idx = built - 1 - i;  // largest theta
        double resid = std::abs(beta[built - 1] * es.eigenvectors()(built - 1, idx));
        if (resid > tol * std::max(std::abs(es.eigenvalues()[idx]), 1e-30)) ok = false;
      }
      if (ok || built == ncv) {
        theta.resize(k);
        tvecs.resize(built, k);
        for (int i = 0; i < k; ++i) {
          int idx = built - 1 - i;
          theta[i] = es.eigenvalues()[idx];
          tvecs.col(i) = es.eigenvectors().col(idx);
        }
        if (ok) break;
      }
    }
  }
  if (theta.size() == 0)
    throw GeometryError("lanczos: subspace exhausted before convergence");

  LanczosResult out;
  out.theta = theta;
  out.vectors = v.leftCols(tvecs.rows()) * tvecs;
  return out;
}

}  // namespace

Spectrum solve_smallest(const DiscreteOperator& op, int k, double tol) {
  const int n = op.size();
  k = std::min(k, n);
  if (k <= 0) throw GeometryError("solve_smallest: empty problem");
  Spectrum spec;

  Eigen::MatrixXd free_vecs;
  if (n <= 700) {
    Eigen::MatrixXd a = Eigen::MatrixXd(op.pencil);
    Eigen::MatrixXd b = op.mass.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
    spec.eigenvalues = es.eigenvalues().head(k);
    free_vecs = es.eigenvectors().leftCols(k);
  } else {
    double sigma = -op.potential.maxCoeff() - 1.0;
    SparseMat shifted = op.pencil;
    for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma * op.mass[i];
    shifted.makeCompressed();
    int max_ncv = std::min(n, std::max(6 * k + 100, 200));
    LanczosResult lr = lanczos_largest(shifted, op.mass, k, max_ncv, 1e-12);
    spec.eigenvalues.resize(k);
    free_vecs.resize(n, k);
    // theta descending -> lambda ascending
    for (int i = 0; i < k; ++i) {
      spec.eigenvalues[i] = sigma + 1.0 / lr.theta[i];
      free_vecs.col(i) = lr.vectors.col(i);
    }
  }

  spec.vectors.resize(op.full_size, k);
  spec.residuals.resize(k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd vfree = free_vecs.col(i);
    double nb = std::sqrt(vfree.dot(op.mass.cwiseProduct(vfree)));
    vfree /= nb;
    Eigen::VectorXd r = op.pencil * vfree -
                        spec.eigenvalues[i] * op.mass.cwiseProduct(vfree);
    spec.residuals[i] = r.norm() / vfree.norm();
    spec.vectors.col(i) = op.extend_free(vfree);
  }
  (void)tol;
  return spec;
}

int count_below(const DiscreteOperator& op, double t) {
  SparseMat shifted = op.pencil;
  for (int i = 0; i < op.size(); ++i) shifted.coeffRef(i, i) -= t * op.mass[i];
  shifted.makeCompressed();
  for (int attempt = 0; attempt < 3; ++attempt) {
    Eigen::SimplicialLDLT<SparseMat> fac(shifted);
    if (fac.info() == Eigen::Success) {
      Eigen::VectorXd d = fac.vectorD();
      double dmax = d.cwiseAbs().maxCoeff();
      if (d.cwiseAbs().minCoeff() > 1e-13 * dmax) {
        int neg = 0;
        for (int i = 0; i < d.size(); ++i)
          if (d[i] < 0) ++neg;
        return neg;
      }
    }
    // probe sits on an eigenvalue; nudge it
    double dt = 1e-9 * (1.0 + std::abs(t)) * (attempt + 1);
    for (int i = 0; i < op.size(); ++i) shifted.coeffRef(i, i) -= dt * op.mass[i];
  }
  throw GeometryError("count_below: could not certify inertia at the probe");
}

CountResult count_with_band(const Spectrum& spec, double band) {
  CountResult c;
  c.zero_band = band;
  for (int i = 0; i < spec.eigenvalues.size(); ++i) {
    double l = spec.eigenvalues[i];
    if (l < -band)
      ++c.index;
    else if (l <= band)
      ++c.nullity;
  }
  return c;
}

CountResult count_certified(const DiscreteOperator& op, const Spectrum& spec,
                            double scale_hint) {
  const double window = 10.0 * scale_hint;
  CountResult c;
  double radius = 0.0;
  double next = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.eigenvalues.size(); ++i) {
    double a = std::abs(spec.eigenvalues[i]);
    if (a <= window)
      radius = std::max(radius, a);
    else
      next = std::min(next, a);
  }
  c.cluster_radius = radius;
  c.next_abs = next;
  c.zero_band = (radius > 0) ? 0.5 * (radius + std::min(next, 5 * radius))
                             : std::min(window, 0.5 * next);
  bool gap_ok = (radius > 0) ? (next >= 5.0 * radius) : true;

  CountResult sc = count_with_band(spec, c.zero_band);
  c.index = sc.index;
  c.nullity = sc.nullity;

  // the computed part of the spectrum must extend past the band, and the
  // integer counts must agree with the matrix inertia
  bool coverage = spec.eigenvalues.size() > 0 &&
                  spec.eigenvalues[spec.eigenvalues.size() - 1] > c.zero_band;
  bool inertia_ok = false;
  if (coverage) {
    int below_minus = count_below(op, -c.zero_band);
    int below_plus = count_below(op, c.zero_band);
    inertia_ok = (below_minus == c.index) && (below_plus - below_minus == c.nullity);
  }
  c.certified = gap_ok && coverage && inertia_ok;
  return c;
}

double operator_residual(const DiscreteOperator& op, const Eigen::VectorXd& field) {
  Eigen::VectorXd f = op.restrict_full(field);
  Eigen::VectorXd r = op.pencil * f;
  double num = std::sqrt((r.cwiseQuotient(op.mass)).dot(r));
  double den = std::sqrt(f.dot(op.mass.cwiseProduct(f)));
  if (den == 0.0) throw GeometryError("operator_residual: zero field");
  return num / den;
}

double mass_inner(const DiscreteOperator& op, const Eigen::VectorXd& f,
                  const Eigen::VectorXd& g) {
  double s = 0;
  for (int i = 0; i < op.size(); ++i) {
    int v = op.free_to_full[i];
    s += op.mass[i] * f[v] * g[v];
  }
  return s;
}

std::vector<double> principal_angles(const DiscreteOperator& op,
                                     const Eigen::MatrixXd& span_a,
                                     const Eigen::MatrixXd& span_b) {
  auto orthonormalize = [&](const Eigen::MatrixXd& s) {
    Eigen::MatrixXd q = s;
    for (int c = 0; c < q.cols(); ++c) {
      for (int rep = 0; rep < 2; ++rep)
        for (int d = 0; d < c; ++d)
          q.col(c) -= mass_inner(op, q.col(c), q.col(d)) * q.col(d);
      double nrm = std::sqrt(mass_inner(op, q.col(c), q.col(c)));
      if (nrm < 1e-14) throw GeometryError("principal_angles: rank deficient span");
      q.col(c) /= nrm;
    }
    return q;
  };
  Eigen::MatrixXd qa = orthonormalize(span_a);
  Eigen::MatrixXd qb = orthonormalize(span_b);
  Eigen::MatrixXd cross(qa.cols(), qb.cols());
  for (int i = 0; i < qa.cols(); ++i)
    for (int j = 0; j < qb.cols(); ++j) cross(i, j) = mass_inner(op, qa.col(i), qb.col(j));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
  std::vector<double> angles;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    angles.push_back(std::acos(std::clamp(svd.singularValues()[i], 0.0, 1.0)));
  std::sort(angles.rbegin(), angles.rend());
  return angles;
}

}  // namespace lawson
