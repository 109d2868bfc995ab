#include "lawson/plateau.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <map>

namespace lawson {

namespace {

// ---------------------------------------------------------------------------
// square-grid combinatorics: grid (a,b), a,b in [0,n], plus cell centers.
// Corners map to (q_0, q^0, q_1, q^1); the two diagonals carry the fixed
// curves of the stabilizer.

struct Grid {
  int n;
  int gid(int a, int b) const { return a * (n + 1) + b; }
  int cid(int a, int b) const { return (n + 1) * (n + 1) + a * n + b; }
  int verts() const { return (n + 1) * (n + 1) + n * n; }
};

Vec4 bent_disc_point(const LawsonParams& p, double s, double t) {
  Vec4 q0 = q_lower(p, 0), q1 = q_lower(p, 2);
  Vec4 qu0 = q_upper(p, 0), qu1 = q_upper(p, 2);
  Vec4 v;
  if (s >= t)
    v = (1.0 - s) * q0 + (s - t) * qu0 + t * q1;
  else
    v = (1.0 - t) * q0 + (t - s) * qu1 + s * q1;
  return v.normalized();
}

Vec4 bilinear_patch_point(const LawsonParams& p, double s, double t) {
  Vec4 q0 = q_lower(p, 0), q1 = q_lower(p, 2);
  Vec4 qu0 = q_upper(p, 0), qu1 = q_upper(p, 2);
  // boundary order q_0 -> q^0 -> q_1 -> q^1; bilinear blend of the corners
  Vec4 v = (1 - s) * (1 - t) * q0 + s * (1 - t) * qu0 + s * t * q1 + (1 - s) * t * qu1;
  double nrm = v.norm();
  if (nrm < 0.2) {
    // the blend degenerates near the middle for strongly bent cells; nudge
    // toward the cell axis point
    v += 0.25 * (q0 + q1 + qu0 + qu1);
    nrm = v.norm();
  }
  return v / nrm;
}

}  // namespace

DiscMesh init_disc(const LawsonParams& p, int resolution, DiscSeed seed) {
  if (resolution < 4) throw GeometryError("init_disc: resolution must be >= 4");
  const int n = resolution;
  Grid g{n};
  DiscMesh d;
  d.m = p.m;
  d.resolution = n;
  d.mesh.metric = Metric::Sphere;
  d.mesh.pos.resize(g.verts());
  d.role.assign(g.verts(), DiscMesh::Role::Interior);
  d.edge_id.assign(g.verts(), -1);
  d.on_alpha.assign(g.verts(), 0);
  d.on_beta.assign(g.verts(), 0);

  auto place = [&](double s, double t) {
    return seed == DiscSeed::BentDisc ? bent_disc_point(p, s, t)
                                      : bilinear_patch_point(p, s, t);
  };

  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      d.mesh.pos[g.gid(a, b)] = place(double(a) / n, double(b) / n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      d.mesh.pos[g.cid(a, b)] = place((a + 0.5) / n, (b + 0.5) / n);

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int c = g.cid(a, b);
      d.mesh.tri.push_back({g.gid(a, b), g.gid(a + 1, b), c});
      d.mesh.tri.push_back({g.gid(a + 1, b), g.gid(a + 1, b + 1), c});
      d.mesh.tri.push_back({g.gid(a + 1, b + 1), g.gid(a, b + 1), c});
      d.mesh.tri.push_back({g.gid(a, b + 1), g.gid(a, b), c});
    }

  // boundary roles; edges in order q_0 q^0 (t=0), q^0 q_1 (s=1), q_1 q^1
  // (t=1), q^1 q_0 (s=0)
  d.qedge = {{{q_lower(p, 0), q_upper(p, 0)},
              {q_upper(p, 0), q_lower(p, 2)},
              {q_lower(p, 2), q_upper(p, 2)},
              {q_upper(p, 2), q_lower(p, 0)}}};
  for (int a = 1; a < n; ++a) {
    d.role[g.gid(a, 0)] = DiscMesh::Role::Boundary;
    d.edge_id[g.gid(a, 0)] = 0;
    d.role[g.gid(n, a)] = DiscMesh::Role::Boundary;
    d.edge_id[g.gid(n, a)] = 1;
    d.role[g.gid(a, n)] = DiscMesh::Role::Boundary;
    d.edge_id[g.gid(a, n)] = 2;
    d.role[g.gid(0, a)] = DiscMesh::Role::Boundary;
    d.edge_id[g.gid(0, a)] = 3;
  }
  for (int corner : {g.gid(0, 0), g.gid(n, 0), g.gid(n, n), g.gid(0, n)})
    d.role[corner] = DiscMesh::Role::Corner;

  // stabilizer of the cell: Sigma^0 swaps the two upper corners (grid (a,b)
  // -> (b,a)), Sigma_0 swaps the lower ones ((a,b) -> (n-b,n-a))
  auto syms = cell_symmetries(p, 0, 0);
  d.stab = {syms[1].matrix(), syms[0].matrix(), syms[2].matrix()};
  auto& perm_up = d.stab_perm[0];
  auto& perm_lo = d.stab_perm[1];
  auto& perm_ax = d.stab_perm[2];
  perm_up.resize(g.verts());
  perm_lo.resize(g.verts());
  perm_ax.resize(g.verts());
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      perm_up[g.gid(a, b)] = g.gid(b, a);
      perm_lo[g.gid(a, b)] = g.gid(n - b, n - a);
      perm_ax[g.gid(a, b)] = g.gid(n - a, n - b);
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      perm_up[g.cid(a, b)] = g.cid(b, a);
      perm_lo[g.cid(a, b)] = g.cid(n - 1 - b, n - 1 - a);
      perm_ax[g.cid(a, b)] = g.cid(n - 1 - a, n - 1 - b);
    }

  for (int a = 0; a <= n; ++a) d.on_beta[g.gid(a, a)] = 1;
  for (int a = 0; a < n; ++a) d.on_beta[g.cid(a, a)] = 1;
  for (int a = 0; a <= n; ++a) d.on_alpha[g.gid(a, n - a)] = 1;
  for (int a = 0; a < n; ++a) d.on_alpha[g.cid(a, n - 1 - a)] = 1;
  if (n % 2 == 0)
    d.center_vertex = g.gid(n / 2, n / 2);
  else
    d.center_vertex = g.cid(n / 2, n / 2);
  return d;
}

namespace {

// retraction onto the constraint manifold: sphere for interior vertices,
// boundary arc for sliding vertices, exact corners
void retract(DiscMesh& d) {
  for (int v = 0; v < d.mesh.num_vertices(); ++v) {
    switch (d.role[v]) {
      case DiscMesh::Role::Interior:
        d.mesh.pos[v].normalize();
        break;
      case DiscMesh::Role::Boundary: {
        const auto& [e0, e1] = d.qedge[d.edge_id[v]];
        double u = e0.dot(d.mesh.pos[v]), w = e1.dot(d.mesh.pos[v]);
        double r = std::hypot(u, w);
        d.mesh.pos[v] = (u * e0 + w * e1) / r;
        break;
      }
      case DiscMesh::Role::Corner:
        break;
    }
  }
}

void symmetrize(DiscMesh& d) {
  std::vector<Vec4> acc = d.mesh.pos;
  for (int k = 0; k < 3; ++k) {
    Mat4 rt = d.stab[k].transpose();
    for (int v = 0; v < d.mesh.num_vertices(); ++v)
      acc[v] += rt * d.mesh.pos[d.stab_perm[k][v]];
  }
  for (int v = 0; v < d.mesh.num_vertices(); ++v) d.mesh.pos[v] = 0.25 * acc[v];
  retract(d);
}

// d(spherical area)/d(side length) via the l'Huilier form
struct AreaGrad {
  double area;
  std::array<double, 3> dA_dl;
};

AreaGrad spherical_area_grad(double a, double b, double c) {
  AreaGrad out{};
  double s = 0.5 * (a + b + c);
  if (std::max({a, b, c}) < 1e-6) {
    // flat limit; relative difference is O(l^2)
    double arg = std::max(1e-300, s * (s - a) * (s - b) * (s - c));
    double area = std::sqrt(arg);
    out.area = area;
    out.dA_dl = {a * (b * b + c * c - a * a) / (8 * area),
                 b * (a * a + c * c - b * b) / (8 * area),
                 c * (a * a + b * b - c * c) / (8 * area)};
    return out;
  }
  double ts = std::tan(0.5 * s);
  double ta = std::tan(0.5 * (s - a));
  double tb = std::tan(0.5 * (s - b));
  double tc = std::tan(0.5 * (s - c));
  double t4 = std::max(0.0, ts * ta * tb * tc);
  double g = std::sqrt(t4);
  out.area = 4.0 * std::atan(g);
  if (g < 1e-150) {
    out.dA_dl = {0, 0, 0};
    return out;
  }
  auto inv_sin = [](double x) { return 1.0 / std::max(std::sin(x), 1e-150); };
  double is = inv_sin(s), ia = inv_sin(s - a), ib = inv_sin(s - b), ic = inv_sin(s - c);
  // dE/da = [2 g / (1 + t4)] * d(log t4)/da with d(log t4)/da = (is -+ ...)/2
  double f = 2.0 * g / (1.0 + t4);
  out.dA_dl = {f * 0.5 * (is - ia + ib + ic),
               f * 0.5 * (is + ia - ib + ic),
               f * 0.5 * (is + ia + ib - ic)};
  return out;
}

struct GradientData {
  std::vector<Vec4> grad;        // constrained gradient per vertex
  Eigen::VectorXd mass;          // lumped vertex areas
  double area = 0.0;
  double sup_residual = 0.0;     // max |grad|/mass over moving vertices
};

GradientData area_gradient(const DiscMesh& d, bool slide_boundary) {
  const TriMesh& m = d.mesh;
  GradientData out;
  out.grad.assign(m.num_vertices(), Vec4::Zero());
  out.mass = Eigen::VectorXd::Zero(m.num_vertices());

  for (const auto& t : m.tri) {
    const Vec4 &pi = m.pos[t[0]], &pj = m.pos[t[1]], &pk = m.pos[t[2]];
    double a = geodesic_distance(pj, pk);
    double b = geodesic_distance(pi, pk);
    double c = geodesic_distance(pi, pj);
    AreaGrad ag = spherical_area_grad(a, b, c);
    out.area += ag.area;
    for (int v : t) out.mass[v] += ag.area / 3.0;

    // chain through the chord-corrected length
    auto dlen = [](const Vec4& p, const Vec4& q, double len) -> Vec4 {
      double r = (p - q).norm();
      if (r < 1e-300) return Vec4::Zero();
      return (p - q) / (r * std::cos(0.5 * len));
    };
    Vec4 gjk = dlen(pj, pk, a);
    Vec4 gik = dlen(pi, pk, b);
    Vec4 gij = dlen(pi, pj, c);
    out.grad[t[1]] += ag.dA_dl[0] * gjk;
    out.grad[t[2]] -= ag.dA_dl[0] * gjk;
    out.grad[t[0]] += ag.dA_dl[1] * gik;
    out.grad[t[2]] -= ag.dA_dl[1] * gik;
    out.grad[t[0]] += ag.dA_dl[2] * gij;
    out.grad[t[1]] -= ag.dA_dl[2] * gij;
  }

  // constrain
  for (int v = 0; v < m.num_vertices(); ++v) {
    switch (d.role[v]) {
      case DiscMesh::Role::Interior: {
        out.grad[v] -= out.grad[v].dot(m.pos[v]) * m.pos[v];
        break;
      }
      case DiscMesh::Role::Boundary: {
        if (!slide_boundary) {
          out.grad[v] = Vec4::Zero();
          break;
        }
        const auto& [e0, e1] = d.qedge[d.edge_id[v]];
        double u = e0.dot(m.pos[v]), w = e1.dot(m.pos[v]);
        Vec4 tangent = (-w * e0 + u * e1).normalized();
        out.grad[v] = out.grad[v].dot(tangent) * tangent;
        break;
      }
      case DiscMesh::Role::Corner:
        out.grad[v] = Vec4::Zero();
        break;
    }
    double h = out.grad[v].norm() / std::max(out.mass[v], 1e-300);
    out.sup_residual = std::max(out.sup_residual, h);
  }
  return out;
}

}  // namespace

double disc_area(const DiscMesh& disc) { return total_area(disc.mesh); }

namespace {

// Sobolev-preconditioned descent direction: solve the cotan-stiffness system
// on the movable vertices (corners pinned). The stiffness is the leading
// part of the area Hessian, so unit steps behave like Newton steps.
std::vector<Vec4> descent_direction(const DiscMesh& d, const GradientData& g) {
  const int n = d.mesh.num_vertices();
  std::vector<int> to_free(n, -1);
  std::vector<int> from_free;
  for (int v = 0; v < n; ++v)
    if (d.role[v] != DiscMesh::Role::Corner) {
      to_free[v] = int(from_free.size());
      from_free.push_back(v);
    }
  const int nf = int(from_free.size());

  CotanData cot = cotan_stiffness(d.mesh);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(cot.triplets.size() + nf);
  for (const auto& t : cot.triplets) {
    int a = to_free[t.row()], b = to_free[t.col()];
    if (a >= 0 && b >= 0) trip.emplace_back(a, b, t.value());
  }
  for (int i = 0; i < nf; ++i) trip.emplace_back(i, i, 1e-8 * g.mass[from_free[i]]);
  Eigen::SparseMatrix<double> a(nf, nf);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> fac(a);

  std::vector<Vec4> dir(n, Vec4::Zero());
  if (fac.info() == Eigen::Success) {
    Eigen::MatrixXd rhs(nf, 4);
    for (int i = 0; i < nf; ++i) rhs.row(i) = g.grad[from_free[i]].transpose();
    Eigen::MatrixXd sol = fac.solve(rhs);
    for (int i = 0; i < nf; ++i) dir[from_free[i]] = sol.row(i).transpose();
  } else {
    // fall back to the mass-preconditioned gradient
    for (int i = 0; i < nf; ++i)
      dir[from_free[i]] = g.grad[from_free[i]] / std::max(g.mass[from_free[i]], 1e-300);
  }

  // constrain: tangent to the sphere / the boundary arc
  for (int v = 0; v < n; ++v) {
    switch (d.role[v]) {
      case DiscMesh::Role::Interior:
        dir[v] -= dir[v].dot(d.mesh.pos[v]) * d.mesh.pos[v];
        break;
      case DiscMesh::Role::Boundary: {
        const auto& [e0, e1] = d.qedge[d.edge_id[v]];
        double u = e0.dot(d.mesh.pos[v]), w = e1.dot(d.mesh.pos[v]);
        Vec4 tangent = (-w * e0 + u * e1).normalized();
        dir[v] = dir[v].dot(tangent) * tangent;
        break;
      }
      case DiscMesh::Role::Corner:
        break;
    }
  }
  return dir;
}

double mesh_area_only(const DiscMesh& d) { return total_area(d.mesh); }

}  // namespace

SolveReport minimize_area(DiscMesh& d, const SolveOptions& opts) {
  SolveReport rep;
  symmetrize(d);
  GradientData g = area_gradient(d, opts.slide_boundary);
  rep.residual_history.push_back(g.sup_residual);

  for (int it = 0; it < opts.max_iters; ++it) {
    if (g.sup_residual < opts.tol) {
      rep.converged = true;
      break;
    }

    std::vector<Vec4> dir = descent_direction(d, g);
    double slope = 0;
    for (int v = 0; v < d.mesh.num_vertices(); ++v) slope += g.grad[v].dot(dir[v]);
    if (slope <= 0) {
      // preconditioner failed to produce descent; pointwise fallback
      for (int v = 0; v < d.mesh.num_vertices(); ++v)
        dir[v] = g.grad[v] / std::max(g.mass[v], 1e-300);
      slope = 0;
      for (int v = 0; v < d.mesh.num_vertices(); ++v) slope += g.grad[v].dot(dir[v]);
      if (slope <= 0) break;
    }

    std::vector<Vec4> save_pos = d.mesh.pos;
    double save_area = g.area;
    double save_res = g.sup_residual;

    bool accepted = false;
    double step = 1.0;
    for (int back = 0; back < 50; ++back) {
      for (int v = 0; v < d.mesh.num_vertices(); ++v)
        d.mesh.pos[v] = save_pos[v] - step * dir[v];
      retract(d);
      symmetrize(d);
      if (mesh_area_only(d) <= save_area - 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      d.mesh.pos = save_pos;
      break;
    }
    g = area_gradient(d, opts.slide_boundary);
    if (g.sup_residual > save_res + 1e-12) ++rep.non_monotone_steps;
    rep.iterations = it + 1;
    rep.residual_history.push_back(g.sup_residual);
  }

  rep.residual = g.sup_residual;
  rep.area = g.area;

  // the converged disc must be graphical along the cell axis; a collision
  // would mean self-intersection, which the minimizing limit excludes
  if (rep.converged) {
    LawsonParams p(d.m);
    if (!orbits_injective(cell_axis(p, 0, 0), p.frame.p_lower(Angle()), d.mesh.pos))
      throw GeometryError("minimize_area: disc is not graphical (self-intersection)");
  }
  return rep;
}

DiscMesh subdivide_disc(const DiscMesh& d) {
  // re-seed the finer combinatorics, then transplant positions: old grid
  // vertices and centers appear at even coordinates / odd-odd midpoints
  LawsonParams p(d.m);
  DiscMesh fine = init_disc(p, 2 * d.resolution);
  const int n = d.resolution;
  Grid gc{n}, gf{2 * n};
  auto old_pos = [&](int a2, int b2) -> std::optional<Vec4> {
    if (a2 % 2 == 0 && b2 % 2 == 0) return d.mesh.pos[gc.gid(a2 / 2, b2 / 2)];
    if (a2 % 2 == 1 && b2 % 2 == 1) return d.mesh.pos[gc.cid(a2 / 2, b2 / 2)];
    return std::nullopt;
  };
  // grid points of the fine mesh sit at half-integer coordinates of the
  // coarse one; interpolate the missing edge midpoints
  for (int a = 0; a <= 2 * n; ++a)
    for (int b = 0; b <= 2 * n; ++b) {
      auto exact = old_pos(a, b);
      if (exact) {
        fine.mesh.pos[gf.gid(a, b)] = *exact;
        continue;
      }
      // midpoint of two coarse neighbors along the even axis
      Vec4 sum = Vec4::Zero();
      if (a % 2 == 0) {
        sum = d.mesh.pos[gc.gid(a / 2, (b - 1) / 2)] + d.mesh.pos[gc.gid(a / 2, (b + 1) / 2)];
      } else {
        sum = d.mesh.pos[gc.gid((a - 1) / 2, b / 2)] + d.mesh.pos[gc.gid((a + 1) / 2, b / 2)];
      }
      fine.mesh.pos[gf.gid(a, b)] = sum.normalized();
    }
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b) {
      // fine cell centers at quarter-integer coarse coordinates: average the
      // surrounding fine grid corners
      Vec4 sum = fine.mesh.pos[gf.gid(a, b)] + fine.mesh.pos[gf.gid(a + 1, b)] +
                 fine.mesh.pos[gf.gid(a, b + 1)] + fine.mesh.pos[gf.gid(a + 1, b + 1)];
      fine.mesh.pos[gf.cid(a, b)] = sum.normalized();
    }
  retract(fine);
  return fine;
}

DiscMesh build_disc(const LawsonParams& p, int resolution, const SolveOptions& opts,
                    DiscSeed seed) {
  int levels = 0;
  int base = resolution;
  while (base > 8 && base % 2 == 0) {
    base /= 2;
    ++levels;
  }
  DiscMesh d = init_disc(p, base, seed);
  SolveOptions o = opts;
  for (int l = 0; l <= levels; ++l) {
    // loose tolerance on the coarse warm-up levels
    o.tol = (l == levels) ? opts.tol : std::max(opts.tol, 1e-6);
    SolveReport r = minimize_area(d, o);
    if (!r.converged)
      throw GeometryError("build_disc: solver did not converge at level " +
                          std::to_string(l) + " (residual " + std::to_string(r.residual) + ")");
    if (l < levels) d = subdivide_disc(d);
  }
  return d;
}

bool orbits_injective(const GreatCircle& axis, const Vec4& base,
                      const std::vector<Vec4>& pts, double merge_tol) {
  std::vector<Vec4> proj(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) proj[i] = orbit_project(axis, base, pts[i]);
  VertexLocator loc(proj, merge_tol);
  for (size_t i = 0; i < pts.size(); ++i)
    for (int hit : loc.find_all(proj[i]))
      if (size_t(hit) != i && (pts[hit] - pts[i]).norm() > 10 * merge_tol)
        return false;
  return true;
}

}  // namespace lawson
