#include "lawson/tessellation.hpp"

#include <cmath>

namespace lawson {

Angle q_lower_angle(const LawsonParams& p, std::int64_t k2) {
  // q_k = p_{(2k-1)pi/2m}, with k = k2/2
  return Angle::pi_times(k2 - 1, 2 * p.m);
}

Angle q_upper_angle(std::int64_t k2) { return Angle::pi_times(k2 - 1, 4); }

Vec4 q_lower(const LawsonParams& p, std::int64_t k2) {
  return p.frame.p_lower(q_lower_angle(p, k2));
}

Vec4 q_upper(const LawsonParams& p, std::int64_t k2) {
  return p.frame.p_upper(q_upper_angle(k2));
}

std::pair<std::int64_t, std::int64_t> interval_endpoints(std::int64_t idx, int tag) {
  std::int64_t lo = 2 * idx, hi = 2 * idx + 2, mid = 2 * idx + 1;
  switch (tag) {
    case 0:
      return {lo, hi};
    case +1:
      return {mid, hi};
    case -1:
      return {lo, mid};
    default:
      throw GeometryError("interval_endpoints: bad half tag");
  }
}

Tetra omega(const LawsonParams& p, const CellIndex& idx) {
  auto [a2, b2] = interval_endpoints(idx.i, idx.itag);
  auto [c2, d2] = interval_endpoints(idx.j, idx.jtag);
  Tetra t;
  t.index = idx;
  t.verts = {q_lower(p, a2), q_lower(p, b2), q_upper(p, c2), q_upper(p, d2)};
  const std::array<std::array<int, 3>, 4> ftri = {{{0, 2, 3}, {1, 2, 3}, {0, 1, 2}, {0, 1, 3}}};
  for (int f = 0; f < 4; ++f) {
    auto [u, v, w] = std::tuple{t.verts[ftri[f][0]], t.verts[ftri[f][1]], t.verts[ftri[f][2]]};
    t.faces[f] = Subspace::span_of({u, v, w});
    Vec4 n = cross4(u, v, w).normalized();
    int opposite = (f == 0) ? 1 : (f == 1) ? 0 : (f == 2) ? 3 : 2;
    if (n.dot(t.verts[opposite]) < 0) n = -n;
    t.inward[f] = n;
  }
  return t;
}

bool Tetra::contains(const Vec4& x, double tol) const {
  for (const Vec4& n : inward)
    if (n.dot(x) < -tol) return false;
  return true;
}

double tetra_dihedral(const Tetra& t, int face_a, int face_b) {
  double c = std::clamp(t.inward[face_a].dot(t.inward[face_b]), -1.0, 1.0);
  return M_PI - std::acos(c);
}

std::array<Isometry4, 3> cell_symmetries(const LawsonParams& p, std::int64_t i,
                                         std::int64_t j) {
  Angle phi = Angle::pi_times(i, p.m);
  Angle psi = Angle::pi_times(j, 2);
  Isometry4 r_lower = reflect_through(p.frame.sigma_lower(phi));
  Isometry4 r_upper = reflect_through(p.frame.sigma_upper(psi));
  Isometry4 r_axis = reflect_through(p.frame.circle_through(phi, psi).span());
  return {r_lower, r_upper, r_axis};
}

Quad quad(const LawsonParams& p, std::int64_t i, std::int64_t j,
          int samples_per_edge) {
  Quad q;
  q.i = i;
  q.j = j;
  Vec4 qa = q_lower(p, 2 * i), qb = q_lower(p, 2 * i + 2);
  Vec4 qc = q_upper(p, 2 * j), qd = q_upper(p, 2 * j + 2);
  q.verts = {qa, qb, qc, qd};
  q.edges = {{{qa, qc}, {qc, qb}, {qb, qd}, {qd, qa}}};
  for (const auto& [s, e] : q.edges)
    for (int k = 0; k < samples_per_edge; ++k)
      q.samples.push_back(geodesic(s, e, double(k) / samples_per_edge));
  return q;
}

bool OmuPattern::contains(const GreatCircleFrame& f, const Vec4& x, double tol) const {
  Vec4 y = f.matrix().transpose() * x;
  auto side = [tol](int s, double v) { return s == 0 || s * v >= -tol; };
  return side(sup0, y[3]) && side(sup1, y[2]) && side(sub0, y[1]) && side(sub1, y[0]);
}

std::vector<CellIndex> omu_decompose_up_star(const LawsonParams& p) {
  std::vector<CellIndex> cells;
  for (std::int64_t i = 0; i < 2 * p.m; ++i) {
    cells.push_back({i, 0, 0, +1});
    cells.push_back({i, 0, 1, -1});
  }
  return cells;
}

std::vector<CellIndex> omu_decompose_up_plus(const LawsonParams& p) {
  std::vector<CellIndex> cells;
  cells.push_back({0, +1, 0, +1});
  cells.push_back({0, +1, 1, -1});
  for (std::int64_t i = 1; i < p.m; ++i) {
    cells.push_back({i, 0, 0, +1});
    cells.push_back({i, 0, 1, -1});
  }
  cells.push_back({p.m, -1, 0, +1});
  cells.push_back({p.m, -1, 1, -1});
  return cells;
}

std::vector<CellIndex> omu_decompose_up_plusplus(const LawsonParams& p) {
  std::vector<CellIndex> cells;
  cells.push_back({0, +1, 0, +1});
  cells.push_back({0, +1, 1, -1});
  if (p.m % 2 == 0) {
    for (std::int64_t i = 1; i < p.m / 2; ++i) {
      cells.push_back({i, 0, 0, +1});
      cells.push_back({i, 0, 1, -1});
    }
    cells.push_back({p.m / 2, -1, 0, +1});
    cells.push_back({p.m / 2, -1, 1, -1});
  } else {
    for (std::int64_t i = 1; i <= (p.m - 1) / 2; ++i) {
      cells.push_back({i, 0, 0, +1});
      cells.push_back({i, 0, 1, -1});
    }
  }
  return cells;
}

GreatCircle cell_axis(const LawsonParams& p, std::int64_t i, std::int64_t j) {
  return p.frame.circle_through(Angle::pi_times(i, p.m), Angle::pi_times(j, 2));
}

Vec4 project_tetra(const LawsonParams& p, std::int64_t i, std::int64_t j,
                   const Vec4& x) {
  GreatCircle axis = cell_axis(p, i, j);
  Vec4 base = p.frame.p_lower(Angle::pi_times(i, p.m));
  return orbit_project(axis, base, x);
}

}  // namespace lawson
