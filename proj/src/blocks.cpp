#include "lawson/blocks.hpp"

#include <cmath>

namespace lawson {

std::array<BlockId, 6> all_blocks() {
  return {BlockId::Vmm,      BlockId::Vpp,      BlockId::VmpMinus,
          BlockId::VpmMinus, BlockId::VmpPlus,  BlockId::VpmPlus};
}

std::string block_name(BlockId id) {
  switch (id) {
    case BlockId::Vmm: return "V^{--}";
    case BlockId::Vpp: return "V^{++}";
    case BlockId::VmpMinus: return "V^{-+}_-";
    case BlockId::VpmMinus: return "V^{+-}_-";
    case BlockId::VmpPlus: return "V^{-+}_+";
    case BlockId::VpmPlus: return "V^{+-}_+";
  }
  return "?";
}

std::pair<int, int> block_expected_counts(BlockId id, int m) {
  switch (id) {
    case BlockId::Vmm: return {0, 1};
    case BlockId::Vpp: return {2 * m - 1, 1};
    case BlockId::VmpMinus: return {0, 1};
    case BlockId::VpmMinus: return {0, 1};
    case BlockId::VmpPlus: return {1, 1};
    case BlockId::VpmPlus: return {1, 1};
  }
  return {0, 0};
}

namespace {

// signs (s_up0, s_up1, s_lo0) of the characters making up the block; the
// merged blocks list both subscript characters
std::vector<std::array<int, 3>> block_characters(BlockId id) {
  switch (id) {
    case BlockId::Vmm: return {{-1, -1, +1}, {-1, -1, -1}};
    case BlockId::Vpp: return {{+1, +1, +1}, {+1, +1, -1}};
    case BlockId::VmpMinus: return {{-1, +1, -1}};
    case BlockId::VpmMinus: return {{+1, -1, -1}};
    case BlockId::VmpPlus: return {{-1, +1, +1}};
    case BlockId::VpmPlus: return {{+1, -1, +1}};
  }
  return {};
}

}  // namespace

ProjectedOperator project_character(const SurfaceMesh& s, const DiscreteOperator& full,
                                    int s_up0, int s_up1, int s_lo0) {
  if (full.size() != full.full_size)
    throw GeometryError("project_character: expects the unconstrained closed-surface operator");
  LawsonParams p = s.params();
  Angle zero = Angle::pi_times(0, 1);
  Angle half = Angle::pi_times(1, 2);
  std::array<Mat4, 3> gens = {
      reflect_through(p.frame.sigma_upper(zero)).matrix(),
      reflect_through(p.frame.sigma_upper(half)).matrix(),
      reflect_through(p.frame.sigma_lower(zero)).matrix()};
  std::array<int, 3> chi = {s_up0, s_up1, s_lo0};

  // the eight elements of the character group and their signs
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
  for (int mask = 0; mask < 8; ++mask) {
    Mat4 g = Mat4::Identity();
    int sg = 1;
    for (int b = 0; b < 3; ++b)
      if (mask & (1 << b)) {
        g = gens[b] * g;
        sg *= chi[b];
      }
    perms.push_back(vertex_permutation(s.mesh, g));
    signs.push_back(sg);
  }

  const int n = s.mesh.num_vertices();
  std::vector<int> rep(n, -1);       // reduced dof id or -1
  std::vector<int> rep_list;
  std::vector<char> killed(n, 0);
  for (int v = 0; v < n; ++v) {
    // orbit minimum as representative; a -1 character on the stabilizer
    // forces the dof to zero
    int mn = v;
    bool kill = false;
    for (int e = 0; e < 8; ++e) {
      int img = perms[e][v];
      mn = std::min(mn, img);
      if (img == v && signs[e] < 0) kill = true;
    }
    if (mn != v) continue;
    if (kill) {
      killed[v] = 1;
      continue;
    }
    rep[v] = int(rep_list.size());
    rep_list.push_back(v);
  }
  const int nr = int(rep_list.size());

  // lifting matrix E: (E x)(g.r) = chi(g) x_r
  std::vector<Eigen::Triplet<double>> et;
  std::vector<char> seen(n, 0);
  for (int r = 0; r < nr; ++r) {
    int v = rep_list[r];
    for (int e = 0; e < 8; ++e) {
      int img = perms[e][v];
      if (seen[img]) continue;
      seen[img] = 1;
      et.emplace_back(img, r, double(signs[e]));
    }
  }
  Eigen::SparseMatrix<double> lift(n, nr);
  lift.setFromTriplets(et.begin(), et.end());

  ProjectedOperator out;
  out.lift = lift;
  DiscreteOperator& rop = out.op;
  rop.full_size = nr;
  rop.free_to_full.resize(nr);
  rop.full_to_free.assign(nr, 0);
  for (int i = 0; i < nr; ++i) {
    rop.free_to_full[i] = i;
    rop.full_to_free[i] = i;
  }
  rop.stiffness = lift.transpose() * full.stiffness * lift;
  rop.pencil = lift.transpose() * full.pencil * lift;
  rop.mass.resize(nr);
  rop.potential.resize(nr);
  for (int r = 0; r < nr; ++r) {
    double msum = 0;
    // diagonal of E^T M E
    for (Eigen::SparseMatrix<double>::InnerIterator it(lift, r); it; ++it)
      msum += full.mass[it.row()];
    rop.mass[r] = msum;
    rop.potential[r] = full.potential[rep_list[r]];
  }
  return out;
}

FundamentalProblem block_fundamental_problem(const SurfaceMesh& s, BlockId id) {
  LawsonParams p = s.params();
  FundamentalProblem fp;
  const bool merged = (id == BlockId::Vmm || id == BlockId::Vpp);
  OmuPattern pat = merged ? OmuPattern{+1, +1, 0, 0} : OmuPattern{+1, +1, +1, 0};
  fp.domain = extract_chamber(s, pat);

  int d_up0 = 0, d_up1 = 0, d_lo0 = 0;  // 1 = Dirichlet on that trace
  switch (id) {
    case BlockId::Vmm: d_up0 = d_up1 = 1; break;
    case BlockId::Vpp: break;
    case BlockId::VmpMinus: d_up0 = 1; d_lo0 = 1; break;
    case BlockId::VpmMinus: d_up1 = 1; d_lo0 = 1; break;
    case BlockId::VmpPlus: d_up0 = 1; break;
    case BlockId::VpmPlus: d_up1 = 1; break;
  }
  fp.description = block_name(id) + " on " + (merged ? "M^{++}_{**}" : "M^{++}_{+*}");

  // classify submesh boundary vertices by the spheres they lie on; the
  // corner rule applies Dirichlet when any incident curve is Dirichlet
  const double tol = 1e-7;
  auto bmask = boundary_vertex_mask(fp.domain.mesh);
  for (int v = 0; v < fp.domain.mesh.num_vertices(); ++v) {
    if (!bmask[v]) continue;
    Vec4 y = p.frame.matrix().transpose() * fp.domain.mesh.pos[v];
    bool on_up0 = std::abs(y[3]) <= tol;
    bool on_up1 = std::abs(y[2]) <= tol;
    bool on_lo0 = std::abs(y[1]) <= tol;
    if (!(on_up0 || on_up1 || (!merged && on_lo0)))
      throw GeometryError("block_fundamental_problem: unclassified boundary vertex");
    bool dirichlet = (on_up0 && d_up0) || (on_up1 && d_up1) || (!merged && on_lo0 && d_lo0);
    if (dirichlet) fp.bc.dirichlet.push_back(v);
  }

  fp.potential.resize(fp.domain.mesh.num_vertices());
  for (int v = 0; v < fp.domain.mesh.num_vertices(); ++v)
    fp.potential[v] = s.a2[fp.domain.to_parent[v]] + 2.0;
  return fp;
}

std::vector<BlockReport> block_table(const SurfaceMesh& s, const DiscreteOperator& full,
                                     double scale_hint, int modes) {
  std::vector<BlockReport> out;
  for (BlockId id : all_blocks()) {
    BlockReport rep;
    rep.id = id;

    // projection mode: merge the characters of the block
    std::vector<double> proj_eigs;
    int index = 0, nullity = 0;
    bool certified = true;
    for (const auto& chi : block_characters(id)) {
      ProjectedOperator po = project_character(s, full, chi[0], chi[1], chi[2]);
      Spectrum sp = solve_smallest(po.op, std::min(modes + 6, po.op.size()), 1e-10);
      CountResult cr = count_certified(po.op, sp, scale_hint);
      index += cr.index;
      nullity += cr.nullity;
      certified = certified && cr.certified;
      for (int i = 0; i < sp.eigenvalues.size(); ++i)
        proj_eigs.push_back(sp.eigenvalues[i]);
    }
    std::sort(proj_eigs.begin(), proj_eigs.end());
    rep.index = index;
    rep.nullity = nullity;
    rep.certified = certified;
    rep.eigs_projection =
        Eigen::Map<Eigen::VectorXd>(proj_eigs.data(), std::min<int>(modes, proj_eigs.size()));

    // fundamental mode
    FundamentalProblem fp = block_fundamental_problem(s, id);
    DiscreteOperator fop = assemble_operator(fp.domain.mesh, fp.potential, &fp.bc);
    Spectrum fsp = solve_smallest(fop, std::min(modes, fop.size()), 1e-10);
    rep.eigs_fundamental = fsp.eigenvalues;

    int ncmp = std::min<int>(modes, std::min(rep.eigs_projection.size(), rep.eigs_fundamental.size()));
    double dis = 0;
    // merged blocks interleave two characters; compare only against the
    // matching leading modes of the fundamental problem
    for (int i = 0; i < ncmp; ++i)
      dis = std::max(dis, std::abs(rep.eigs_projection[i] - rep.eigs_fundamental[i]));
    rep.eig_disagreement = dis;
    out.push_back(rep);
  }
  return out;
}

}  // namespace lawson
