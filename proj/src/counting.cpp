#include "lawson/counting.hpp"

#include <numeric>
#include <set>

namespace lawson {

namespace {

struct DSU {
  std::vector<int> parent;
  explicit DSU(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Piece {
  TriMesh mesh;
  Eigen::VectorXd potential;
  std::vector<int> outer_dirichlet;  // piece indexing
  std::vector<int> cut_vertices;     // piece indexing
};

std::vector<Piece> split_pieces(const MRInput& in) {
  const TriMesh& m = in.mesh;
  std::vector<int> cut_curve(m.num_vertices(), -1);
  for (size_t c = 0; c < in.cuts.size(); ++c)
    for (int v : in.cuts[c]) cut_curve[v] = int(c);
  auto cut_edge = [&](int a, int b) {
    return cut_curve[a] >= 0 && cut_curve[a] == cut_curve[b];
  };

  // triangle adjacency across non-cut edges
  std::map<std::pair<int, int>, std::vector<int>> e2t;
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int e = 0; e < 3; ++e) {
      int a = m.tri[t][e], b = m.tri[t][(e + 1) % 3];
      e2t[{std::min(a, b), std::max(a, b)}].push_back(t);
    }
  DSU dsu(m.num_triangles());
  for (const auto& [k, ts] : e2t) {
    if (ts.size() != 2 || cut_edge(k.first, k.second)) continue;
    dsu.unite(ts[0], ts[1]);
  }

  std::map<int, int> root_to_piece;
  std::vector<std::vector<int>> piece_tris;
  for (int t = 0; t < m.num_triangles(); ++t) {
    int r = dsu.find(t);
    auto [it, fresh] = root_to_piece.emplace(r, int(piece_tris.size()));
    if (fresh) piece_tris.emplace_back();
    piece_tris[it->second].push_back(t);
  }

  std::set<int> outer_d(in.outer_dirichlet.begin(), in.outer_dirichlet.end());
  std::vector<Piece> pieces;
  for (const auto& tris : piece_tris) {
    Piece p;
    p.mesh.metric = m.metric;
    std::vector<int> vmap(m.num_vertices(), -1);
    std::vector<int> to_parent;
    for (int t : tris) {
      std::array<int, 3> nt;
      for (int k = 0; k < 3; ++k) {
        int v = m.tri[t][k];
        if (vmap[v] < 0) {
          vmap[v] = int(p.mesh.pos.size());
          p.mesh.pos.push_back(m.pos[v]);
          to_parent.push_back(v);
        }
        nt[k] = vmap[v];
      }
      p.mesh.tri.push_back(nt);
    }
    p.potential.resize(p.mesh.num_vertices());
    for (int v = 0; v < p.mesh.num_vertices(); ++v) {
      p.potential[v] = in.potential[to_parent[v]];
      if (outer_d.count(to_parent[v])) p.outer_dirichlet.push_back(v);
      if (cut_curve[to_parent[v]] >= 0) p.cut_vertices.push_back(v);
    }
    pieces.push_back(std::move(p));
  }
  return pieces;
}

// {#below lambda-band, #below lambda+band} with a stability probe at the
// band edges; sets `stable` false when an eigenvalue sits near either edge
std::array<int, 2> certified_counts(const TriMesh& mesh, const Eigen::VectorXd& pot,
                                    const std::vector<int>& dirichlet, double lambda,
                                    double band, bool& stable) {
  MixedBC bc{dirichlet};
  DiscreteOperator op = assemble_operator(mesh, pot, &bc);
  if (op.size() == 0) {
    // everything pinned; no spectrum below anything
    return {0, 0};
  }
  int lo = count_below(op, lambda - band);
  int hi = count_below(op, lambda + band);
  if (count_below(op, lambda - 1.5 * band) != count_below(op, lambda - 0.5 * band))
    stable = false;
  if (count_below(op, lambda + 0.5 * band) != count_below(op, lambda + 1.5 * band))
    stable = false;
  return {lo, hi};
}

}  // namespace

MRReport montiel_ros_check(const MRInput& in) {
  if (in.band <= 0) throw GeometryError("montiel_ros_check: band must be positive");
  MRReport rep;
  bool stable = true;

  auto whole = certified_counts(in.mesh, in.potential, in.outer_dirichlet, in.lambda,
                                in.band, stable);
  rep.whole_strictly_below = whole[0];
  rep.whole_below_or_equal = whole[1];

  std::vector<Piece> pieces = split_pieces(in);
  rep.n_pieces = int(pieces.size());
  int first = std::clamp(in.first_piece, 0, rep.n_pieces - 1);

  for (int i = 0; i < rep.n_pieces; ++i) {
    const Piece& p = pieces[i];
    std::vector<int> with_cut = p.outer_dirichlet;
    with_cut.insert(with_cut.end(), p.cut_vertices.begin(), p.cut_vertices.end());
    rep.piece_counts_dirichlet.push_back(
        certified_counts(p.mesh, p.potential, with_cut, in.lambda, in.band, stable));
    rep.piece_counts_neumann.push_back(
        certified_counts(p.mesh, p.potential, p.outer_dirichlet, in.lambda, in.band, stable));
  }

  rep.rhs_dirichlet = 0;
  rep.rhs_neumann = 0;
  for (int i = 0; i < rep.n_pieces; ++i) {
    rep.rhs_dirichlet +=
        (i == first) ? rep.piece_counts_dirichlet[i][0] : rep.piece_counts_dirichlet[i][1];
    rep.rhs_neumann +=
        (i == first) ? rep.piece_counts_neumann[i][1] : rep.piece_counts_neumann[i][0];
  }
  rep.holds_lower = rep.whole_strictly_below >= rep.rhs_dirichlet;
  rep.holds_upper = rep.whole_below_or_equal <= rep.rhs_neumann;
  rep.conclusive = stable;
  return rep;
}

NodalCount nodal_domains(const TriMesh& mesh, const Eigen::VectorXd& values,
                         double rel_band) {
  const int n = mesh.num_vertices();
  double band = rel_band * values.cwiseAbs().maxCoeff();
  std::vector<int> sign(n, 0);
  for (int v = 0; v < n; ++v)
    if (values[v] > band)
      sign[v] = +1;
    else if (values[v] < -band)
      sign[v] = -1;

  // strict components: edges joining equal nonzero signs
  auto strict_components = [&]() {
    DSU dsu(n);
    for (const auto& t : mesh.tri)
      for (int e = 0; e < 3; ++e) {
        int a = t[e], b = t[(e + 1) % 3];
        if (sign[a] != 0 && sign[a] == sign[b]) dsu.unite(a, b);
      }
    std::set<int> roots;
    for (int v = 0; v < n; ++v)
      if (sign[v] != 0) roots.insert(dsu.find(v));
    return int(roots.size());
  };
  // lower bound: unassigned vertices may bridge components of one sign,
  // never both signs at once
  auto merged_components = [&](int s) {
    DSU dsu(n);
    auto in_side = [&](int v) { return sign[v] == s || sign[v] == 0; };
    for (const auto& t : mesh.tri)
      for (int e = 0; e < 3; ++e) {
        int a = t[e], b = t[(e + 1) % 3];
        if (in_side(a) && in_side(b)) dsu.unite(a, b);
      }
    std::set<int> roots;
    for (int v = 0; v < n; ++v)
      if (sign[v] == s) roots.insert(dsu.find(v));
    return int(roots.size());
  };

  NodalCount out;
  out.hi = strict_components();
  out.lo = merged_components(+1) + merged_components(-1);
  return out;
}

}  // namespace lawson
