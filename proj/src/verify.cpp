#include "lawson/verify.hpp"

#include <chrono>
#include <cmath>

namespace lawson {

bool SuiteReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass && !c.indeterminate) return false;
  return !indeterminate();
}

bool SuiteReport::indeterminate() const {
  for (const auto& c : checks)
    if (c.indeterminate) return true;
  return false;
}

void SuiteReport::add(const std::string& name, bool ok, double value, double threshold,
                      const std::string& detail) {
  checks.push_back({name, ok, false, value, threshold, detail});
}

void SuiteReport::add_leq(const std::string& name, double value, double threshold,
                          const std::string& detail) {
  checks.push_back({name, value <= threshold, false, value, threshold, detail});
}

Json SuiteReport::to_json() const {
  Json arr = Json::array();
  for (const auto& c : checks)
    arr.push_back(Json{{"name", c.name},
                       {"pass", c.pass},
                       {"indeterminate", c.indeterminate},
                       {"value", c.value},
                       {"threshold", c.threshold},
                       {"detail", c.detail}});
  return Json{{"suite", suite}, {"pass", pass()}, {"seconds", seconds}, {"checks", arr}};
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

double fold_half_pi(double x) {
  x = std::fmod(std::fmod(x, M_PI) + M_PI, M_PI);
  return std::min(x, M_PI - x);
}

std::uint64_t lcg_next(std::uint64_t& state) {
  state = state * 6364136223846793005ull + 1442695040888963407ull;
  return state >> 11;
}

double lcg_uniform(std::uint64_t& state) {
  return double(lcg_next(state)) / double(1ull << 53);
}

Vec4 random_sphere_point(std::uint64_t& state) {
  Vec4 v;
  for (int d = 0; d < 4; ++d) {
    // Box-Muller on uniform pairs
    double u1 = std::max(1e-16, lcg_uniform(state)), u2 = lcg_uniform(state);
    v[d] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  return v.normalized();
}

}  // namespace

// ---------------------------------------------------------------------------
// geometry identity suite

namespace {

// worst-deviation accumulator per clause
struct Worst {
  std::map<std::string, double> dev;
  void see(const std::string& clause, double d) {
    auto [it, fresh] = dev.emplace(clause, d);
    if (!fresh) it->second = std::max(it->second, d);
  }
};

double projector_distance(const Subspace& a, const Subspace& b) {
  return (a.projector() - b.projector()).cwiseAbs().maxCoeff();
}

void check_obs(Worst& w, const GreatCircleFrame& f, const Angle& phi, const Angle& phip,
               std::uint64_t& rng) {
  GreatCircle c = f.circle(), cp = f.circle_perp();
  Vec4 p_phi = f.p_lower(phi), p_up = f.p_upper(phip);

  // (i) antipodality and sphere periodicity
  w.see("L:obs(i)", (f.p_lower(phi.plus_pi()) + p_phi).norm());
  w.see("L:obs(i)", (f.p_upper(phip.plus_pi()) + p_up).norm());
  w.see("L:obs(i)", projector_distance(f.sigma_lower(phi.plus_pi()), f.sigma_lower(phi)));
  w.see("L:obs(i)", projector_distance(f.sigma_upper(phip.plus_pi()), f.sigma_upper(phip)));

  GreatCircle mixed = f.circle_through(phi, phip);
  // (ii) intersections with C and C-perp, orthogonal, 4-segment split
  {
    Subspace cap = Subspace::intersect(mixed.span(), c.span());
    w.see("L:obs(ii)", cap.dim() == 1 ? 0.0 : 1.0);
    w.see("L:obs(ii)", cap.contains(p_phi) ? 0.0 : 1.0);
    Vec4 tangent_c = f.p_lower(phi.plus_half_pi());
    w.see("L:obs(ii)", std::abs(tangent_c.dot(p_up)));  // orthogonal crossing
    for (int k = 0; k < 8; ++k) {
      double t = 2.0 * M_PI * (k + 0.37) / 8.0;
      Vec4 x = std::cos(t) * p_phi + std::sin(t) * p_up;
      double dist = std::min(
          std::min(distance_to_segment(p_phi, p_up, x), distance_to_segment(p_up, -p_phi, x)),
          std::min(distance_to_segment(-p_phi, -p_up, x), distance_to_segment(-p_up, p_phi, x)));
      w.see("L:obs(ii)", dist);
    }
  }
  // (iii)+(iv) hemisphere decompositions, tested by reconstruction
  {
    Subspace sig_up = f.sigma_upper(phip);
    for (int k = 0; k < 6; ++k) {
      Vec4 x = random_sphere_point(rng);
      x = (sig_up.projector() * x).normalized();  // random point of Sigma^phi'
      double height = x.dot(p_up);
      Vec4 pole = height >= 0 ? p_up : Vec4(-p_up);
      Vec4 residue = x - x.dot(pole) * pole;
      double rn = residue.norm();
      if (rn > 1e-8) {
        Vec4 on_c = residue / rn;
        w.see("L:obs(iii,iv)", (on_c - c.span().projector() * on_c).norm());
        w.see("L:obs(iii,iv)",
              (x - std::sqrt(std::max(0.0, 1 - rn * rn)) * pole - rn * on_c).norm());
      }
    }
  }
  // (v) Sigma^phi meets C-perp at the poles, orthogonally
  {
    Subspace cap = Subspace::intersect(f.sigma_upper(phip), cp.span());
    w.see("L:obs(v)", cap.dim() == 1 ? 0.0 : 1.0);
    w.see("L:obs(v)", cap.contains(p_up) ? 0.0 : 1.0);
    Vec4 tangent = f.p_upper(phip.plus_half_pi());
    Vec4 nrm = f.p_upper(phip.plus_half_pi());  // sphere normal at p^phi'
    w.see("L:obs(v)", std::abs(std::abs(tangent.dot(nrm)) - 1.0));
  }
  // (vi) the mixed circle is the orthogonal intersection of the two spheres
  {
    Subspace cap = Subspace::intersect(f.sigma_lower(phi), f.sigma_upper(phip));
    w.see("L:obs(vi)", projector_distance(cap, mixed.span()));
    Vec4 n_lo = f.p_lower(phi.plus_half_pi());
    Vec4 n_up = f.p_upper(phip.plus_half_pi());
    w.see("L:obs(vi)", std::abs(n_lo.dot(n_up)));
  }
  // (vii) the totally orthogonal circle
  {
    GreatCircle perp = mixed.perp();
    GreatCircle expect = f.circle_through(phi.plus_half_pi(), phip.plus_half_pi());
    w.see("L:obs(vii)", projector_distance(perp.span(), expect.span()));
  }
}

void check_obs_pairs(Worst& w, const GreatCircleFrame& f, const Angle& a1, const Angle& a2) {
  // (viii) sphere pencils around C / C-perp
  double d = a2.value() - a1.value();
  bool same = fold_half_pi(d) < 1e-12 || std::abs(fold_half_pi(d) - 0) < 1e-12;
  {
    Subspace s1 = f.sigma_upper(a1), s2 = f.sigma_upper(a2);
    double ang = std::acos(std::clamp(
        std::abs(f.p_upper(a1.plus_half_pi()).dot(f.p_upper(a2.plus_half_pi()))), 0.0, 1.0));
    if (same) {
      w.see("L:obs(viii)", projector_distance(s1, s2));
    } else {
      Subspace cap = Subspace::intersect(s1, s2);
      w.see("L:obs(viii)", projector_distance(cap, f.circle().span()));
      w.see("L:obs(viii)", std::abs(ang - fold_half_pi(d)));
    }
  }
  // (ix) two mixed circles; three regimes
  {
    Angle b1 = Angle::pi_times(1, 7), b2 = Angle::pi_times(1, 7);  // equal uppers
    GreatCircle c1 = f.circle_through(a1, b1), c2 = f.circle_through(a2, b2);
    Subspace cap = Subspace::intersect(c1.span(), c2.span());
    if (same) {
      w.see("L:obs(ix)", projector_distance(c1.span(), c2.span()));
    } else {
      // equal upper angles: meet at the poles p^{b}, angle a2-a1
      w.see("L:obs(ix)", cap.dim() == 1 ? 0.0 : 1.0);
      w.see("L:obs(ix)", cap.contains(f.p_upper(b1)) ? 0.0 : 1.0);
      double ang = std::acos(std::clamp(std::abs(f.p_lower(a1).dot(f.p_lower(a2))), 0.0, 1.0));
      w.see("L:obs(ix)", std::abs(ang - fold_half_pi(d)));
    }
    // generic angles: empty intersection
    Angle g1 = Angle::pi_times(2, 7), g2 = Angle::pi_times(3, 11);
    if (!same && fold_half_pi(a1.value() - g1.value()) > 1e-3 &&
        fold_half_pi(a2.value() - g2.value()) > 1e-3) {
      GreatCircle d1 = f.circle_through(a1, g1), d2 = f.circle_through(a2, g2);
      Subspace cap2 = Subspace::intersect(d1.span(), d2.span());
      w.see("L:obs(ix)", cap2.dim() == 0 ? 0.0 : 1.0);
    }
  }
}

void check_ksymm(Worst& w, const GreatCircleFrame& f, const Angle& phi, const Angle& phip) {
  Mat4 kc = killing_about(f.circle()).matrix();
  Mat4 kcp = killing_about(f.circle_perp()).matrix();
  Mat4 r_up = reflect_through(f.sigma_upper(phip)).matrix();
  Mat4 r_lo = reflect_through(f.sigma_lower(phi)).matrix();
  Mat4 r_mix = reflect_through(f.circle_through(phi, phip).span()).matrix();
  auto parity = [&](const Mat4& r, const Mat4& k, double sign) {
    return (r * k * r - sign * k).cwiseAbs().maxCoeff();
  };
  // (i)
  w.see("Ksymm(i)", parity(r_up, kc, -1.0));
  w.see("Ksymm(i)", parity(r_mix, kc, -1.0));
  w.see("Ksymm(i)", parity(r_lo, kc, +1.0));
  // (ii)
  w.see("Ksymm(ii)", parity(r_lo, kcp, -1.0));
  w.see("Ksymm(ii)", parity(r_mix, kcp, -1.0));
  w.see("Ksymm(ii)", parity(r_up, kcp, +1.0));
  // (iii)
  Mat4 kmix = killing_about(f.circle_through(phi, phip)).matrix();
  w.see("Ksymm(iii)", parity(reflect_through(f.sigma_lower(phi)).matrix(), kmix, -1.0));
  w.see("Ksymm(iii)", parity(reflect_through(f.sigma_upper(phip)).matrix(), kmix, -1.0));
  w.see("Ksymm(iii)",
        parity(reflect_through(f.sigma_lower(phi.plus_half_pi())).matrix(), kmix, +1.0));
  w.see("Ksymm(iii)",
        parity(reflect_through(f.sigma_upper(phip.plus_half_pi())).matrix(), kmix, +1.0));
  // fixed points and the geodesic orbit
  w.see("Ksymm(iii)", (kmix * f.p_upper(phip)).norm());
  w.see("Ksymm(iii)", (kmix * f.p_lower(phi)).norm());
  GreatCircle orbit = f.circle_through(phi.plus_half_pi(), phip.plus_half_pi());
  for (int k = 0; k < 4; ++k) {
    Vec4 x = orbit.point(Angle::radians(0.3 + 1.3 * k));
    Vec4 v = kmix * x;
    w.see("Ksymm(iii)", (v - orbit.span().projector() * v).norm());
  }
}

void check_omu(Worst& w, const GreatCircleFrame& f, std::uint64_t& rng) {
  Vec4 p0 = f.p_lower(Angle()), p1 = f.p_lower(Angle::pi_times(1, 2));
  Vec4 u0 = f.p_upper(Angle()), u1 = f.p_upper(Angle::pi_times(1, 2));
  std::array<Vec4, 4> verts = {u0, u1, p0, p1};
  // Omu:p(i)-(ii): right-angled faces, edges of length pi/2
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      w.see("Omu:p(ii)", std::abs(geodesic_distance(verts[a], verts[b]) - M_PI / 2));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        if (a == b || a == c || b >= c) continue;
        // face angle at vertex a between edges to b and c: tangents are the
        // other vertices themselves (all pairwise orthogonal)
        w.see("Omu:p(i)", std::abs(verts[b].dot(verts[c])));
      }
  // dihedral angles: the positive-orthant tetra in frame coordinates
  {
    LawsonParams p2(2 * 2);  // placeholder m; quarter tetra angles are m-free
    (void)p2;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        w.see("Omu:p(ii)", std::abs(verts[a].dot(verts[b])));  // orthogonal spheres
  }
  // symmetries of the quarter tetra listed in the lemma
  {
    Mat4 r1 = reflect_through(f.sigma_lower(Angle::pi_times(1, 4))).matrix();
    Mat4 r2 = reflect_through(f.sigma_upper(Angle::pi_times(1, 4))).matrix();
    Mat4 r3 = reflect_through(
                  f.circle_through(Angle::pi_times(1, 4), Angle::pi_times(1, 4)).span())
                  .matrix();
    for (const Mat4& r : {r1, r2, r3}) {
      double worst = 0;
      for (const Vec4& v : verts) {
        double best = 1e9;
        for (const Vec4& u : verts) best = std::min(best, (r * v - u).norm());
        worst = std::max(worst, best);
      }
      w.see("Omu:p(iii)", worst);
    }
  }

  // Omu:K endpoint maps under quarter turns about the coordinate circles
  Angle quarter = Angle::pi_times(1, 2);
  Angle zero = Angle::pi_times(0, 1);
  auto rot = [&](const GreatCircle& c, const Vec4& x) {
    return Vec4(rot_about(c, quarter).matrix() * x);
  };
  GreatCircle c00 = f.circle_through(zero, zero);
  GreatCircle c0p = f.circle_through(zero, quarter);
  GreatCircle cp0 = f.circle_through(quarter, zero);
  GreatCircle cpp = f.circle_through(quarter, quarter);
  w.see("Omu:K(i)", (rot(c00, u1) - p1).norm());
  w.see("Omu:K(ii)", (rot(c0p, p1) - u0).norm());
  w.see("Omu:K(iii)", (rot(cp0, p0) - u1).norm());
  w.see("Omu:K(iii)", (rot(cp0, u1) + p0).norm());
  w.see("Omu:K(iv)", (rot(cpp, p0) - u0).norm());
  w.see("Omu:K(iv)", (rot(cpp, u0) + p0).norm());

  // normalized-flow images of the positive domains are the stated segments
  struct Row {
    GreatCircle circle;
    OmuPattern domain;
    Vec4 seg_a, seg_b;
    const char* name;
  };
  Vec4 mu1 = -u1, mp1 = -p1, mp0 = -p0;
  std::vector<Row> rows = {
      {c00, OmuPattern{+1, +1, +1, 0}, p1, mu1, "Omu:K(i)"},
      {c0p, OmuPattern{+1, +1, +1, 0}, u0, mp1, "Omu:K(ii)"},
      {cp0, OmuPattern{+1, +1, +1, +1}, u1, mp0, "Omu:K(iii)"},
      {cp0, OmuPattern{+1, +1, +1, -1}, mp0, mu1, "Omu:K(iii)"},
      {cpp, OmuPattern{+1, +1, +1, +1}, u0, mp0, "Omu:K(iv)"},
      {cpp, OmuPattern{+1, +1, +1, -1}, mp0, Vec4(-u0), "Omu:K(iv)"},
  };
  for (const Row& row : rows) {
    Mat4 k = killing_about(row.circle).matrix();
    int used = 0;
    for (int t = 0; used < 12 && t < 200; ++t) {
      Vec4 x = random_sphere_point(rng);
      if (!row.domain.contains(f, x, 0.0)) continue;
      Vec4 v = k * x;
      if (v.norm() < 1e-3) continue;
      v.normalize();
      w.see(row.name, distance_to_segment(row.seg_a, row.seg_b, v));
      ++used;
    }
  }
}

}  // namespace

SuiteReport suite_geometry(const std::vector<int>& ms, int grid, double tol) {
  Timer timer;
  SuiteReport rep;
  rep.suite = "geometry";
  Worst w;
  std::uint64_t rng = 0xC0FFEE1234ull;
  GreatCircleFrame f = GreatCircleFrame::standard();

  for (int m : ms) {
    LawsonParams params(m);
    (void)params;
    for (int a = 0; a < grid; ++a)
      for (int b = 0; b < grid; ++b) {
        Angle phi = Angle::pi_times(2 * a, grid);   // 2 pi a / grid
        Angle phip = Angle::pi_times(2 * b, grid);
        check_obs(w, f, phi, phip, rng);
        check_ksymm(w, f, phi, phip);
        if (a < b) check_obs_pairs(w, f, phi, phip);
      }
  }
  check_omu(w, f, rng);

  for (const auto& [clause, dev] : w.dev) rep.add_leq(clause, dev, tol);
  rep.seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// baselines

SuiteReport suite_baselines(int sphere_subdivisions, int torus_n) {
  Timer timer;
  SuiteReport rep;
  rep.suite = "baselines";

  {  // great sphere: index 1, nullity 3, bottom eigenvalue -2
    TriMesh m = make_great_sphere_mesh(sphere_subdivisions);
    std::vector<Vec4> nrm;
    std::vector<double> a2, det, defect;
    estimate_curvature_fields(m, nrm, a2, det, defect);
    Eigen::VectorXd pot(m.num_vertices());
    for (int v = 0; v < m.num_vertices(); ++v) pot[v] = a2[v] + 2.0;
    DiscreteOperator op = assemble_operator(m, pot);
    Spectrum sp = solve_smallest(op, 8, 1e-10);
    rep.add_leq("sphere: |A|^2 ~ 0", Eigen::Map<Eigen::VectorXd>(a2.data(), a2.size())
                                         .cwiseAbs()
                                         .maxCoeff(),
                0.05);
    rep.add_leq("sphere: lambda_1 near -2", std::abs(sp.eigenvalues[0] + 2.0), 0.04);
    for (int i = 1; i <= 3; ++i)
      rep.add_leq("sphere: zero cluster |lambda_" + std::to_string(i + 1) + "|",
                  std::abs(sp.eigenvalues[i]), 0.05);
    CountResult c = count_with_band(sp, 0.05);
    rep.add("sphere: index 1", c.index == 1, c.index, 1);
    rep.add("sphere: nullity 3", c.nullity == 3, c.nullity, 3);
    rep.add_leq("sphere: vertices ~ 10k", std::abs(m.num_vertices() - 10242.0), 8000);
  }

  {  // Clifford torus: index 5, nullity 4, spectrum 2(k^2+l^2) - 4
    TriMesh m = make_clifford_torus_mesh(torus_n, torus_n);
    std::vector<Vec4> nrm;
    std::vector<double> a2, det, defect;
    estimate_curvature_fields(m, nrm, a2, det, defect);
    double worst_a2 = 0;
    for (double v : a2) worst_a2 = std::max(worst_a2, std::abs(v - 2.0));
    rep.add_leq("torus: |A|^2 ~ 2", worst_a2, 0.05);
    Eigen::VectorXd pot(m.num_vertices());
    for (int v = 0; v < m.num_vertices(); ++v) pot[v] = a2[v] + 2.0;
    DiscreteOperator op = assemble_operator(m, pot);
    Spectrum sp = solve_smallest(op, 12, 1e-10);
    const double expected[9] = {-4, -2, -2, -2, -2, 0, 0, 0, 0};
    for (int i = 0; i < 9; ++i)
      rep.add_leq("torus: lambda_" + std::to_string(i + 1) + " vs flat oracle",
                  std::abs(sp.eigenvalues[i] - expected[i]), 0.02 * 4.0);
    CountResult c = count_with_band(sp, 0.1);
    rep.add("torus: index 5", c.index == 5, c.index, 5);
    rep.add("torus: nullity 4", c.nullity == 4, c.nullity, 4);
  }

  rep.seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// surface pipeline

BuiltSurface analyze_surface(SurfaceMesh surf, int modes) {
  BuiltSurface b;
  b.surf = std::move(surf);
  Eigen::VectorXd pot(b.surf.mesh.num_vertices());
  for (int v = 0; v < b.surf.mesh.num_vertices(); ++v) pot[v] = b.surf.a2[v] + 2.0;
  b.op = assemble_operator(b.surf.mesh, pot);
  b.basis = jacobi_basis(b.surf, b.op);
  b.kj_scale = 0.0;
  for (const auto& j : b.basis)
    b.kj_scale = std::max(b.kj_scale, operator_residual(b.op, j.values));
  b.spec = solve_smallest(b.op, modes, 1e-10);
  b.count = count_certified(b.op, b.spec, b.kj_scale);
  return b;
}

BuiltSurface build_and_analyze(int m, int resolution, double tol, int modes) {
  LawsonParams p(m);
  SolveOptions opts;
  opts.tol = tol;
  DiscMesh disc = build_disc(p, resolution, opts);
  SurfaceMesh surf = assemble_surface(disc);
  BuiltSurface b = analyze_surface(std::move(surf), modes);
  return b;
}

// ---------------------------------------------------------------------------
// theorem / blocks / lemmas

SuiteReport suite_theorem(const BuiltSurface& coarse, const BuiltSurface& fine) {
  Timer timer;
  SuiteReport rep;
  rep.suite = "theorem m=" + std::to_string(coarse.surf.m);
  const int m = coarse.surf.m;
  const int want_index = 2 * m + 1;  // 2g+3 with g = m-1

  for (const BuiltSurface* b : {&coarse, &fine}) {
    std::string tag = (b == &coarse) ? "coarse" : "fine";
    rep.add(tag + ": certified", b->count.certified, b->count.certified ? 1 : 0, 1,
            "band=" + std::to_string(b->count.zero_band));
    rep.add(tag + ": index " + std::to_string(want_index), b->count.index == want_index,
            b->count.index, want_index);
    rep.add(tag + ": nullity 6", b->count.nullity == 6, b->count.nullity, 6);
  }
  rep.add("stable across refinement",
          coarse.count.index == fine.count.index && coarse.count.nullity == fine.count.nullity,
          fine.count.index, coarse.count.index);
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport suite_blocks(const BuiltSurface& b, int modes) {
  Timer timer;
  SuiteReport rep;
  rep.suite = "blocks m=" + std::to_string(b.surf.m);
  auto table = block_table(b.surf, b.op, b.kj_scale, modes);
  int sum_index = 0, sum_nullity = 0;
  for (const auto& row : table) {
    auto [want_i, want_n] = block_expected_counts(row.id, b.surf.m);
    rep.add(block_name(row.id) + " counts (" + std::to_string(want_i) + "," +
                std::to_string(want_n) + ")",
            row.index == want_i && row.nullity == want_n && row.certified,
            row.index * 100 + row.nullity, want_i * 100 + want_n);
    rep.add_leq(block_name(row.id) + " projection/fundamental agreement",
                row.eig_disagreement, 1e-8 * 10.0);
    sum_index += row.index;
    sum_nullity += row.nullity;
  }
  rep.add("block sums equal whole-surface counts",
          sum_index == b.count.index && sum_nullity == b.count.nullity,
          sum_index * 100 + sum_nullity, b.count.index * 100 + b.count.nullity);
  rep.seconds = timer.seconds();
  return rep;
}

namespace {

// quarter-disc submeshes for the intermediate-lemma problems
Submesh quarter_union(const SurfaceMesh& s, const std::vector<CellIndex>& cells) {
  LawsonParams p = s.params();
  std::vector<Tetra> tets;
  for (const auto& c : cells) tets.push_back(omega(p, c));
  Submesh sub;
  sub.mesh.metric = s.mesh.metric;
  std::vector<int> vmap(s.mesh.num_vertices(), -1);
  for (int t = 0; t < s.mesh.num_triangles(); ++t) {
    const auto& tr = s.mesh.tri[t];
    Vec4 bary = (s.mesh.pos[tr[0]] + s.mesh.pos[tr[1]] + s.mesh.pos[tr[2]]).normalized();
    bool inside = false;
    for (const auto& tet : tets) inside = inside || tet.contains(bary, 1e-12);
    if (!inside) continue;
    std::array<int, 3> nt;
    for (int k = 0; k < 3; ++k) {
      int v = tr[k];
      if (vmap[v] < 0) {
        vmap[v] = int(sub.mesh.pos.size());
        sub.mesh.pos.push_back(s.mesh.pos[v]);
        sub.to_parent.push_back(v);
      }
      nt[k] = vmap[v];
    }
    sub.mesh.tri.push_back(nt);
    sub.tri_parent.push_back(t);
  }
  return sub;
}

enum class CurveKind { SegmentQ1Up1, Alpha, Beta };

// Dirichlet set for a quarter-disc problem: classify boundary vertices by
// segment / alpha (Sigma_{i pi/m}) / beta (Sigma^{j pi/2}) membership
std::vector<int> quarter_dirichlet(const SurfaceMesh& s, const Submesh& sub,
                                   bool seg_dirichlet, bool alpha_dirichlet,
                                   bool beta_dirichlet) {
  LawsonParams p = s.params();
  Vec4 q1 = q_lower(p, 2), qu1 = q_upper(p, 2);
  auto bmask = boundary_vertex_mask(sub.mesh);
  std::vector<int> out;
  const double tol = 1e-7;
  for (int v = 0; v < sub.mesh.num_vertices(); ++v) {
    if (!bmask[v]) continue;
    const Vec4& x = sub.mesh.pos[v];
    Vec4 rseg = x - q1.dot(x) * q1 - qu1.dot(x) * qu1;
    bool on_seg = rseg.norm() <= tol && q1.dot(x) >= -tol && qu1.dot(x) >= -tol;
    bool on_alpha = false, on_beta = false;
    for (std::int64_t i = 0; i <= p.m && !(on_alpha); ++i) {
      Vec4 n = p.frame.p_lower(Angle::pi_times(i, p.m).plus_half_pi());
      if (std::abs(n.dot(x)) <= tol) on_alpha = true;
    }
    for (std::int64_t j = 0; j <= 1 && !(on_beta); ++j) {
      Vec4 n = p.frame.p_upper(Angle::pi_times(j, 2).plus_half_pi());
      if (std::abs(n.dot(x)) <= tol) on_beta = true;
    }
    if (!(on_seg || on_alpha || on_beta))
      throw GeometryError("quarter_dirichlet: unclassified boundary vertex");
    if ((on_seg && seg_dirichlet) || (on_alpha && alpha_dirichlet) ||
        (on_beta && beta_dirichlet))
      out.push_back(v);
  }
  return out;
}

Spectrum quarter_spectrum(const SurfaceMesh& s, const Submesh& sub,
                          const std::vector<int>& dirichlet, int k,
                          DiscreteOperator* out_op = nullptr) {
  Eigen::VectorXd pot(sub.mesh.num_vertices());
  for (int v = 0; v < sub.mesh.num_vertices(); ++v)
    pot[v] = s.a2[sub.to_parent[v]] + 2.0;
  MixedBC bc{dirichlet};
  DiscreteOperator op = assemble_operator(sub.mesh, pot, &bc);
  Spectrum sp = solve_smallest(op, std::min(k, op.size()), 1e-10);
  if (out_op) *out_op = op;
  return sp;
}

}  // namespace

SuiteReport suite_lemmas(const BuiltSurface& b) {
  Timer timer;
  SuiteReport rep;
  rep.suite = "lemma values m=" + std::to_string(b.surf.m);
  const double band = b.count.zero_band;

  // quarter disc D_{0+}^{0+}
  Submesh q00 = quarter_union(b.surf, {{0, +1, 0, +1}});
  {
    // Dirichlet on the segment, Neumann on alpha and beta: lambda_1 > 0
    auto d = quarter_dirichlet(b.surf, q00, true, false, false);
    Spectrum sp = quarter_spectrum(b.surf, q00, d, 4);
    rep.add("V^{++}_{+-}: lambda_1 > 0", sp.eigenvalues[0] > band, sp.eigenvalues[0], band);
  }
  {
    // all-Neumann quarter: lambda_1 < 0 < lambda_2
    Spectrum sp = quarter_spectrum(b.surf, q00, {}, 4);
    rep.add("V^{++}_{++}: lambda_1 < 0", sp.eigenvalues[0] < -band, sp.eigenvalues[0], -band);
    rep.add("V^{++}_{+}: lambda_2 > 0", sp.eigenvalues[1] > band, sp.eigenvalues[1], band);
  }
  {
    // union D_{0+}^{0+} u D_{1-}^{1-}: Dirichlet alpha, Neumann beta:
    // lambda_1 = 0 < lambda_2
    Submesh uni = quarter_union(b.surf, {{0, +1, 0, +1}, {1, -1, 1, -1}});
    auto d = quarter_dirichlet(b.surf, uni, false, true, false);
    Spectrum sp = quarter_spectrum(b.surf, uni, d, 4);
    rep.add_leq("V^{++}_{-}: |lambda_1|", std::abs(sp.eigenvalues[0]), band);
    rep.add("V^{++}_{-}: lambda_2 > 0", sp.eigenvalues[1] > band, sp.eigenvalues[1], band);
  }
  rep.seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Killing-Jacobi suite

SuiteReport suite_killing(const BuiltSurface& coarse, const BuiltSurface& fine) {
  Timer timer;
  SuiteReport rep;
  rep.suite = "killing m=" + std::to_string(coarse.surf.m);

  double smin_c = jacobi_gram_min_singular(coarse.surf, coarse.op, coarse.basis);
  double smin_f = jacobi_gram_min_singular(fine.surf, fine.op, fine.basis);
  rep.add("gram rank 6 (coarse)", smin_c > 1e-3, smin_c, 1e-3);
  rep.add("gram rank 6 (fine)", smin_f > 1e-3, smin_f, 1e-3);

  for (int k = 0; k < 6; ++k) {
    double rc = operator_residual(coarse.op, coarse.basis[k].values);
    double rf = operator_residual(fine.op, fine.basis[k].values);
    rep.add(coarse.basis[k].label + ": residual drops >= 1.5x", rc / rf >= 1.5, rc / rf, 1.5);
  }

  {  // principal angles between the numerical kernel and the Killing span
    Eigen::MatrixXd kernel(fine.surf.mesh.num_vertices(), 6);
    int found = 0;
    for (int i = 0; i < fine.spec.eigenvalues.size() && found < 6; ++i)
      if (std::abs(fine.spec.eigenvalues[i]) <= fine.count.zero_band)
        kernel.col(found++) = fine.spec.vectors.col(i);
    rep.add("kernel dimension 6", found == 6, found, 6);
    if (found == 6) {
      Eigen::MatrixXd killing_span(fine.surf.mesh.num_vertices(), 6);
      for (int k = 0; k < 6; ++k) killing_span.col(k) = fine.basis[k].values;
      auto angles = principal_angles(fine.op, kernel, killing_span);
      rep.add_leq("max principal angle (deg)", angles.front() * 180.0 / M_PI, 5.0);
    }
  }

  {  // finite-difference identities among the four mixed fields
    auto check_ld = [&](const BuiltSurface& b, int from, int to, double sign,
                        const std::string& name) {
      Eigen::VectorXd d = discrete_derivative(b.surf, b.basis[from].values);
      Eigen::VectorXd diff = d - sign * b.basis[to].values;
      double rel = std::sqrt(mass_inner(b.op, diff, diff) /
                             mass_inner(b.op, b.basis[to].values, b.basis[to].values));
      double rtol = 10.0 * std::max(operator_residual(b.op, b.basis[from].values),
                                    operator_residual(b.op, b.basis[to].values));
      rep.add_leq(name, rel, std::max(rtol, 1e-9));
    };
    check_ld(fine, 2, 5, +1.0, "L:D(i): D J_C00 = J_Cpp");
    check_ld(fine, 5, 2, -1.0, "L:D(i): D J_Cpp = -J_C00");
    check_ld(fine, 3, 4, -1.0, "L:D(ii): D J_C0p = -J_Cp0");
    check_ld(fine, 4, 3, +1.0, "L:D(ii): D J_Cp0 = J_C0p");
  }

  {  // sign reports
    auto checks = sign_checks(fine.surf, fine.basis);
    for (const auto& c : checks)
      rep.add(c.name, c.min_value >= -1e-6 * c.field_norm, c.min_value,
              -1e-6 * c.field_norm, "set size " + std::to_string(c.set_size));
  }
  rep.seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// appendix cross-checks

SuiteReport suite_appendices(const BuiltSurface& b, int randomized_cuts, std::uint64_t seed) {
  Timer timer;
  SuiteReport rep;
  rep.suite = "appendices m=" + std::to_string(b.surf.m);
  LawsonParams p = b.surf.params();
  const double band = b.count.zero_band;

  {  // subdivision of the all-Neumann problem on M^{++}_{**} along the
     // Sigma_{i pi/m} traces
    Submesh dom = extract_chamber(b.surf, OmuPattern{+1, +1, 0, 0});
    MRInput in;
    in.mesh = dom.mesh;
    in.potential.resize(dom.mesh.num_vertices());
    for (int v = 0; v < dom.mesh.num_vertices(); ++v)
      in.potential[v] = b.surf.a2[dom.to_parent[v]] + 2.0;
    in.lambda = 0.0;
    in.band = band;
    std::vector<int> parent_to_sub(b.surf.mesh.num_vertices(), -1);
    for (int v = 0; v < dom.mesh.num_vertices(); ++v) parent_to_sub[dom.to_parent[v]] = v;
    for (std::int64_t i = 0; i < p.m; ++i) {
      std::vector<int> curve;
      for (int v : vertices_on_sigma_lower(b.surf, i))
        if (parent_to_sub[v] >= 0) curve.push_back(parent_to_sub[v]);
      if (!curve.empty()) in.cuts.push_back(curve);
    }
    MRReport mr = montiel_ros_check(in);
    rep.add("V^{++} subdivision: pieces = 2m", mr.n_pieces == 2 * p.m, mr.n_pieces, 2 * p.m);
    rep.add("V^{++} subdivision: lower bound holds", mr.holds_lower, mr.rhs_dirichlet,
            mr.whole_strictly_below);
    rep.add("V^{++} subdivision: upper bound holds", mr.holds_upper, mr.rhs_neumann,
            mr.whole_below_or_equal);
    rep.add("V^{++} subdivision: consistent with ind = 2m-1",
            mr.whole_strictly_below == 2 * p.m - 1, mr.whole_strictly_below, 2 * p.m - 1);
    CheckLine& last = rep.checks.back();
    if (!mr.conclusive) last.indeterminate = true;
  }

  {  // randomized sphere-cut subdivisions of the closed surface
    std::uint64_t rng = seed;
    for (int trial = 0; trial < randomized_cuts; ++trial) {
      MRInput in;
      in.mesh = b.surf.mesh;
      in.potential.resize(b.surf.mesh.num_vertices());
      for (int v = 0; v < b.surf.mesh.num_vertices(); ++v)
        in.potential[v] = b.surf.a2[v] + 2.0;
      in.lambda = 0.0;
      in.band = band;
      // nonempty subset of the m+2 symmetry spheres
      int n_spheres = p.m + 2;
      std::uint64_t mask = 0;
      while (mask == 0) mask = lcg_next(rng) % (1ull << n_spheres);
      for (int sidx = 0; sidx < n_spheres; ++sidx) {
        if (!(mask & (1ull << sidx))) continue;
        std::vector<int> curve = (sidx < 2) ? vertices_on_sigma_upper(b.surf, sidx)
                                            : vertices_on_sigma_lower(b.surf, sidx - 2);
        in.cuts.push_back(curve);
      }
      MRReport mr = montiel_ros_check(in);
      in.first_piece = int(lcg_next(rng) % std::max(1, mr.n_pieces));
      mr = montiel_ros_check(in);
      std::string tag = "random cut " + std::to_string(trial + 1);
      rep.add(tag + ": lower bound holds", mr.holds_lower, mr.rhs_dirichlet,
              mr.whole_strictly_below,
              "pieces=" + std::to_string(mr.n_pieces));
      rep.add(tag + ": upper bound holds", mr.holds_upper, mr.rhs_neumann,
              mr.whole_below_or_equal);
      if (!mr.conclusive) {
        rep.checks.back().indeterminate = true;
      }
    }
  }

  {  // Courant bounds on the first 8 eigenfunctions of every block problem
    for (BlockId id : all_blocks()) {
      FundamentalProblem fp = block_fundamental_problem(b.surf, id);
      DiscreteOperator op = assemble_operator(fp.domain.mesh, fp.potential, &fp.bc);
      Spectrum sp = solve_smallest(op, std::min(8, op.size()), 1e-10);
      for (int i = 0; i < sp.eigenvalues.size(); ++i) {
        Eigen::VectorXd vals = sp.vectors.col(i);
        NodalCount nc = nodal_domains(fp.domain.mesh, vals);
        std::string tag = block_name(id) + " mode " + std::to_string(i + 1);
        if (i == 0)
          rep.add(tag + ": one nodal domain", nc.lo <= 1 && 1 <= nc.hi,
                  nc.hi, 1);
        else
          rep.add(tag + ": at most n nodal domains", nc.hi <= i + 1, nc.hi, i + 1);
      }
      // lambda_1 simple
      rep.add(block_name(id) + ": lambda_1 simple",
              sp.eigenvalues.size() < 2 ||
                  sp.eigenvalues[1] - sp.eigenvalues[0] > band,
              sp.eigenvalues.size() < 2 ? 1.0 : sp.eigenvalues[1] - sp.eigenvalues[0], band);
    }
  }
  rep.seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// structural checks

SuiteReport suite_structure(const BuiltSurface& coarse, const BuiltSurface& fine) {
  Timer timer;
  SuiteReport rep;
  rep.suite = "structure m=" + std::to_string(coarse.surf.m);
  const int m = coarse.surf.m;

  rep.add("chi = 4 - 2m", euler_characteristic(fine.surf.mesh) == 4 - 2 * m,
          double(euler_characteristic(fine.surf.mesh)), 4 - 2 * m);
  rep.add("group order", fine.surf.group.size() == 16 * m, fine.surf.group.size(), 16 * m);
  rep.add("m+2 sphere generators", int(fine.surf.group.sphere_generators.size()) == m + 2,
          double(fine.surf.group.sphere_generators.size()), m + 2);
  rep.add("2m circle generators", int(fine.surf.group.circle_generators.size()) == 2 * m,
          double(fine.surf.group.circle_generators.size()), 2 * m);

  // every group element permutes the vertex set within the weld tolerance
  bool perms_ok = fine.surf.group_perm.size() == size_t(fine.surf.group.size());
  rep.add("group permutes vertices within 1e-8", perms_ok, perms_ok ? 1 : 0, 1);

  // |A| at the four umbilics decreases under refinement
  LawsonParams p(m);
  double worst_ratio = 0.0, amax_fine = 0.0;
  for (std::int64_t j = 0; j < 4; ++j) {
    int vc = coarse.surf.vertex_on_cperp.at(2 * j);
    int vf = fine.surf.vertex_on_cperp.at(2 * j);
    double ac = std::sqrt(std::max(0.0, coarse.surf.a2[vc]));
    double af = std::sqrt(std::max(0.0, fine.surf.a2[vf]));
    worst_ratio = std::max(worst_ratio, af / std::max(ac, 1e-300));
    amax_fine = std::max(amax_fine, af);
  }
  rep.add("|A| at umbilics decreases under refinement", worst_ratio < 1.0, worst_ratio, 1.0,
          "max |A| fine = " + std::to_string(amax_fine));
  (void)p;
  rep.seconds = timer.seconds();
  return rep;
}

}  // namespace lawson
