#include "lawson/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace lawson {

double edge_length(const TriMesh& m, const Vec4& p, const Vec4& q) {
  return m.metric == Metric::Sphere ? geodesic_distance(p, q) : (p - q).norm();
}

namespace {

using EdgeKey = std::pair<int, int>;
EdgeKey ekey(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::map<EdgeKey, int> edge_counts(const TriMesh& m) {
  std::map<EdgeKey, int> cnt;
  for (const auto& t : m.tri)
    for (int e = 0; e < 3; ++e) ++cnt[ekey(t[e], t[(e + 1) % 3])];
  return cnt;
}

}  // namespace

long euler_characteristic(const TriMesh& m) {
  auto cnt = edge_counts(m);
  return long(m.num_vertices()) - long(cnt.size()) + long(m.num_triangles());
}

std::vector<std::array<int, 2>> boundary_edges(const TriMesh& m) {
  auto cnt = edge_counts(m);
  std::vector<std::array<int, 2>> out;
  for (const auto& [k, c] : cnt)
    if (c == 1) out.push_back({k.first, k.second});
  return out;
}

std::vector<char> boundary_vertex_mask(const TriMesh& m) {
  std::vector<char> mask(m.num_vertices(), 0);
  for (const auto& e : boundary_edges(m)) mask[e[0]] = mask[e[1]] = 1;
  return mask;
}

bool is_closed(const TriMesh& m) { return boundary_edges(m).empty(); }

bool is_edge_manifold(const TriMesh& m) {
  for (const auto& [k, c] : edge_counts(m))
    if (c > 2) return false;
  return true;
}

bool orient_consistently(TriMesh& m) {
  std::map<EdgeKey, std::vector<int>> e2t;
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int e = 0; e < 3; ++e)
      e2t[ekey(m.tri[t][e], m.tri[t][(e + 1) % 3])].push_back(t);

  auto has_directed = [&](int t, int a, int b) {
    for (int e = 0; e < 3; ++e)
      if (m.tri[t][e] == a && m.tri[t][(e + 1) % 3] == b) return true;
    return false;
  };

  std::vector<int> state(m.num_triangles(), 0);  // 0 unseen, 1 queued/done
  for (int seed = 0; seed < m.num_triangles(); ++seed) {
    if (state[seed]) continue;
    state[seed] = 1;
    std::deque<int> queue{seed};
    while (!queue.empty()) {
      int t = queue.front();
      queue.pop_front();
      for (int e = 0; e < 3; ++e) {
        int a = m.tri[t][e], b = m.tri[t][(e + 1) % 3];
        for (int u : e2t[ekey(a, b)]) {
          if (u == t) continue;
          bool consistent = has_directed(u, b, a);
          if (!state[u]) {
            if (!consistent) std::swap(m.tri[u][1], m.tri[u][2]);
            state[u] = 1;
            queue.push_back(u);
          } else if (!consistent) {
            return false;  // non-orientable
          }
        }
      }
    }
  }
  return true;
}

TriMesh subdivide(const TriMesh& m) {
  TriMesh out;
  out.metric = m.metric;
  out.pos = m.pos;
  std::map<EdgeKey, int> mid;
  auto midpoint = [&](int a, int b) {
    auto it = mid.find(ekey(a, b));
    if (it != mid.end()) return it->second;
    Vec4 p = 0.5 * (m.pos[a] + m.pos[b]);
    if (m.metric == Metric::Sphere) p.normalize();
    out.pos.push_back(p);
    int id = int(out.pos.size()) - 1;
    mid[ekey(a, b)] = id;
    return id;
  };
  for (const auto& t : m.tri) {
    int ab = midpoint(t[0], t[1]);
    int bc = midpoint(t[1], t[2]);
    int ca = midpoint(t[2], t[0]);
    out.tri.push_back({t[0], ab, ca});
    out.tri.push_back({ab, t[1], bc});
    out.tri.push_back({ca, bc, t[2]});
    out.tri.push_back({ab, bc, ca});
  }
  return out;
}

double triangle_area_from_lengths(Metric metric, double a, double b, double c) {
  if (metric == Metric::Flat || std::max({a, b, c}) < 1e-5) {
    double s = 0.5 * (a + b + c);
    double arg = std::max(0.0, s * (s - a) * (s - b) * (s - c));
    return std::sqrt(arg);
  }
  double s = 0.5 * (a + b + c);
  double t4 = std::tan(0.5 * s) * std::tan(0.5 * (s - a)) * std::tan(0.5 * (s - b)) *
              std::tan(0.5 * (s - c));
  return 4.0 * std::atan(std::sqrt(std::max(0.0, t4)));
}

double triangle_area(const TriMesh& m, int t) {
  const auto& [i, j, k] = m.tri[t];
  double a = edge_length(m, m.pos[j], m.pos[k]);
  double b = edge_length(m, m.pos[i], m.pos[k]);
  double c = edge_length(m, m.pos[i], m.pos[j]);
  return triangle_area_from_lengths(m.metric, a, b, c);
}

double total_area(const TriMesh& m) {
  double s = 0;
  for (int t = 0; t < m.num_triangles(); ++t) s += triangle_area(m, t);
  return s;
}

Eigen::VectorXd vertex_masses(const TriMesh& m) {
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(m.num_vertices());
  for (int t = 0; t < m.num_triangles(); ++t) {
    double a3 = triangle_area(m, t) / 3.0;
    for (int v : m.tri[t]) mass[v] += a3;
  }
  return mass;
}

std::array<double, 3> triangle_angles(const TriMesh& m, int t) {
  // Euclidean angles of the triangle flattened with its intrinsic side
  // lengths (what the cotan weights and the angle defect are built from)
  const auto& [i, j, k] = m.tri[t];
  double a = edge_length(m, m.pos[j], m.pos[k]);  // opposite i
  double b = edge_length(m, m.pos[i], m.pos[k]);  // opposite j
  double c = edge_length(m, m.pos[i], m.pos[j]);  // opposite k
  auto ang = [&](double opp, double s1, double s2) {
    double num = s1 * s1 + s2 * s2 - opp * opp;
    return std::acos(std::clamp(num / (2.0 * s1 * s2), -1.0, 1.0));
  };
  return {ang(a, b, c), ang(b, a, c), ang(c, a, b)};
}

std::vector<Vec4> vertex_normals_s3(const TriMesh& m) {
  std::vector<Vec4> nrm(m.num_vertices(), Vec4::Zero());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& [i, j, k] = m.tri[t];
    Vec4 b = (m.pos[i] + m.pos[j] + m.pos[k]).normalized();
    Vec4 n = cross4(b, m.pos[j] - m.pos[i], m.pos[k] - m.pos[i]);
    // |n| is twice the chordal area; keep it as the weight
    for (int v : m.tri[t]) nrm[v] += n;
  }
  for (int v = 0; v < m.num_vertices(); ++v) {
    Vec4 n = nrm[v] - nrm[v].dot(m.pos[v]) * m.pos[v];
    double l = n.norm();
    nrm[v] = (l > 0) ? Vec4(n / l) : Vec4::Zero();
  }
  return nrm;
}

CotanData cotan_stiffness(const TriMesh& m) {
  CotanData out;
  out.triplets.reserve(m.num_triangles() * 12);
  std::map<EdgeKey, double> edge_weight;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tr = m.tri[t];
    double l[3];  // l[e] opposite corner e
    for (int e = 0; e < 3; ++e)
      l[e] = edge_length(m, m.pos[tr[(e + 1) % 3]], m.pos[tr[(e + 2) % 3]]);
    double s = 0.5 * (l[0] + l[1] + l[2]);
    double area = std::sqrt(std::max(1e-300, s * (s - l[0]) * (s - l[1]) * (s - l[2])));
    for (int e = 0; e < 3; ++e) {
      int a = tr[(e + 1) % 3], b = tr[(e + 2) % 3];
      double cot = (l[(e + 1) % 3] * l[(e + 1) % 3] + l[(e + 2) % 3] * l[(e + 2) % 3] -
                    l[e] * l[e]) /
                   (4.0 * area);
      double w = 0.5 * cot;
      edge_weight[ekey(a, b)] += w;
      out.triplets.emplace_back(a, b, -w);
      out.triplets.emplace_back(b, a, -w);
      out.triplets.emplace_back(a, a, w);
      out.triplets.emplace_back(b, b, w);
    }
  }
  for (const auto& [k, w] : edge_weight)
    if (w < 0) ++out.negative_edges;
  return out;
}

std::vector<std::vector<int>> vertex_neighbors(const TriMesh& m) {
  std::vector<std::set<int>> nb(m.num_vertices());
  for (const auto& t : m.tri)
    for (int e = 0; e < 3; ++e) {
      nb[t[e]].insert(t[(e + 1) % 3]);
      nb[t[(e + 1) % 3]].insert(t[e]);
    }
  std::vector<std::vector<int>> out(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) out[v].assign(nb[v].begin(), nb[v].end());
  return out;
}

std::vector<std::vector<int>> vertex_triangles(const TriMesh& m) {
  std::vector<std::vector<int>> out(m.num_vertices());
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int v : m.tri[t]) out[v].push_back(t);
  return out;
}

// --- VertexLocator -----------------------------------------------------------

VertexLocator::VertexLocator(const std::vector<Vec4>& pts, double tol)
    : pts_(pts), tol_(tol), cell_(std::max(tol * 16.0, 1e-7)) {
  for (int i = 0; i < int(pts.size()); ++i) grid_[key_of(pts[i])].push_back(i);
}

VertexLocator::Key VertexLocator::key_of(const Vec4& p) const {
  Key k;
  for (int d = 0; d < 4; ++d) k[d] = std::int64_t(std::floor(p[d] / cell_));
  return k;
}

int VertexLocator::find(const Vec4& p) const {
  for (int mask = 0; mask < 16; ++mask) {
    Vec4 q = p;
    for (int d = 0; d < 4; ++d) q[d] += (mask & (1 << d)) ? tol_ : -tol_;
    auto it = grid_.find(key_of(q));
    if (it == grid_.end()) continue;
    for (int i : it->second)
      if ((pts_[i] - p).norm() <= tol_) return i;
  }
  return -1;
}

std::vector<int> VertexLocator::find_all(const Vec4& p) const {
  std::vector<int> out;
  for (int mask = 0; mask < 16; ++mask) {
    Vec4 q = p;
    for (int d = 0; d < 4; ++d) q[d] += (mask & (1 << d)) ? tol_ : -tol_;
    auto it = grid_.find(key_of(q));
    if (it == grid_.end()) continue;
    for (int i : it->second)
      if ((pts_[i] - p).norm() <= tol_ &&
          std::find(out.begin(), out.end(), i) == out.end())
        out.push_back(i);
  }
  return out;
}

double VertexLocator::nearest_distance(const Vec4& p) const {
  double best = std::numeric_limits<double>::infinity();
  Key c = key_of(p);
  for (std::int64_t d0 = -1; d0 <= 1; ++d0)
    for (std::int64_t d1 = -1; d1 <= 1; ++d1)
      for (std::int64_t d2 = -1; d2 <= 1; ++d2)
        for (std::int64_t d3 = -1; d3 <= 1; ++d3) {
          auto it = grid_.find(Key{c[0] + d0, c[1] + d1, c[2] + d2, c[3] + d3});
          if (it == grid_.end()) continue;
          for (int i : it->second) best = std::min(best, (pts_[i] - p).norm());
        }
  return best;
}

std::vector<int> vertex_permutation(const TriMesh& m, const Mat4& iso, double tol) {
  VertexLocator loc(m.pos, tol);
  std::vector<int> perm(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) {
    int img = loc.find(iso * m.pos[v]);
    if (img < 0) throw GeometryError("vertex_permutation: isometry does not permute vertices");
    perm[v] = img;
  }
  return perm;
}

// --- baseline meshes ----------------------------------------------------------

TriMesh make_great_sphere_mesh(int subdivisions) {
  // icosahedron in the x1x2x3 hyperplane
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Eigen::Vector3d> v3 = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
      {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
      {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  TriMesh m;
  for (const auto& p : v3) {
    Eigen::Vector3d u = p.normalized();
    m.pos.push_back(Vec4(u[0], u[1], u[2], 0.0));
  }
  m.tri = f;
  for (int s = 0; s < subdivisions; ++s) m = subdivide(m);
  return m;
}

TriMesh make_clifford_torus_mesh(int na, int nb) {
  TriMesh m;
  const double r = 1.0 / std::sqrt(2.0);
  auto id = [&](int a, int b) { return (a % na) * nb + (b % nb); };
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      double u = 2.0 * M_PI * a / na, v = 2.0 * M_PI * b / nb;
      m.pos.push_back(Vec4(r * std::cos(u), r * std::sin(u), r * std::cos(v), r * std::sin(v)));
    }
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      m.tri.push_back({id(a, b), id(a + 1, b), id(a + 1, b + 1)});
      m.tri.push_back({id(a, b), id(a + 1, b + 1), id(a, b + 1)});
    }
  return m;
}

TriMesh make_flat_disc_mesh(int rings, int wedges) {
  TriMesh m;
  m.metric = Metric::Flat;
  m.pos.push_back(Vec4::Zero());
  auto id = [&](int k, int w) { return 1 + (k - 1) * wedges + (w % wedges); };
  for (int k = 1; k <= rings; ++k) {
    double r = double(k) / rings;
    for (int w = 0; w < wedges; ++w) {
      double t = 2.0 * M_PI * w / wedges;
      m.pos.push_back(Vec4(r * std::cos(t), r * std::sin(t), 0, 0));
    }
  }
  for (int w = 0; w < wedges; ++w) m.tri.push_back({0, id(1, w), id(1, w + 1)});
  for (int k = 1; k < rings; ++k)
    for (int w = 0; w < wedges; ++w) {
      m.tri.push_back({id(k, w), id(k + 1, w), id(k + 1, w + 1)});
      m.tri.push_back({id(k, w), id(k + 1, w + 1), id(k, w + 1)});
    }
  return m;
}

TriMesh make_flat_rectangle_mesh(double a, double b, int nx, int ny) {
  TriMesh m;
  m.metric = Metric::Flat;
  auto id = [&](int i, int j) { return i * (ny + 1) + j; };
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      m.pos.push_back(Vec4(a * i / nx, b * j / ny, 0, 0));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      m.tri.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.tri.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return m;
}

}  // namespace lawson
