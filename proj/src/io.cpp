#include "lawson/io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lawson {

// --- SHA-1 ---------------------------------------------------------------------

std::string sha1_hex(const std::string& bytes) {
  auto rol = [](std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); };
  std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

  std::string msg = bytes;
  std::uint64_t bitlen = std::uint64_t(msg.size()) * 8;
  msg.push_back(char(0x80));
  while (msg.size() % 64 != 56) msg.push_back(0);
  for (int i = 7; i >= 0; --i) msg.push_back(char((bitlen >> (8 * i)) & 0xFF));

  for (size_t chunk = 0; chunk < msg.size(); chunk += 64) {
    std::uint32_t w[80];
    for (int i = 0; i < 16; ++i)
      w[i] = (std::uint32_t(std::uint8_t(msg[chunk + 4 * i])) << 24) |
             (std::uint32_t(std::uint8_t(msg[chunk + 4 * i + 1])) << 16) |
             (std::uint32_t(std::uint8_t(msg[chunk + 4 * i + 2])) << 8) |
             std::uint32_t(std::uint8_t(msg[chunk + 4 * i + 3]));
    for (int i = 16; i < 80; ++i)
      w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) {
        f = (b & c) | ((~b) & d);
        k = 0x5A827999u;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      std::uint32_t tmp = rol(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = tmp;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }
  std::ostringstream out;
  for (std::uint32_t x : h) out << std::hex << std::setw(8) << std::setfill('0') << x;
  return out.str();
}

// --- JSON helpers ----------------------------------------------------------------

namespace {

Json vec_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const Json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

Json mat4_to_json(const Mat4& m) {
  Json a = Json::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a.push_back(m(r, c));
  return a;
}

Mat4 mat4_from_json(const Json& j) {
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = j[4 * r + c].get<double>();
  return m;
}

}  // namespace

Json to_json(const Vec4& v) { return Json::array({v[0], v[1], v[2], v[3]}); }

Json to_json(const Subspace& s) {
  Json b = Json::array();
  for (int c = 0; c < s.dim(); ++c) b.push_back(to_json(Vec4(s.basis().col(c))));
  return Json{{"dim", s.dim()}, {"basis", b}};
}

Json to_json(const Isometry4& iso) {
  const char* kind = iso.kind() == Isometry4::Kind::Reflection ? "reflection"
                     : iso.kind() == Isometry4::Kind::Rotation ? "rotation"
                                                               : "composite";
  return Json{{"kind", kind}, {"matrix", mat4_to_json(iso.matrix())}};
}

Json to_json(const KillingMatrix& k) { return Json{{"matrix", mat4_to_json(k.matrix())}}; }

Json to_json(const GreatCircle& c) {
  return Json{{"a", to_json(c.a())}, {"b", to_json(c.b())}};
}

Json to_json(const Tetra& t) {
  Json verts = Json::array();
  for (const auto& v : t.verts) verts.push_back(to_json(v));
  Json normals = Json::array();
  for (const auto& n : t.inward) normals.push_back(to_json(n));
  return Json{{"i", t.index.i},     {"itag", t.index.itag}, {"j", t.index.j},
              {"jtag", t.index.jtag}, {"vertices", verts},  {"inward_normals", normals}};
}

Json to_json(const Quad& q) {
  Json verts = Json::array();
  for (const auto& v : q.verts) verts.push_back(to_json(v));
  return Json{{"i", q.i}, {"j", q.j}, {"vertices", verts}};
}

// --- native artifact --------------------------------------------------------------

Json surface_to_json(const SurfaceMesh& s) {
  Json j;
  j["format"] = "lawson-surface-v1";
  j["m"] = s.m;
  j["resolution"] = s.resolution;
  Json pos = Json::array();
  for (const Vec4& p : s.mesh.pos) pos.push_back(to_json(p));
  j["positions"] = pos;
  Json tris = Json::array();
  for (const auto& t : s.mesh.tri) tris.push_back(Json::array({t[0], t[1], t[2]}));
  j["triangles"] = tris;
  Json nrm = Json::array();
  for (const Vec4& n : s.normal) nrm.push_back(to_json(n));
  j["normals"] = nrm;
  j["a2"] = s.a2;
  j["det_shape"] = s.det_shape;
  j["gauss_defect"] = s.gauss_defect;
  j["tri_copy"] = s.tri_copy;
  Json copies = Json::array();
  for (const auto& c : s.copies)
    copies.push_back(Json{{"i", c.i}, {"j", c.j}, {"map", mat4_to_json(c.map)}});
  j["copies"] = copies;
  j["orbit"] = s.orbit;
  j["weld_mismatch"] = s.weld_mismatch;
  return j;
}

SurfaceMesh surface_from_json(const Json& j) {
  if (j.value("format", "") != std::string("lawson-surface-v1"))
    throw GeometryError("surface_from_json: unknown artifact format");
  DiscMesh dummy;  // rebuild everything positional from the stored data
  SurfaceMesh s;
  s.m = j.at("m").get<int>();
  s.resolution = j.at("resolution").get<int>();
  s.mesh.metric = Metric::Sphere;
  for (const auto& p : j.at("positions"))
    s.mesh.pos.push_back(Vec4(p[0].get<double>(), p[1].get<double>(), p[2].get<double>(),
                              p[3].get<double>()));
  for (const auto& t : j.at("triangles"))
    s.mesh.tri.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
  for (const auto& n : j.at("normals"))
    s.normal.push_back(Vec4(n[0].get<double>(), n[1].get<double>(), n[2].get<double>(),
                            n[3].get<double>()));
  s.a2 = j.at("a2").get<std::vector<double>>();
  s.det_shape = j.at("det_shape").get<std::vector<double>>();
  s.gauss_defect = j.at("gauss_defect").get<std::vector<double>>();
  s.tri_copy = j.at("tri_copy").get<std::vector<int>>();
  for (const auto& c : j.at("copies"))
    s.copies.push_back({c.at("i").get<std::int64_t>(), c.at("j").get<std::int64_t>(),
                        mat4_from_json(c.at("map"))});
  s.orbit = j.at("orbit").get<std::vector<int>>();
  s.weld_mismatch = j.value("weld_mismatch", 0.0);
  // rebuild the group and the q-point tables
  LawsonParams p(s.m);
  s.group = SymGroup::lawson(p);
  for (const GroupElement& e : s.group.elements)
    s.group_perm.push_back(vertex_permutation(s.mesh, e.matrix, 1e-8));
  VertexLocator loc(s.mesh.pos, 1e-9);
  for (std::int64_t i = 0; i < 2 * p.m; ++i) {
    int v = loc.find(q_lower(p, 2 * i));
    if (v < 0) throw GeometryError("surface_from_json: missing q-point");
    s.vertex_on_c[2 * i] = v;
  }
  for (std::int64_t jj = 0; jj < 4; ++jj) {
    int v = loc.find(q_upper(p, 2 * jj));
    if (v < 0) throw GeometryError("surface_from_json: missing q-point");
    s.vertex_on_cperp[2 * jj] = v;
  }
  s.copy_of_vertex.assign(s.mesh.num_vertices(), -1);
  (void)dummy;
  return s;
}

void save_surface(const SurfaceMesh& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw GeometryError("save_surface: cannot open " + path);
  f << surface_to_json(s).dump();
}

SurfaceMesh load_surface(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GeometryError("load_surface: cannot open " + path);
  Json j;
  f >> j;
  return surface_from_json(j);
}

std::string surface_content_hash(const SurfaceMesh& s) {
  std::ostringstream bytes;
  bytes << s.m << ":" << s.resolution << ":";
  auto put = [&](double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, 8);
    bytes << std::hex << u << ",";
  };
  for (const Vec4& p : s.mesh.pos)
    for (int d = 0; d < 4; ++d) put(p[d]);
  for (const auto& t : s.mesh.tri) bytes << t[0] << "." << t[1] << "." << t[2] << ";";
  return sha1_hex(bytes.str());
}

// --- exports -----------------------------------------------------------------------

void write_obj(const TriMesh& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw GeometryError("write_obj: cannot open " + path);
  f << std::setprecision(17);
  for (const Vec4& p : m.pos)
    f << "v " << p[0] << " " << p[1] << " " << p[2] << " " << p[3] << "\n";
  for (const auto& t : m.tri)
    f << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

TriMesh read_obj(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GeometryError("read_obj: cannot open " + path);
  TriMesh m;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec4 p = Vec4::Zero();
      ss >> p[0] >> p[1] >> p[2];
      if (!(ss >> p[3])) p[3] = 0.0;
      m.pos.push_back(p);
    } else if (tag == "f") {
      std::array<int, 3> t;
      for (int k = 0; k < 3; ++k) {
        std::string tok;
        ss >> tok;
        t[k] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
      }
      m.tri.push_back(t);
    }
  }
  return m;
}

void write_vtk(const TriMesh& m, const std::string& path,
               const std::map<std::string, Eigen::VectorXd>& point_data) {
  std::ofstream f(path);
  if (!f) throw GeometryError("write_vtk: cannot open " + path);
  f << std::setprecision(12);
  f << "# vtk DataFile Version 3.0\nlawson surface\nASCII\nDATASET POLYDATA\n";
  f << "POINTS " << m.num_vertices() << " double\n";
  for (const Vec4& p : m.pos) {
    // stereographic projection from -p^{pi/2} = (0,0,0,-1)
    double w = 1.0 + p[3];
    if (std::abs(w) < 1e-9) w = 1e-9;
    f << p[0] / w << " " << p[1] / w << " " << p[2] / w << "\n";
  }
  f << "POLYGONS " << m.num_triangles() << " " << 4 * m.num_triangles() << "\n";
  for (const auto& t : m.tri) f << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  f << "POINT_DATA " << m.num_vertices() << "\n";
  f << "FIELD coords4 1\ncoords4 4 " << m.num_vertices() << " double\n";
  for (const Vec4& p : m.pos) f << p[0] << " " << p[1] << " " << p[2] << " " << p[3] << "\n";
  for (const auto& [name, values] : point_data) {
    f << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < m.num_vertices(); ++v)
      f << (v < values.size() ? values[v] : 0.0) << "\n";
  }
}

void write_matrix_market(const SparseMat& a, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw GeometryError("write_matrix_market: cannot open " + path);
  f << std::setprecision(17);
  f << "%%MatrixMarket matrix coordinate real symmetric\n";
  std::vector<std::array<double, 3>> entries;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMat::InnerIterator it(a, k); it; ++it)
      if (it.row() >= it.col())
        entries.push_back({double(it.row() + 1), double(it.col() + 1), it.value()});
  f << a.rows() << " " << a.cols() << " " << entries.size() << "\n";
  for (const auto& e : entries)
    f << int(e[0]) << " " << int(e[1]) << " " << e[2] << "\n";
}

void write_spectrum_csv(const Spectrum& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw GeometryError("write_spectrum_csv: cannot open " + path);
  f << std::setprecision(17);
  f << "index,eigenvalue,residual\n";
  for (int i = 0; i < s.eigenvalues.size(); ++i)
    f << i << "," << s.eigenvalues[i] << "," << s.residuals[i] << "\n";
}

}  // namespace lawson
