#pragma once

#include <string>

#include "lawson/blocks.hpp"
#include "lawson/jacobi.hpp"
#include "lawson/surface.hpp"

#include <json.hpp>

namespace lawson {

using Json = nlohmann::json;

// SHA-1 in the style of content-addressed blobs; used for report provenance.
std::string sha1_hex(const std::string& bytes);

// --- native artifact (JSON) ---------------------------------------------------

// Everything needed to re-run verification without re-solving: positions,
// triangles, curvature fields, provenance and knobs.
Json surface_to_json(const SurfaceMesh& s);
SurfaceMesh surface_from_json(const Json& j);
void save_surface(const SurfaceMesh& s, const std::string& path);
SurfaceMesh load_surface(const std::string& path);
std::string surface_content_hash(const SurfaceMesh& s);

// --- debug dumps ---------------------------------------------------------------

Json to_json(const Vec4& v);
Json to_json(const Subspace& s);
Json to_json(const Isometry4& iso);
Json to_json(const KillingMatrix& k);
Json to_json(const GreatCircle& c);
Json to_json(const Tetra& t);
Json to_json(const Quad& q);

// --- exports --------------------------------------------------------------------

// OBJ with four coordinates per vertex line ("v x1 x2 x3 x4")
void write_obj(const TriMesh& m, const std::string& path);
TriMesh read_obj(const std::string& path);

// Legacy VTK: points are the stereographic image from -p^{pi/2} (a point
// never on the surface); the raw 4D coordinates ride along as field data,
// per-vertex scalars as point data.
void write_vtk(const TriMesh& m, const std::string& path,
               const std::map<std::string, Eigen::VectorXd>& point_data = {});

// symmetric coordinate Matrix Market
void write_matrix_market(const SparseMat& a, const std::string& path);
// spectrum rows: index, eigenvalue, residual
void write_spectrum_csv(const Spectrum& s, const std::string& path);

}  // namespace lawson
