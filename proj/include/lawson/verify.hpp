#pragma once

#include <string>
#include <vector>

#include "lawson/blocks.hpp"
#include "lawson/counting.hpp"
#include "lawson/io.hpp"

namespace lawson {

struct CheckLine {
  std::string name;
  bool pass = false;
  bool indeterminate = false;
  double value = 0.0;      // measured quantity (deviation, eigenvalue, ...)
  double threshold = 0.0;  // what it was compared against
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckLine> checks;
  double seconds = 0.0;

  bool pass() const;
  bool indeterminate() const;
  void add(const std::string& name, bool ok, double value = 0.0, double threshold = 0.0,
           const std::string& detail = "");
  void add_leq(const std::string& name, double value, double threshold,
               const std::string& detail = "");
  Json to_json() const;
};

// The builder output reused by all surface-level suites: the surface, its
// operator, the Killing-induced fields with their residual scale, and the
// certified whole-surface counts.
struct BuiltSurface {
  SurfaceMesh surf;
  DiscreteOperator op;
  std::array<JacobiSample, 6> basis;
  double kj_scale = 0.0;  // max operator residual of the six fields
  Spectrum spec;
  CountResult count;
  SolveReport plateau;
};

BuiltSurface analyze_surface(SurfaceMesh surf, int modes = 24);
BuiltSurface build_and_analyze(int m, int resolution, double tol = 1e-9, int modes = 24);

// the named verification suites
SuiteReport suite_geometry(const std::vector<int>& ms = {3, 4, 5, 6, 7}, int grid = 16,
                           double tol = 1e-10);
SuiteReport suite_baselines(int sphere_subdivisions = 5, int torus_n = 100);
SuiteReport suite_theorem(const BuiltSurface& coarse, const BuiltSurface& fine);
SuiteReport suite_blocks(const BuiltSurface& b, int modes = 12);
SuiteReport suite_lemmas(const BuiltSurface& b);
SuiteReport suite_killing(const BuiltSurface& coarse, const BuiltSurface& fine);
SuiteReport suite_appendices(const BuiltSurface& b, int randomized_cuts = 5,
                             std::uint64_t seed = 20240901);
SuiteReport suite_structure(const BuiltSurface& coarse, const BuiltSurface& fine);

}  // namespace lawson
