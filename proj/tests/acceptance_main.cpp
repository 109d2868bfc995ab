// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Surfaces are built once per (m, level) and shared.
#include <chrono>
#include <cstdio>
#include <lawson/verify.hpp>

using namespace lawson;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  bool indeterminate = false;
  double seconds = 0.0;
  std::vector<std::string> failures;

  void fold(const SuiteReport& rep) {
    seconds += rep.seconds;
    for (const auto& c : rep.checks) {
      if (c.indeterminate) {
        indeterminate = true;
        failures.push_back("[indeterminate] " + c.name);
      } else if (!c.pass) {
        pass = false;
        failures.push_back(c.name + " (value " + std::to_string(c.value) +
                           " vs " + std::to_string(c.threshold) + ")");
      }
    }
  }
};

int finish(std::vector<Criterion>& criteria) {
  bool all_pass = true, any_indeterminate = false;
  for (const auto& c : criteria) {
    const char* verdict = c.pass ? (c.indeterminate ? "INDET" : "PASS") : "FAIL";
    std::printf("[%s] %-58s (%.1fs)\n", verdict, c.name.c_str(), c.seconds);
    for (const auto& f : c.failures) std::printf("        - %s\n", f.c_str());
    all_pass = all_pass && c.pass;
    any_indeterminate = any_indeterminate || c.indeterminate;
  }
  if (!all_pass) return 1;
  if (any_indeterminate) return 2;
  return 0;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria;
  const int coarse_res = 12, fine_res = 24;

  // shared builds
  std::map<std::pair<int, int>, BuiltSurface> built;
  auto get = [&](int m, int res) -> BuiltSurface& {
    auto key = std::make_pair(m, res);
    auto it = built.find(key);
    if (it == built.end()) {
      auto t0 = std::chrono::steady_clock::now();
      it = built.emplace(key, build_and_analyze(m, res, 1e-9, 24)).first;
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::printf("  built m=%d resolution=%d: %d vertices, %.1fs\n", m, res,
                  it->second.surf.mesh.num_vertices(), dt);
      std::fflush(stdout);
    }
    return it->second;
  };

  {  // 1. geometry identity suite
    Criterion c{"criterion 1: geometry identities (16x16 grid, m=3..7)"};
    SuiteReport rep = suite_geometry({3, 4, 5, 6, 7}, 16, 1e-10);
    c.fold(rep);
    if (rep.seconds > 10.0) {
      c.pass = false;
      c.failures.push_back("runtime above 10 s");
    }
    criteria.push_back(c);
  }

  {  // 2. baseline spectra
    Criterion c{"criterion 2: baseline spectra (sphere, Clifford torus)"};
    SuiteReport rep = suite_baselines(5, 100);
    c.fold(rep);
    if (rep.seconds > 120.0) {
      c.pass = false;
      c.failures.push_back("runtime above 2 min");
    }
    criteria.push_back(c);
  }

  // 3. main theorem at desk scale
  for (int m : {3, 4, 5}) {
    Criterion c{"criterion 3: index/nullity m=" + std::to_string(m) +
                " (two refinement levels)"};
    auto t0 = std::chrono::steady_clock::now();
    const BuiltSurface& coarse = get(m, coarse_res);
    const BuiltSurface& fine = get(m, fine_res);
    SuiteReport rep = suite_theorem(coarse, fine);
    c.fold(rep);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.seconds > 900.0) {
      c.pass = false;
      c.failures.push_back("runtime above 15 min");
    }
    criteria.push_back(c);
  }

  // 4. block table
  for (int m : {3, 4, 5}) {
    Criterion c{"criterion 4: block table m=" + std::to_string(m)};
    SuiteReport rep = suite_blocks(get(m, coarse_res), 12);
    c.fold(rep);
    criteria.push_back(c);
  }

  // 5. intermediate lemma values
  for (int m : {3, 4, 5}) {
    Criterion c{"criterion 5: mixed-condition lemma values m=" + std::to_string(m)};
    SuiteReport rep = suite_lemmas(get(m, coarse_res));
    c.fold(rep);
    criteria.push_back(c);
  }

  // 6. Killing-Jacobi suite
  for (int m : {3, 4, 5}) {
    Criterion c{"criterion 6: Killing-Jacobi suite m=" + std::to_string(m)};
    SuiteReport rep = suite_killing(get(m, coarse_res), get(m, fine_res));
    c.fold(rep);
    criteria.push_back(c);
  }

  {  // 7. appendix cross-checks (desk scale at m = 3)
    Criterion c{"criterion 7: subdivision bounds and nodal counts"};
    SuiteReport rep = suite_appendices(get(3, coarse_res), 5);
    c.fold(rep);
    criteria.push_back(c);
  }

  // 8. structural checks
  for (int m : {3, 4, 5}) {
    Criterion c{"criterion 8: structure m=" + std::to_string(m)};
    SuiteReport rep = suite_structure(get(m, coarse_res), get(m, fine_res));
    c.fold(rep);
    criteria.push_back(c);
  }

  return finish(criteria);
}
