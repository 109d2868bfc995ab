// Command-line front end: build surfaces, verify the spectral claims,
// decompose spectra into symmetry blocks, export meshes and matrices.
#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <lawson/verify.hpp>

using namespace lawson;

namespace {

// key=value config file; command-line flags win
std::map<std::string, std::string> read_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream f(path);
  if (!f) throw GeometryError("config: cannot open " + path);
  std::string line;
  while (std::getline(f, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

int thread_cap() {
  const char* env = std::getenv("LAWSON_THREADS");
  return env ? std::max(1, std::atoi(env)) : 1;
}

SurfaceMesh obtain_surface(const std::string& mesh_path, int m, int resolution,
                           double tol) {
  if (!mesh_path.empty()) return load_surface(mesh_path);
  LawsonParams p(m);
  SolveOptions opts;
  opts.tol = tol;
  DiscMesh d = build_disc(p, resolution, opts);
  return assemble_surface(d);
}

int report_exit(const std::vector<SuiteReport>& reps, const std::string& out_path,
                const std::string& mesh_hash) {
  Json j;
  j["reports"] = Json::array();
  bool pass = true, indet = false;
  for (const auto& r : reps) {
    j["reports"].push_back(r.to_json());
    pass = pass && r.pass();
    indet = indet || r.indeterminate();
    for (const auto& c : r.checks) {
      const char* verdict = c.indeterminate ? "INDET" : (c.pass ? "pass" : "FAIL");
      std::cout << "  [" << verdict << "] " << r.suite << ": " << c.name << "\n";
    }
  }
  if (!mesh_hash.empty()) j["mesh_hash"] = mesh_hash;
  j["pass"] = pass;
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << j.dump(2) << "\n";
  }
  std::cout << (pass ? (indet ? "INDETERMINATE" : "PASS") : "FAIL") << "\n";
  if (!pass) return 1;
  if (indet) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical spectral analysis of the Lawson minimal surfaces in S^3"};
  app.require_subcommand(1);
  (void)thread_cap();  // parallelism cap honored by the canonical mode

  std::string config_path;
  app.add_option("--config", config_path, "key=value config file; flags win");

  int m = 3, resolution = 16, modes = 24;
  double tol = 1e-9;
  int max_iters = 200000;
  std::string mesh_path, out_path, seed_name = "bent";
  bool deterministic = false;

  auto add_common = [&](CLI::App* cmd, bool with_build_knobs) {
    cmd->add_flag("--deterministic", deterministic, "force canonical single-thread mode");
    if (with_build_knobs) {
      cmd->add_option("--m", m, "genus + 1 (>= 3)");
      cmd->add_option("--resolution", resolution, "boundary edges per quad side");
      cmd->add_option("--tol", tol, "solver tolerance");
      cmd->add_option("--max-iters", max_iters, "iteration cap for the area descent");
      cmd->add_option("--seed", seed_name, "initial disc: bent | bilinear");
    }
  };

  // --- build ---------------------------------------------------------------
  auto* cmd_build = app.add_subcommand("build", "solve the spanning disc and assemble the surface");
  std::string build_out = "surface.json";
  add_common(cmd_build, true);
  cmd_build->add_option("--out", build_out, "output artifact (.json)");

  // --- verify --------------------------------------------------------------
  auto* cmd_verify = app.add_subcommand("verify", "run a named acceptance suite");
  std::string suite = "theorem";
  int fine_resolution = 0;
  add_common(cmd_verify, true);
  cmd_verify->add_option("--suite", suite,
                         "geometry | baselines | theorem | blocks | lemmas | killing | "
                         "appendices | structure | all");
  cmd_verify->add_option("--mesh", mesh_path, "surface artifact to verify (skips building)");
  cmd_verify->add_option("--fine-resolution", fine_resolution,
                         "second refinement level (default 2x resolution)");
  cmd_verify->add_option("--report", out_path, "write the JSON report here");

  // --- blocks ----------------------------------------------------------------
  auto* cmd_blocks = app.add_subcommand("blocks", "per-block spectra, both modes");
  std::string blocks_mode = "both", blocks_prefix = "blocks";
  add_common(cmd_blocks, true);
  cmd_blocks->add_option("--mesh", mesh_path, "surface artifact");
  cmd_blocks->add_option("--mode", blocks_mode, "projection | fundamental | both");
  cmd_blocks->add_option("--out-prefix", blocks_prefix, "CSV prefix");
  cmd_blocks->add_option("--modes", modes, "eigenpairs per block");

  // --- spectrum ----------------------------------------------------------------
  auto* cmd_spectrum = app.add_subcommand("spectrum", "whole-surface spectrum to CSV");
  std::string spectrum_out = "spectrum.csv";
  add_common(cmd_spectrum, true);
  cmd_spectrum->add_option("--mesh", mesh_path, "surface artifact");
  cmd_spectrum->add_option("--out", spectrum_out, "CSV path");
  cmd_spectrum->add_option("--modes", modes, "number of eigenpairs");

  // --- export ----------------------------------------------------------------
  auto* cmd_export = app.add_subcommand("export", "write OBJ / VTK / matrices");
  std::string export_obj, export_vtk, export_mtx;
  add_common(cmd_export, true);
  cmd_export->add_option("--mesh", mesh_path, "surface artifact");
  cmd_export->add_option("--obj", export_obj, "OBJ output path");
  cmd_export->add_option("--vtk", export_vtk, "VTK output path (with |A|^2, fields)");
  cmd_export->add_option("--mtx", export_mtx, "pencil in Matrix Market format");

  // --- report ----------------------------------------------------------------
  auto* cmd_report = app.add_subcommand("report", "pretty-print a saved JSON report");
  std::string report_in;
  cmd_report->add_option("report_file", report_in, "JSON report")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      auto kv = read_config(config_path);
      auto want = [&](const char* key, auto& slot) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        std::istringstream ss(it->second);
        ss >> slot;
      };
      // flags that were set explicitly on the command line keep their value
      if (!cmd_build->count("--m") && !cmd_verify->count("--m")) want("m", m);
      if (!cmd_build->count("--resolution") && !cmd_verify->count("--resolution"))
        want("resolution", resolution);
      if (!cmd_build->count("--tol") && !cmd_verify->count("--tol")) want("tol", tol);
      want("modes", modes);
    }

    if (cmd_build->parsed()) {
      LawsonParams p(m);
      SolveOptions opts;
      opts.tol = tol;
      opts.max_iters = max_iters;
      DiscSeed seed = seed_name == "bilinear" ? DiscSeed::BilinearPatch : DiscSeed::BentDisc;
      DiscMesh d = build_disc(p, resolution, opts, seed);
      SolveReport last = minimize_area(d, opts);
      SurfaceMesh s = assemble_surface(d);
      Json j = surface_to_json(s);
      j["provenance"] = Json{{"m", m},
                             {"resolution", resolution},
                             {"tol", tol},
                             {"seed", seed_name},
                             {"final_residual", last.residual},
                             {"iterations", last.iterations},
                             {"content_hash", surface_content_hash(s)}};
      std::ofstream f(build_out);
      f << j.dump() << "\n";
      std::cout << "built m=" << m << " genus " << (m - 1) << ": "
                << s.mesh.num_vertices() << " vertices, chi = "
                << euler_characteristic(s.mesh) << ", hash "
                << surface_content_hash(s).substr(0, 12) << " -> " << build_out << "\n";
      return 0;
    }

    if (cmd_verify->parsed()) {
      std::vector<SuiteReport> reps;
      std::string hash;
      if (suite == "geometry") {
        reps.push_back(suite_geometry());
      } else if (suite == "baselines") {
        reps.push_back(suite_baselines());
      } else {
        BuiltSurface coarse = analyze_surface(obtain_surface(mesh_path, m, resolution, tol));
        hash = surface_content_hash(coarse.surf);
        if (suite == "blocks") {
          reps.push_back(suite_blocks(coarse));
        } else if (suite == "lemmas") {
          reps.push_back(suite_lemmas(coarse));
        } else if (suite == "appendices") {
          reps.push_back(suite_appendices(coarse));
        } else {
          int fine_res = fine_resolution > 0 ? fine_resolution : 2 * coarse.surf.resolution;
          BuiltSurface fine = build_and_analyze(coarse.surf.m, fine_res, tol, 24);
          if (suite == "theorem")
            reps.push_back(suite_theorem(coarse, fine));
          else if (suite == "killing")
            reps.push_back(suite_killing(coarse, fine));
          else if (suite == "structure")
            reps.push_back(suite_structure(coarse, fine));
          else if (suite == "all") {
            reps.push_back(suite_theorem(coarse, fine));
            reps.push_back(suite_blocks(coarse));
            reps.push_back(suite_lemmas(coarse));
            reps.push_back(suite_killing(coarse, fine));
            reps.push_back(suite_appendices(coarse));
            reps.push_back(suite_structure(coarse, fine));
          } else {
            std::cerr << "unknown suite " << suite << "\n";
            return 1;
          }
        }
      }
      return report_exit(reps, out_path, hash);
    }

    if (cmd_blocks->parsed()) {
      BuiltSurface b = analyze_surface(obtain_surface(mesh_path, m, resolution, tol));
      auto table = block_table(b.surf, b.op, b.kj_scale, modes);
      double worst = 0;
      for (const auto& row : table) {
        std::string base = blocks_prefix + "_" + std::to_string(int(row.id));
        auto dump = [&](const Eigen::VectorXd& eigs, const std::string& path) {
          std::ofstream f(path);
          f << "index,eigenvalue\n" << std::setprecision(17);
          for (int i = 0; i < eigs.size(); ++i) f << i << "," << eigs[i] << "\n";
        };
        if (blocks_mode != "fundamental") dump(row.eigs_projection, base + "_projection.csv");
        if (blocks_mode != "projection") dump(row.eigs_fundamental, base + "_fundamental.csv");
        worst = std::max(worst, row.eig_disagreement);
        std::cout << block_name(row.id) << ": index " << row.index << " nullity "
                  << row.nullity << " (modes agree to " << row.eig_disagreement << ")\n";
      }
      if (blocks_mode == "both" && worst > 1e-7) {
        std::cerr << "projection and fundamental spectra disagree beyond tolerance\n";
        return 2;
      }
      return 0;
    }

    if (cmd_spectrum->parsed()) {
      BuiltSurface b = analyze_surface(obtain_surface(mesh_path, m, resolution, tol), modes);
      write_spectrum_csv(b.spec, spectrum_out);
      std::cout << "index " << b.count.index << " nullity " << b.count.nullity
                << " certified " << (b.count.certified ? "yes" : "no") << " -> "
                << spectrum_out << "\n";
      return b.count.certified ? 0 : 2;
    }

    if (cmd_export->parsed()) {
      SurfaceMesh s = obtain_surface(mesh_path, m, resolution, tol);
      if (!export_obj.empty()) write_obj(s.mesh, export_obj);
      if (!export_vtk.empty()) {
        std::map<std::string, Eigen::VectorXd> fields;
        Eigen::VectorXd a2(s.mesh.num_vertices()), orbit(s.mesh.num_vertices());
        for (int v = 0; v < s.mesh.num_vertices(); ++v) {
          a2[v] = s.a2[v];
          orbit[v] = s.orbit.empty() ? 0.0 : s.orbit[v];
        }
        fields["a2"] = a2;
        fields["orbit"] = orbit;
        write_vtk(s.mesh, export_vtk, fields);
      }
      if (!export_mtx.empty()) {
        Eigen::VectorXd pot(s.mesh.num_vertices());
        for (int v = 0; v < s.mesh.num_vertices(); ++v) pot[v] = s.a2[v] + 2.0;
        write_matrix_market(assemble_operator(s.mesh, pot).pencil, export_mtx);
      }
      return 0;
    }

    if (cmd_report->parsed()) {
      std::ifstream f(report_in);
      if (!f) throw GeometryError("report: cannot open " + report_in);
      Json j;
      f >> j;
      for (const auto& rep : j.at("reports")) {
        std::cout << rep.at("suite").get<std::string>() << " ("
                  << rep.at("seconds").get<double>() << " s)\n";
        for (const auto& c : rep.at("checks"))
          std::cout << "  [" << (c.at("pass").get<bool>() ? "pass" : "FAIL") << "] "
                    << c.at("name").get<std::string>() << "\n";
      }
      std::cout << (j.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
      return j.at("pass").get<bool>() ? 0 : 1;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
