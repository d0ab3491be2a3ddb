// shrinker_cli: sweepout slices, width estimates, catenoid margins and the shrinker solver.
//
// Exit codes: 0 ok, 2 config error, 3 generation error, 4 genus changed, 5 no convergence.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "shrinker/config.hpp"
#include "shrinker/mesh_io.hpp"
#include "shrinker/minmax.hpp"
#include "shrinker/primitives.hpp"
#include "shrinker/symmetry.hpp"

namespace fs = std::filesystem;
using namespace shrinker;

namespace {

constexpr int kConfigError = 2;
constexpr int kGenerationError = 3;
constexpr int kGenusChanged = 4;
constexpr int kNoConvergence = 5;

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Manifest: command, config hash and the canonical config, then one line per artifact.
class Manifest {
 public:
  Manifest(const RunConfig& cfg, const std::string& command) : cfg_(cfg) {
    text_ << "command=" << command << "\nconfig_hash=" << hex(config_hash(cfg)) << "\n" << canonical_text(cfg);
  }
  void artifact(const std::string& line) { text_ << "artifact=" << line << "\n"; }
  void write() const {
    std::ofstream out(fs::path(cfg_.out) / "manifest.txt");
    out << text_.str();
  }

 private:
  const RunConfig& cfg_;
  std::ostringstream text_;
};

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  std::ofstream f(fs::path(cfg.out) / name);
  if (!f) throw Error(ErrorCode::InvalidParams, "cannot write " + (fs::path(cfg.out) / name).string());
  return f;
}

SweepoutSlice make_slice(const RunConfig& cfg) {
  FamilyConfig fc = cfg.family_cfg;
  fc.refinement = cfg.refine;
  if (cfg.family == "sphere") return sphere_family(make_scheme("sphere"), cfg.t, cfg.refine);
  const PlatonicScheme scheme = make_scheme(cfg.scheme);
  if (cfg.family == "doubled") return doubled_family(scheme, cfg.t, cfg.s, fc);
  const double eps = cfg.eps.front();
  if (cfg.family == "catenoid") return catenoid_family(scheme, eps, cfg.delta_ratio * eps, cfg.t, fc);
  return catenoid_family_with_parameter(scheme, cfg.s, cfg.t, eps, fc);
}

int cmd_generate(const RunConfig& cfg) {
  const SweepoutSlice slice = make_slice(cfg);
  Manifest manifest(cfg, "generate");
  std::string params;
  for (double p : slice.params) params += (params.empty() ? "" : ",") + num(p);
  int genus = 0;
  std::string file = "-";
  if (!slice.mesh.empty()) {
    genus = validate(slice.mesh).genus;
    file = "slice.obj";
    write_mesh(slice.mesh, fs::path(cfg.out) / file);
  }
  manifest.artifact(file + " params=" + params + " F=" + num(slice.gaussian_area) + " genus=" + std::to_string(genus) +
                    " degenerate=" + (slice.degenerate ? "1" : "0") + " triangles=" +
                    std::to_string(slice.mesh.triangle_count()));
  manifest.write();
  std::cout << "slice params=" << params << " F=" << short_num(slice.gaussian_area) << " genus=" << genus
            << (slice.degenerate ? " degenerate" : "") << " -> " << (fs::path(cfg.out) / file).string() << "\n";
  return 0;
}

int cmd_width(const RunConfig& cfg) {
  Manifest manifest(cfg, "width");
  const double target = sphere_gaussian_area(kShrinkerSphereRadius);
  const WidthEstimate w1 = sphere_width(cfg.grid, cfg.refine);
  {
    auto f = open_out(cfg, "sphere_width.csv");
    write_width_csv(f, w1);
  }
  manifest.artifact("sphere_width.csv grid=" + std::to_string(w1.grid_t) + " refinement=" + std::to_string(w1.refinement) +
                    " max_F=" + num(w1.max_F));

  std::ostringstream summary;
  summary << "omega1 = " << num(w1.max_F) << " at t=" << num(w1.max_slice_params[0])
          << " (4/e = " << num(target) << ", relative error " << short_num(w1.max_F / target - 1.0) << ")\n";
  if (w1.low_resolution) summary << "omega1: low-resolution grid\n";

  if (cfg.family != "sphere") {
    FamilyConfig fc = cfg.family_cfg;
    fc.refinement = cfg.refine;
    const WidthEstimate w2 = doubled_width(make_scheme(cfg.scheme), cfg.grid, fc);
    {
      auto f = open_out(cfg, "width.csv");
      write_width_csv(f, w2);
    }
    manifest.artifact("width.csv scheme=" + cfg.scheme + " grid=" + std::to_string(w2.grid_t) + "x" +
                      std::to_string(w2.grid_s) + " refinement=" + std::to_string(w2.refinement) + " max_F=" + num(w2.max_F));
    summary << "omega2 = " << num(w2.max_F) << " at (t, s)=(" << num(w2.max_slice_params[0]) << ", "
            << num(w2.max_slice_params[1]) << ")\n";
    if (w2.low_resolution) summary << "omega2: low-resolution grid\n";
    const WidthInequalityReport rep = check_width_inequalities(w1, w2);
    const char* names[] = {"omega1 <= omega2", "omega1 < omega2", "omega2 < 2 omega1"};
    for (std::size_t i = 0; i < rep.checks.size(); ++i)
      summary << names[i] << ": " << (rep.checks[i].pass ? "PASS" : "FAIL") << " margin=" << short_num(rep.checks[i].margin)
              << "\n";
    if (rep.equal_widths) summary << "omega2 == omega1 within tolerance\n";
  }
  {
    auto f = open_out(cfg, "width_summary.txt");
    f << summary.str();
  }
  manifest.artifact("width_summary.txt");
  manifest.write();
  std::cout << summary.str();
  return 0;
}

void write_solve_artifacts(const RunConfig& cfg, const SolveResult& res, Manifest& manifest, const std::string& tag) {
  const std::string mesh_file = "shrinker" + tag + ".obj";
  write_mesh(res.mesh, fs::path(cfg.out) / mesh_file);
  {
    auto f = open_out(cfg, "report" + tag + ".txt");
    write_report(f, res.report);
  }
  {
    auto f = open_out(cfg, "iterations" + tag + ".csv");
    f << "iteration,residual_l2,residual_linf,lambda,F,symmetry_error,smoothed\n";
    for (const auto& r : res.log)
      f << r.iteration << "," << num(r.residual_l2) << "," << num(r.residual_linf) << "," << num(r.lambda) << ","
        << num(r.F) << "," << num(r.symmetry_error) << "," << (r.smoothed ? 1 : 0) << "\n";
  }
  manifest.artifact(mesh_file + " status=" + res.report.status + " F=" + num(res.report.F_value) +
                    " genus=" + std::to_string(res.report.genus) + " triangles=" + std::to_string(res.report.triangles));
  manifest.artifact("report" + tag + ".txt");
  manifest.artifact("iterations" + tag + ".csv");
}

int cmd_solve(const RunConfig& cfg) {
  const PlatonicScheme scheme = make_scheme(cfg.scheme);
  SaddleConfig sc;
  sc.mesh_refinement = cfg.refine;
  const TriMesh init = saddle_init(scheme, sc);
  SolverConfig solver = cfg.solver;
  solver.residual_tol_linf = cfg.tol;
  Manifest manifest(cfg, "solve");
  try {
    const SolveResult res = solve_shrinker(init, scheme.group, solver);
    write_solve_artifacts(cfg, res, manifest, "");
    manifest.write();
    write_report(std::cout, res.report);
    return 0;
  } catch (const SolverFailure& e) {
    write_solve_artifacts(cfg, e.partial(), manifest, "_partial");
    manifest.write();
    write_report(std::cout, e.partial().report);
    std::cerr << "solve failed: " << e.what() << "\n";
    return e.code() == ErrorCode::GenusChanged ? kGenusChanged : kNoConvergence;
  }
}

int cmd_catenoid_check(const RunConfig& cfg) {
  FamilyConfig fc = cfg.family_cfg;
  fc.refinement = cfg.refine;
  const CatenoidCheck chk = catenoid_check(make_scheme(cfg.scheme), cfg.eps, cfg.delta_ratio, cfg.grid, fc);
  Manifest manifest(cfg, "catenoid-check");
  std::ostringstream summary;
  {
    auto f = open_out(cfg, "catenoid.csv");
    f << "eps,delta,max_F,argmax_t,margin,degenerate\n";
    for (const auto& r : chk.rows) {
      f << num(r.eps) << "," << num(r.delta) << "," << num(r.max_F) << "," << num(r.argmax_t) << "," << num(r.margin) << ","
        << (r.degenerate ? 1 : 0) << "\n";
      summary << "eps=" << short_num(r.eps) << " delta=" << short_num(r.delta);
      if (r.degenerate)
        summary << " margin=0 degenerate\n";
      else
        summary << " max_F=" << short_num(r.max_F) << " at t=" << short_num(r.argmax_t) << " margin=" << short_num(r.margin)
                << (r.margin > 0.0 ? " PASS" : " FAIL") << "\n";
    }
  }
  summary << "tau_hat=" << short_num(chk.tau_hat) << " fit_rel_rms=" << short_num(chk.fit_rel_rms) << "\n";
  for (double q : chk.ratios) summary << "margin ratio=" << short_num(q) << "\n";
  manifest.artifact("catenoid.csv tau_hat=" + num(chk.tau_hat));
  manifest.write();
  std::cout << summary.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genus-g self-shrinker constructions: sweepouts, widths and a symmetric solver"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> scheme, family, out, config_file;
  std::optional<double> t, s, tol;
  std::optional<int> grid, refine;
  std::optional<std::uint64_t> seed;
  app.add_option("--scheme", scheme, "t12-z3, o24-z4, o24-z3, i60-z5, i60-z3 or sphere");
  app.add_option("--family", family, "sphere, doubled, catenoid or catenoid-param");
  app.add_option("--t", t, "first sweepout parameter");
  app.add_option("--s", s, "second sweepout parameter");
  app.add_option("--grid", grid, "grid resolution per axis");
  app.add_option("--refine", refine, "mesh refinement level");
  app.add_option("--tol", tol, "solver residual tolerance (L-infinity)");
  app.add_option("--out", out, "output directory");
  app.add_option("--config", config_file, "key = value config file; flags override it");
  app.add_option("--seed", seed, "random seed");
  std::vector<double> eps;
  app.add_option("--eps", eps, "catenoid offsets, comma separated")->delimiter(',');

  auto* gen = app.add_subcommand("generate", "write one sweepout slice and a manifest");
  auto* width = app.add_subcommand("width", "grid estimates of the one- and two-parameter widths");
  auto* solve = app.add_subcommand("solve", "solve for a symmetric self-shrinker from the saddle initialisation");
  auto* cat = app.add_subcommand("catenoid-check", "margins of the catenoid families against two shrinking spheres");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  RunConfig cfg;
  try {
    if (config_file) {
      std::ifstream in(*config_file);
      if (!in) throw Error(ErrorCode::InvalidParams, "cannot read config file " + *config_file);
      apply_config(cfg, parse_key_values(in));
    }
    if (scheme) cfg.scheme = *scheme;
    if (family) cfg.family = *family;
    if (t) cfg.t = *t;
    if (s) cfg.s = *s;
    if (grid) cfg.grid = *grid;
    if (refine) cfg.refine = *refine;
    if (tol) cfg.tol = *tol;
    if (out) cfg.out = *out;
    if (seed) cfg.seed = *seed;
    if (!eps.empty()) cfg.eps = eps;
    // solve --family is meaningless; catenoid-check always uses the catenoid family.
    if (*cat) cfg.family = "catenoid";
    check_config(cfg);
    fs::create_directories(cfg.out);
    std::ofstream probe(fs::path(cfg.out) / "manifest.txt");
    if (!probe) throw Error(ErrorCode::InvalidParams, "output directory " + cfg.out + " is not writable");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (*gen) return cmd_generate(cfg);
    if (*width) return cmd_width(cfg);
    if (*solve) return cmd_solve(cfg);
    return cmd_catenoid_check(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGenerationError;
  }
}
