#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "shrinker/error.hpp"
#include "shrinker/gaussian.hpp"
#include "shrinker/sweepout.hpp"

namespace shrinker {

struct WidthSample {
  double t = 0.0, s = 0.0;
  double F = 0.0;
  int genus = 0;
  bool degenerate = false;
};

/// Maximum of F over an explicit grid of slices: an upper bound for the width of the family's class.
struct WidthEstimate {
  FamilyTag family = FamilyTag::Sphere;
  std::string scheme;
  int grid_t = 0, grid_s = 0;
  int refinement = 0;
  std::vector<double> max_slice_params;
  double max_F = 0.0;
  std::vector<WidthSample> samples;
  bool low_resolution = false;
};

using SliceGenerator = std::function<SweepoutSlice(double t, double s)>;

/// Evaluates `generate` on the grid t_i x s_j (s ignored when grid_s == 0) in parallel.
/// Sample order and the reported maximum do not depend on the thread count.
WidthEstimate width_grid(const SliceGenerator& generate, FamilyTag family, const std::vector<double>& t_values,
                         const std::vector<double>& s_values, bool with_genus = true);

/// One-parameter sphere family on `samples` interior points t = i / (samples + 1).
WidthEstimate sphere_width(int samples, int refinement);

/// Doubled family on the closed n x n grid of [0,1]^2.
WidthEstimate doubled_width(const PlatonicScheme& scheme, int n, const FamilyConfig& cfg);

/// CSV with header t,s,F,genus,degenerate.
void write_width_csv(std::ostream& out, const WidthEstimate& w);

struct InequalityCheck {
  std::string label;
  bool pass = false;
  double margin = 0.0;  // positive when the inequality holds
};

struct WidthInequalityReport {
  std::vector<InequalityCheck> checks;  // w1 <= w2, w1 < w2, w2 < 2 w1
  bool equal_widths = false;            // flags the w2 == w1 regime
};

WidthInequalityReport check_width_inequalities(const WidthEstimate& w1, const WidthEstimate& w2,
                                               double equality_tol = 1e-9);

struct CatenoidMargin {
  double eps = 0.0, delta = 0.0;
  double max_F = 0.0;
  double argmax_t = 0.0;
  double margin = 0.0;  // 2 F(S_*) - max_F
  bool degenerate = false;
};

struct CatenoidCheck {
  std::vector<CatenoidMargin> rows;
  double tau_hat = 0.0;       // least-squares fit margin ~ tau_hat * eps^2 over non-degenerate rows
  double fit_rel_rms = 0.0;   // rms of the fit residual relative to rms margin
  std::vector<double> ratios; // margin(eps_{k+1}) / margin(eps_k) for consecutive positive rows
};

/// Max of F over t in [0,1] (t_samples + 1 equispaced points) of the catenoid family with
/// delta = delta_ratio * eps, for each eps. eps == 0 is reported as a degenerate zero margin.
CatenoidCheck catenoid_check(const PlatonicScheme& scheme, const std::vector<double>& eps_values, double delta_ratio,
                             int t_samples, const FamilyConfig& cfg);

struct SolverConfig {
  int max_iterations = 60;  // per mesh level
  double residual_tol_linf = 1e-6;
  double lambda_init = 1e-4;       // Levenberg-Marquardt damping, relative to diag(J^T W J)
  double lambda_decay = 0.3;
  double lambda_growth = 10.0;
  double lambda_max = 1e8;
  double tangential_smoothing_weight = 0.3;
  double smoothing_until_linf = 0.05;  // smoothing pass only while the residual is above this
  bool symmetrize_every_step = true;
  int refinement_steps = 0;            // extra 1-to-4 refinements after convergence, each re-solved
  int max_stall_refinements = 2;       // refinements allowed when no damped step is acceptable
  double max_step_fraction = 0.3;      // normal steps capped at this fraction of the mean edge length
  double min_triangle_quality = 0.02;
  bool check_self_intersection = true;
  GaussKernelConfig kernel;
};

struct ShrinkerReport {
  double F_value = 0.0;
  double residual_l2 = 0.0;
  double residual_linf = 0.0;
  int genus = 0;
  int components = 0;
  double symmetry_error = 0.0;
  int iterations = 0;
  bool converged = false;
  double min_triangle_quality = 0.0;
  double mean_radius = 0.0;
  double radius_spread = 0.0;  // max |x| - min |x|
  int vertices = 0;
  int triangles = 0;
  std::string status = "ok";
};

struct IterationRecord {
  int iteration = 0;
  double residual_l2 = 0.0;
  double residual_linf = 0.0;
  double lambda = 0.0;
  double F = 0.0;
  double symmetry_error = 0.0;
  bool smoothed = false;
};

struct SolveResult {
  TriMesh mesh;
  ShrinkerReport report;
  std::vector<IterationRecord> log;
};

/// Thrown by solve_shrinker on GenusChanged, MeshQualityCollapse and MaxIterations; carries the
/// last accepted state so callers can still write partial artifacts.
class SolverFailure : public Error {
 public:
  SolverFailure(ErrorCode code, const std::string& what, SolveResult partial)
      : Error(code, what), partial_(std::move(partial)) {}
  const SolveResult& partial() const { return partial_; }

 private:
  SolveResult partial_;
};

/// Damped Gauss-Newton on one normal offset per vertex orbit for H = <x, nu>/2.
SolveResult solve_shrinker(const TriMesh& init, const RotationGroup& group, const SolverConfig& cfg);

/// Diagnostics for any valid mesh. `converged` uses cfg.residual_tol_linf and symmetry error <= 1e-10.
ShrinkerReport verify(const TriMesh& mesh, const RotationGroup& group, const SolverConfig& cfg);

/// Flat key=value block.
void write_report(std::ostream& out, const ShrinkerReport& report);

/// True when two triangles that share no vertex intersect.
bool has_self_intersection(const TriMesh& mesh);

struct SaddleConfig {
  int mesh_refinement = 3;
  double shell_radius = 2.0;    // mid radius of the two sheets
  double shell_half_gap = 0.6;  // half the radial gap between them
  double shell_neck = 0.3;      // neck opening in (0, 1)
};

/// Initial surface for the solver: a lipped shell on neck schemes, the radius-1.9 sphere for "sphere".
TriMesh saddle_init(const PlatonicScheme& scheme, const SaddleConfig& cfg);

}  // namespace shrinker
