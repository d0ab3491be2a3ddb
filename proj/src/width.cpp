#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <cstdio>
#include <ostream>
#include <thread>

#include "shrinker/minmax.hpp"

namespace shrinker {

WidthEstimate width_grid(const SliceGenerator& generate, FamilyTag family, const std::vector<double>& t_values,
                         const std::vector<double>& s_values, bool with_genus) {
  WidthEstimate w;
  w.family = family;
  w.grid_t = static_cast<int>(t_values.size());
  w.grid_s = static_cast<int>(s_values.size());
  const std::size_t ns = std::max<std::size_t>(1, s_values.size());
  const std::size_t total = t_values.size() * ns;
  w.samples.resize(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      WidthSample& out = w.samples[k];
      out.t = t_values[k / ns];
      out.s = s_values.empty() ? 0.0 : s_values[k % ns];
      try {
        const SweepoutSlice slice = generate(out.t, out.s);
        out.F = slice.gaussian_area;
        out.degenerate = slice.degenerate;
        if (with_genus && !slice.mesh.empty()) out.genus = validate(slice.mesh).genus;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  // Sequential argmax so ties resolve to the first grid point.
  std::size_t best = 0;
  for (std::size_t k = 1; k < total; ++k)
    if (w.samples[k].F > w.samples[best].F) best = k;
  if (total > 0) {
    w.max_F = w.samples[best].F;
    w.max_slice_params = {w.samples[best].t};
    if (!s_values.empty()) w.max_slice_params.push_back(w.samples[best].s);
  }
  w.low_resolution = t_values.size() < 3 || (!s_values.empty() && s_values.size() < 3);
  return w;
}

WidthEstimate sphere_width(int samples, int refinement) {
  if (samples < 1) throw Error(ErrorCode::InvalidParams, "sphere width needs at least one sample");
  const PlatonicScheme scheme = make_scheme("sphere");
  std::vector<double> ts;
  for (int i = 1; i <= samples; ++i) ts.push_back(static_cast<double>(i) / (samples + 1));
  auto gen = [&](double t, double) { return sphere_family(scheme, t, refinement, false); };
  WidthEstimate w = width_grid(gen, FamilyTag::Sphere, ts, {});
  w.scheme = "sphere";
  w.refinement = refinement;
  return w;
}

WidthEstimate doubled_width(const PlatonicScheme& scheme, int n, const FamilyConfig& cfg) {
  if (n < 1) throw Error(ErrorCode::InvalidParams, "grid resolution must be >= 1");
  std::vector<double> axis;
  if (n == 1) axis = {0.5};
  for (int i = 0; n > 1 && i < n; ++i) axis.push_back(static_cast<double>(i) / (n - 1));
  FamilyConfig local = cfg;
  local.tag_orbits = false;
  auto gen = [&](double t, double s) { return doubled_family(scheme, t, s, local); };
  WidthEstimate w = width_grid(gen, FamilyTag::Doubled, axis, axis);
  w.scheme = scheme.id;
  w.refinement = cfg.refinement;
  return w;
}

void write_width_csv(std::ostream& out, const WidthEstimate& w) {
  out << "t,s,F,genus,degenerate\n";
  char buf[160];
  for (const auto& s : w.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%d\n", s.t, s.s, s.F, s.genus, s.degenerate ? 1 : 0);
    out << buf;
  }
}

WidthInequalityReport check_width_inequalities(const WidthEstimate& w1, const WidthEstimate& w2,
                                               double equality_tol) {
  WidthInequalityReport r;
  const double a = w1.max_F, b = w2.max_F;
  const double tol = equality_tol * std::max(1.0, std::abs(a));
  r.equal_widths = std::abs(b - a) <= tol;
  r.checks.push_back({"w1 <= w2", b >= a - tol, b - a});
  r.checks.push_back({"w1 < w2", b > a + tol, b - a});
  r.checks.push_back({"w2 < 2 w1", b < 2.0 * a, 2.0 * a - b});
  return r;
}

CatenoidCheck catenoid_check(const PlatonicScheme& scheme, const std::vector<double>& eps_values, double delta_ratio,
                             int t_samples, const FamilyConfig& cfg) {
  if (t_samples < 1) throw Error(ErrorCode::InvalidParams, "catenoid check needs at least two t samples");
  CatenoidCheck out;
  const double twice_sphere = 2.0 * sphere_gaussian_area(kShrinkerSphereRadius);
  FamilyConfig local = cfg;
  local.tag_orbits = false;
  std::vector<double> ts;
  for (int i = 0; i <= t_samples; ++i) ts.push_back(static_cast<double>(i) / t_samples);
  for (double eps : eps_values) {
    CatenoidMargin row;
    row.eps = eps;
    row.delta = delta_ratio * eps;
    if (eps == 0.0) {
      row.eps = row.delta = 0.0;  // no signed zeros in the output
      row.degenerate = true;
      out.rows.push_back(row);
      continue;
    }
    auto gen = [&](double t, double) { return catenoid_family(scheme, row.eps, row.delta, t, local); };
    const WidthEstimate w = width_grid(gen, FamilyTag::Catenoid, ts, {}, false);
    row.max_F = w.max_F;
    row.argmax_t = w.max_slice_params[0];
    row.margin = twice_sphere - w.max_F;
    out.rows.push_back(row);
  }
  double num = 0.0, den = 0.0, ms = 0.0;
  int n = 0;
  for (const auto& r : out.rows) {
    if (r.degenerate) continue;
    const double e2 = r.eps * r.eps;
    num += r.margin * e2;
    den += e2 * e2;
    ms += r.margin * r.margin;
    ++n;
  }
  if (n > 0 && den > 0.0) {
    out.tau_hat = num / den;
    double res = 0.0;
    for (const auto& r : out.rows)
      if (!r.degenerate) res += std::pow(r.margin - out.tau_hat * r.eps * r.eps, 2);
    out.fit_rel_rms = ms > 0.0 ? std::sqrt(res / ms) : 0.0;
  }
  for (std::size_t k = 1; k < out.rows.size(); ++k) {
    const auto &a = out.rows[k - 1], &b = out.rows[k];
    if (!a.degenerate && !b.degenerate && a.margin > 0.0) out.ratios.push_back(b.margin / a.margin);
  }
  return out;
}

}  // namespace shrinker
