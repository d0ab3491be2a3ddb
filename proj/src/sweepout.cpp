#include "shrinker/sweepout.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "shrinker/error.hpp"
#include "shrinker/gaussian.hpp"
#include "shrinker/primitives.hpp"

namespace shrinker {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParams, what);
}

// Radii of concentric spheres; the endpoints map to the origin and to infinity.
double param_radius(double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return std::tan(0.5 * kPi * p);
}

enum class Grading { Linear, Graded };

// Ring distance from the hole boundary D to the cell boundary d at fraction u in [0, 1].
// Graded rings are exponentially spaced so that small holes and the logarithmic cutoff are resolved.
double ring_distance(double D, double d, double u, Grading grading) {
  // A closed cap (D = 0) needs no grading.
  if (grading == Grading::Linear || d - D <= 0.0 || D <= 0.0) return D + (d - D) * u;
  const double floor = std::max(D, 1e-3 * d);
  const double kappa = std::log1p((d - D) / floor);
  if (kappa < 1e-9) return D + (d - D) * u;
  return D + (d - D) * std::expm1(kappa * u) / std::expm1(kappa);
}

// Polar grid over one reference cell: N angular samples (a multiple of the cell's side count,
// starting at a corner) and rings 0..nr from the hole boundary to the cell boundary.
struct CellGrid {
  int N = 0, nr = 0;
  std::vector<Vec3> dir;     // unit-sphere positions, index i * N + j
  std::vector<double> pre;   // pre-image geodesic distance from the neck point
  int at(int i, int j) const { return i * N + ((j % N) + N) % N; }
};

struct GridSpec {
  int q = 8;
  int nr = 8;
  Grading grading = Grading::Graded;
  std::function<double(double)> hole;      // image hole distance by polar angle
  std::function<double(double)> pre_hole;  // pre-image hole distance (defaults to hole)
};

CellGrid build_cell_grid(const CellGeometry& cell, const GridSpec& spec) {
  CellGrid g;
  g.N = cell.sides * spec.q;
  g.nr = spec.nr;
  g.dir.resize((g.nr + 1) * g.N);
  g.pre.resize(g.dir.size());
  for (int j = 0; j < g.N; ++j) {
    const double theta = cell.corner_angle + 2.0 * kPi * j / g.N;
    const double d = cell.boundary_distance(theta);
    const double D = std::clamp(spec.hole(theta), 0.0, d);
    const double Dp = std::clamp(spec.pre_hole ? spec.pre_hole(theta) : D, 0.0, d);
    for (int i = 0; i <= g.nr; ++i) {
      const double u = static_cast<double>(i) / g.nr;
      const double s = i == g.nr ? d : ring_distance(D, d, u, spec.grading);
      g.dir[g.at(i, j)] = cell.point(theta, s);
      g.pre[g.at(i, j)] = i == g.nr ? d : ring_distance(Dp, d, u, spec.grading);
    }
  }
  return g;
}

// Group elements carrying the reference neck ray onto each neck ray.
std::vector<Mat3> cell_transforms(const PlatonicScheme& scheme) {
  std::vector<Mat3> out;
  const Vec3& p0 = scheme.neck_rays.front();
  for (const auto& p : scheme.neck_rays) {
    for (const auto& g : scheme.group.elements)
      if ((g * p0 - p).norm() < 1e-9) {
        out.push_back(g);
        break;
      }
  }
  return out;
}

struct SurfaceBuilder {
  std::vector<Vec3> V;
  std::vector<Triangle> T;
  double max_radius = 1.0;

  // Sheet over every cell; radius depends on the pre-image distance.
  void add_sheet(const CellGrid& g, const std::vector<Mat3>& cells, const std::function<double(double)>& radius,
                 bool outward) {
    for (const auto& rot : cells) {
      const int base = static_cast<int>(V.size());
      for (std::size_t k = 0; k < g.dir.size(); ++k) {
        const double r = radius(g.pre[k]);
        max_radius = std::max(max_radius, r);
        V.push_back(r * (rot * g.dir[k]));
      }
      for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.N; ++j) {
          Triangle t1 = {base + g.at(i, j), base + g.at(i + 1, j), base + g.at(i + 1, j + 1)};
          Triangle t2 = {base + g.at(i, j), base + g.at(i + 1, j + 1), base + g.at(i, j + 1)};
          if (!outward) {
            std::swap(t1[1], t1[2]);
            std::swap(t2[1], t2[2]);
          }
          T.push_back(t1);
          T.push_back(t2);
        }
    }
  }

  // Radial strip over ring 0 from r_in to r_out; normals point into the tube.
  void add_cone(const CellGrid& g, const std::vector<Mat3>& cells, double r_in, double r_out, int rings) {
    for (const auto& rot : cells) {
      const int base = static_cast<int>(V.size());
      for (int i = 0; i <= rings; ++i) {
        const double lambda = i == 0 ? r_in : (i == rings ? r_out : r_in * std::pow(r_out / r_in, double(i) / rings));
        max_radius = std::max(max_radius, lambda);
        for (int j = 0; j < g.N; ++j) V.push_back(lambda * (rot * g.dir[g.at(0, j)]));
      }
      auto id = [&](int i, int j) { return base + i * g.N + ((j % g.N) + g.N) % g.N; };
      for (int i = 0; i < rings; ++i)
        for (int j = 0; j < g.N; ++j) {
          T.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
          T.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
  }

  TriMesh finish() {
    if (T.empty()) return TriMesh();
    return weld(std::move(V), std::move(T), 1e-10 * max_radius);
  }
};

SweepoutSlice finish_slice(TriMesh mesh, const PlatonicScheme& scheme, bool tag, FamilyTag family,
                           std::vector<double> params, bool collapsed) {
  SweepoutSlice slice;
  slice.family = family;
  slice.params = std::move(params);
  if (!mesh.empty() && tag) mesh = tag_orbits(mesh, scheme.group);
  slice.gaussian_area = mesh.empty() ? 0.0 : gaussian_area(mesh);
  slice.degenerate = collapsed || mesh.empty() || slice.gaussian_area < degenerate_area_threshold();
  slice.mesh = std::move(mesh);
  return slice;
}

int sheet_rings(int q) { return 4 * q; }

// Every triangle clears the degeneracy floor used by validate, with a factor 10 to spare.
bool resolvable(const TriMesh& mesh) {
  const auto& V = mesh.vertices();
  const double diag = mesh.bounding_box_diagonal();
  const double floor = 1e-13 * diag * diag;
  for (const auto& t : mesh.triangles())
    if (0.5 * (V[t[1]] - V[t[0]]).cross(V[t[2]] - V[t[0]]).norm() < floor) return false;
  return true;
}

// Two sheets over the sphere of radius R_sigma at signed offsets eps > delta, joined where the
// logarithmic cutoff vanishes. tau in [0, 1/2] opens the holes (t' = 2 tau R); tau in [1/2, 1]
// retracts the holed sphere onto the one-skeleton while the sheet heights decay.
TriMesh catenoid_surface(const PlatonicScheme& scheme, double r_sigma, double eps, double delta, double tau,
                         const FamilyConfig& cfg, bool* collapsed) {
  const CellGeometry cell = cell_geometry(scheme);
  const auto cells = cell_transforms(scheme);
  const int q = 1 << cfg.refinement;
  // Offsets are cut off towards the sheet nearer to the base sphere when both have one sign.
  const double base = (eps > 0.0 && delta < 0.0) ? 0.0 : (delta >= 0.0 ? delta : eps);
  const double cut_max = std::min({cfg.cutoff_radius, 0.9 * r_sigma * cell.inradius, 0.9});

  GridSpec spec;
  spec.q = q;
  spec.nr = sheet_rings(q);
  spec.grading = Grading::Graded;
  std::function<double(double)> profile;  // eta as a function of pre-image geodesic angle
  double height = 1.0;
  *collapsed = false;
  if (tau <= 0.5) {
    const double tp = 2.0 * tau * cut_max;
    const double hole = tp * tp / r_sigma;
    spec.hole = [hole](double) { return hole; };
    CutoffProfile prof{tp};
    profile = [prof, r_sigma](double s) { return prof.t <= 0.0 ? 1.0 : prof.eta(r_sigma * s); };
  } else {
    const double sigma = 2.0 * tau - 1.0;
    const double rho0 = cut_max * cut_max / r_sigma;
    spec.hole = [rho0, sigma, &cell](double th) { return rho0 + sigma * (cell.boundary_distance(th) - rho0); };
    spec.pre_hole = [rho0](double) { return rho0; };
    CutoffProfile prof{cut_max};
    profile = [prof, r_sigma](double s) { return prof.eta(r_sigma * s); };
    height = std::pow(1.0 - sigma, cfg.retraction_power);
    *collapsed = sigma >= 1.0;
  }
  const CellGrid grid = build_cell_grid(cell, spec);

  SurfaceBuilder b;
  b.add_sheet(grid, cells, [&](double s) { return r_sigma + base + (eps - base) * height * profile(s); }, true);
  b.add_sheet(grid, cells, [&](double s) { return r_sigma + base + (delta - base) * height * profile(s); }, false);
  return b.finish();
}

}  // namespace

double sphere_gaussian_area(double r) { return r * r * std::exp(-0.25 * r * r); }

double shrinker_sphere_parameter() { return 2.0 / kPi * std::atan(kShrinkerSphereRadius); }

double sphere_family_radius(double t) { return param_radius(t); }

double degenerate_area_threshold() { return 1e-6 * sphere_gaussian_area(kShrinkerSphereRadius); }

std::vector<std::string> scheme_ids() { return {"t12-z3", "o24-z4", "o24-z3", "i60-z5", "i60-z3"}; }

PlatonicScheme make_scheme(const std::string& id) {
  PlatonicScheme s;
  s.id = id;
  GroupName name;
  int order = 0;
  Vec3 hint;
  if (id == "sphere") {
    s.group = build_group(GroupName::octahedral());
    return s;
  } else if (id == "t12-z3") {
    name = GroupName::tetrahedral();
    order = 3;
    hint = Vec3(1, 1, 1).normalized();
  } else if (id == "o24-z4") {
    name = GroupName::octahedral();
    order = 4;
    hint = Vec3::UnitX();
  } else if (id == "o24-z3") {
    name = GroupName::octahedral();
    order = 3;
    hint = Vec3(1, 1, 1).normalized();
  } else if (id == "i60-z5") {
    name = GroupName::icosahedral();
    order = 5;
    hint = Vec3(0, 1, std::numbers::phi).normalized();
  } else if (id == "i60-z3") {
    name = GroupName::icosahedral();
    order = 3;
    hint = Vec3(1, 1, 1).normalized();
  } else {
    throw Error(ErrorCode::InvalidParams, "unknown scheme '" + id + "'");
  }
  s.group = build_group(name);
  for (const auto& cls : s.group.axes) {
    if (cls.isotropy_order != order) continue;
    bool has_hint = false;
    for (const auto& r : cls.rays) has_hint |= (r - hint).norm() < 1e-9;
    if (!has_hint) continue;
    s.neck_rays = cls.rays;
    // Put the hint first so the reference cell is deterministic.
    auto it = std::find_if(s.neck_rays.begin(), s.neck_rays.end(), [&](const Vec3& r) { return (r - hint).norm() < 1e-9; });
    std::iter_swap(s.neck_rays.begin(), it);
  }
  if (s.neck_rays.empty()) throw Error(ErrorCode::InvalidParams, "scheme '" + id + "' has no matching axis class");
  s.neck_order = order;
  s.neck_count = static_cast<int>(s.neck_rays.size());
  s.expected_genus = s.neck_count - 1;
  return s;
}

std::string to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::Sphere: return "sphere";
    case FamilyTag::Doubled: return "doubled";
    case FamilyTag::Catenoid: return "catenoid";
    case FamilyTag::CatenoidWithParameter: return "catenoid-param";
    case FamilyTag::Shell: return "shell";
  }
  return "?";
}

double CutoffProfile::eta(double r) const {
  if (t <= 0.0) return 1.0;
  if (r >= t) return 1.0;
  if (r <= t * t) return 0.0;
  return (std::log(t * t) - std::log(r)) / std::log(t);
}

double log_cutoff(const CutoffProfile& profile, double r) {
  require(r >= 0.0 && profile.t >= 0.0 && profile.t < 1.0, "log_cutoff needs r >= 0 and 0 <= t < 1");
  return profile.eta(r);
}

double Reparameterization::operator()(double x) const {
  return std::tan(0.5 * kPi * (T * (1.0 - eps1) + x * (1.0 - eps1)));
}

double Reparameterization::derivative(double x) const {
  const double c = std::cos(0.5 * kPi * (T * (1.0 - eps1) + x * (1.0 - eps1)));
  return 0.5 * kPi * (1.0 - eps1) / (c * c);
}

double Reparameterization::derivative_lower_bound(double lo, double hi) const {
  return std::min(derivative(lo), derivative(hi));
}

Reparameterization default_reparameterization(double eps1) { return {eps1, shrinker_sphere_parameter()}; }

Vec3 CellGeometry::direction(double theta) const { return std::cos(theta) * e1 + std::sin(theta) * e2; }

Vec3 CellGeometry::point(double theta, double dist) const {
  return std::cos(dist) * center + std::sin(dist) * direction(theta);
}

double CellGeometry::boundary_distance(double theta) const {
  const Vec3 u = direction(theta);
  double best = kPi;
  for (const auto& q : neighbor_rays) {
    const double uq = u.dot(q);
    if (uq <= 1e-14) continue;
    best = std::min(best, std::atan2(1.0 - center.dot(q), uq));
  }
  return best;
}

CellGeometry cell_geometry(const PlatonicScheme& scheme) {
  require(!scheme.neck_rays.empty(), "scheme has no neck rays");
  CellGeometry c;
  c.center = scheme.neck_rays.front();
  c.sides = scheme.neck_order;
  for (std::size_t i = 1; i < scheme.neck_rays.size(); ++i) c.neighbor_rays.push_back(scheme.neck_rays[i]);
  const Vec3 seed = std::abs(c.center.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  c.e1 = (seed - seed.dot(c.center) * c.center).normalized();
  c.e2 = c.center.cross(c.e1);

  // Corners maximise the boundary distance; locate one on a fine scan, then golden-section.
  const double period = 2.0 * kPi / c.sides;
  const int scan = 4096;
  int best = 0;
  double best_d = -1.0;
  for (int i = 0; i < scan; ++i) {
    const double d = c.boundary_distance(period * i / scan);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  double lo = period * (best - 1) / scan, hi = period * (best + 1) / scan;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
    if (c.boundary_distance(m1) < c.boundary_distance(m2)) lo = m1;
    else hi = m2;
  }
  c.corner_angle = 0.5 * (lo + hi);
  c.circumradius = c.boundary_distance(c.corner_angle);
  c.inradius = c.boundary_distance(c.corner_angle + 0.5 * period);
  return c;
}

double retraction_radius(const CellGeometry& cell, double tau, double theta) {
  const double d = cell.boundary_distance(theta);
  return tau * cell.inradius + tau * tau * tau * (d - cell.inradius);
}

SweepoutSlice sphere_family(const PlatonicScheme& scheme, double t, int refinement, bool tag) {
  require(t > 0.0 && t < 1.0, "sphere_family needs 0 < t < 1");
  const double r = param_radius(t);
  TriMesh mesh;
  if (scheme.group.name.kind == GroupKind::I60) {
    mesh = make_icosphere(refinement, r);
  } else {
    mesh = make_octasphere(refinement, r);
  }
  return finish_slice(std::move(mesh), scheme, tag, FamilyTag::Sphere, {t}, false);
}

std::vector<std::vector<Vec3>> retraction_curves(const PlatonicScheme& scheme, double tau, int refinement) {
  require(tau >= 0.0 && tau <= 1.0, "retraction_curves needs tau in [0, 1]");
  const CellGeometry cell = cell_geometry(scheme);
  const int N = cell.sides * (1 << refinement);
  std::vector<Vec3> ref(N);
  for (int j = 0; j < N; ++j) {
    const double theta = cell.corner_angle + 2.0 * kPi * j / N;
    ref[j] = cell.point(theta, retraction_radius(cell, tau, theta));
  }
  std::vector<std::vector<Vec3>> curves;
  for (const auto& rot : cell_transforms(scheme)) {
    std::vector<Vec3> c;
    for (const auto& p : ref) c.push_back(rot * p);
    curves.push_back(std::move(c));
  }
  return curves;
}

ConeSegment cone_segment(const std::vector<std::vector<Vec3>>& curves, double a, double b, int refinement) {
  require(a > 0.0 && a <= b && b < 1.0, "cone_segment needs 0 < a <= b < 1");
  ConeSegment out;
  const double ra = param_radius(a), rb = param_radius(b);
  if (rb <= ra) {
    out.degenerate = true;
    return out;
  }
  const int rings = 2 * (1 << refinement);
  std::vector<Vec3> V;
  std::vector<Triangle> T;
  for (const auto& curve : curves) {
    const int N = static_cast<int>(curve.size());
    const int base = static_cast<int>(V.size());
    for (int i = 0; i <= rings; ++i) {
      const double lambda = ra * std::pow(rb / ra, double(i) / rings);
      for (const auto& p : curve) V.push_back(lambda * p);
    }
    auto id = [&](int i, int j) { return base + i * N + (j % N); };
    for (int i = 0; i < rings; ++i)
      for (int j = 0; j < N; ++j) {
        T.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        T.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
  }
  out.mesh = weld(std::move(V), std::move(T), 1e-12 * std::max(1.0, rb));
  out.degenerate = out.mesh.empty();
  return out;
}

double bump_eta(double t, double s, double eps1, double amplitude) {
  // Exact zeros on the boundary strata; sin(pi) is not exactly zero in floating point.
  if (t <= 0.0 || t >= 1.0 || s <= eps1 || s >= 1.0) return 0.0;
  const double v = amplitude * std::sin(kPi * t) * std::sin(kPi * (s - eps1) / (1.0 - eps1));
  return std::clamp(v, 0.0, 1.0);
}

SweepoutSlice doubled_family(const PlatonicScheme& scheme, double t, double s, const FamilyConfig& cfg) {
  require(t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0, "doubled_family needs (t, s) in [0,1]^2");
  require(cfg.eps1 > 0.0 && cfg.eps1 < 1.0, "eps1 must lie in (0, 1)");
  require(scheme.neck_count > 0, "doubled_family needs a doubled-Platonic scheme");
  const std::vector<double> params = {t, s};

  if (s < cfg.eps1) {
    // Hole-opening extension below the eps1 row.
    const double a = t * (1.0 - cfg.eps1), b = t + cfg.eps1 * (1.0 - t);
    const double ra = std::clamp(param_radius(a), cfg.r_min, cfg.r_max);
    const double rb = std::clamp(param_radius(b), cfg.r_min, cfg.r_max);
    const double rm = 0.5 * (ra + rb), half = 0.5 * (rb - ra);
    const double sigma = 1.0 - s / cfg.eps1;
    bool collapsed = false;
    TriMesh mesh = half > 0.0 ? catenoid_surface(scheme, rm, half, -half, sigma, cfg, &collapsed) : TriMesh();
    return finish_slice(std::move(mesh), scheme, cfg.tag_orbits, FamilyTag::Doubled, params, collapsed || half <= 0.0);
  }

  const double a = t * (1.0 - s), b = t + s * (1.0 - t);
  const double eta = bump_eta(t, s, cfg.eps1, cfg.neck_amplitude);
  const CellGeometry cell = cell_geometry(scheme);
  const auto cells = cell_transforms(scheme);
  const int q = 1 << cfg.refinement;

  auto build = [&](double eta) {
    GridSpec spec;
    spec.q = q;
    spec.nr = sheet_rings(q);
    spec.grading = Grading::Graded;
    spec.hole = [&](double th) { return eta > 0.0 ? retraction_radius(cell, eta, th) : 0.0; };
    const CellGrid grid = build_cell_grid(cell, spec);

    SurfaceBuilder builder;
    double ra = param_radius(a), rb = param_radius(b);
    if (eta <= 0.0) {
      // Two disjoint spheres; those collapsed to the origin or pushed to infinity carry no area.
      if (rb >= cfg.r_min && rb <= cfg.r_max) builder.add_sheet(grid, cells, [rb](double) { return rb; }, true);
      if (ra >= cfg.r_min && ra <= cfg.r_max) builder.add_sheet(grid, cells, [ra](double) { return ra; }, false);
    } else {
      ra = std::clamp(ra, cfg.r_min, cfg.r_max);
      rb = std::clamp(rb, cfg.r_min, cfg.r_max);
      builder.add_sheet(grid, cells, [rb](double) { return rb; }, true);
      builder.add_sheet(grid, cells, [ra](double) { return ra; }, false);
      if (rb > ra) builder.add_cone(grid, cells, ra, rb, 2 * q);
    }
    return builder.finish();
  };
  TriMesh mesh = build(eta);
  if (eta > 0.0 && !resolvable(mesh)) {
    // Necks thinner than the mesh can carry next to a much larger outer sheet: close them.
    // The cone area is already negligible, so F is continuous across the switch.
    mesh = build(0.0);
  }
  return finish_slice(std::move(mesh), scheme, cfg.tag_orbits, FamilyTag::Doubled, params, false);
}

SweepoutSlice catenoid_family(const PlatonicScheme& scheme, double eps, double delta, double t,
                              const FamilyConfig& cfg) {
  require(eps > delta, "catenoid_family needs eps > delta");
  require(std::abs(eps) <= cfg.alpha && std::abs(delta) <= cfg.alpha, "catenoid offsets exceed alpha");
  require(t >= 0.0 && t <= 1.0, "catenoid_family needs t in [0, 1]");
  require(scheme.neck_count > 0, "catenoid_family needs a doubled-Platonic scheme");
  bool collapsed = false;
  TriMesh mesh = catenoid_surface(scheme, kShrinkerSphereRadius, eps, delta, t, cfg, &collapsed);
  return finish_slice(std::move(mesh), scheme, cfg.tag_orbits, FamilyTag::Catenoid, {eps, delta, t}, collapsed);
}

SweepoutSlice catenoid_family_with_parameter(const PlatonicScheme& scheme, double s, double t, double eta,
                                             const FamilyConfig& cfg) {
  require(eta > 0.0, "catenoid_family_with_parameter needs eta > 0");
  require(s >= -cfg.alpha2 - 1e-15 && s <= cfg.alpha2 - eta + 1e-15, "s outside [-alpha2, alpha2 - eta]");
  require(t >= 0.0 && t <= 1.0, "t outside [0, 1]");
  const Reparameterization f = default_reparameterization(cfg.eps1);
  const double delta = f(s) - kShrinkerSphereRadius;
  const double eps = f(s + eta) - kShrinkerSphereRadius;
  FamilyConfig local = cfg;
  local.alpha = std::max(cfg.alpha, std::max(std::abs(eps), std::abs(delta)));
  SweepoutSlice slice = catenoid_family(scheme, eps, delta, t, local);
  slice.family = FamilyTag::CatenoidWithParameter;
  slice.params = {s, t, eta};
  return slice;
}

SweepoutSlice lipped_shell(const PlatonicScheme& scheme, double r_mid, double half_gap, double tau, int refinement,
                          bool tag) {
  require(scheme.neck_count > 0, "lipped_shell needs a doubled-Platonic scheme");
  require(half_gap > 0.0 && r_mid - half_gap > 0.0, "lipped_shell needs 0 < half_gap < r_mid");
  require(tau > 0.0 && tau < 1.0, "lipped_shell needs tau in (0, 1)");
  const CellGeometry cell = cell_geometry(scheme);
  const auto cells = cell_transforms(scheme);
  const int q = 1 << refinement;
  const int N = cell.sides * q;
  const int rows = 4 * q;  // row 0 on the inner sheet's cell boundary, row `rows` on the outer one

  // Cross-section in (geodesic distance, radius): s = D + (d - D)(1 - cos phi), R = r_mid + h sin phi,
  // phi in [-pi/2, pi/2]. Rows are spaced evenly in arc length.
  const int fine = 2048;
  std::vector<Vec3> V;
  std::vector<double> phis(fine + 1), len(fine + 1);
  std::vector<std::pair<double, double>> ref((rows + 1) * N);  // (s, R) per row and angle
  for (int j = 0; j < N; ++j) {
    const double theta = cell.corner_angle + 2.0 * kPi * j / N;
    const double d = cell.boundary_distance(theta);
    const double D = std::min(retraction_radius(cell, tau, theta), d);
    auto at = [&](double phi) {
      return std::pair{D + (d - D) * (1.0 - std::cos(phi)), r_mid + half_gap * std::sin(phi)};
    };
    len[0] = 0.0;
    for (int k = 0; k <= fine; ++k) {
      phis[k] = -0.5 * kPi + kPi * k / fine;
      if (k == 0) continue;
      const auto [s0, r0] = at(phis[k - 1]);
      const auto [s1, r1] = at(phis[k]);
      len[k] = len[k - 1] + std::hypot(r1 - r0, 0.5 * (r0 + r1) * (s1 - s0));
    }
    for (int i = 0; i <= rows; ++i) {
      double phi = phis[0];
      if (i == rows) phi = phis[fine];
      else if (i > 0) {
        const double target = len[fine] * i / rows;
        const auto k = std::lower_bound(len.begin(), len.end(), target) - len.begin();
        const double a = (target - len[k - 1]) / (len[k] - len[k - 1]);
        phi = phis[k - 1] + a * (phis[k] - phis[k - 1]);
      }
      ref[i * N + j] = at(phi);
      if (i == 0) ref[i * N + j] = {d, r_mid - half_gap};
      if (i == rows) ref[i * N + j] = {d, r_mid + half_gap};
    }
  }
  std::vector<Triangle> T;
  for (const auto& rot : cells) {
    const int base = static_cast<int>(V.size());
    for (int i = 0; i <= rows; ++i)
      for (int j = 0; j < N; ++j) {
        const double theta = cell.corner_angle + 2.0 * kPi * j / N;
        const auto [s, r] = ref[i * N + j];
        V.push_back(r * (rot * cell.point(theta, s)));
      }
    auto id = [&](int i, int j) { return base + i * N + (j % N); };
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < N; ++j) {
        T.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        T.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
  }
  TriMesh mesh = weld(std::move(V), std::move(T), 1e-10 * std::max(1.0, r_mid + half_gap));
  return finish_slice(std::move(mesh), scheme, tag, FamilyTag::Shell, {r_mid, half_gap, tau}, false);
}

}  // namespace shrinker
