#pragma once

#include <string>
#include <vector>

#include "shrinker/mesh.hpp"
#include "shrinker/symmetry.hpp"

namespace shrinker {

/// Radius of the shrinking sphere under H = kappa1 + kappa2.
inline constexpr double kShrinkerSphereRadius = 2.0;

/// F of the origin-centred sphere of radius r: r^2 e^{-r^2/4}.
double sphere_gaussian_area(double r);

/// Parameter T with tan(pi T / 2) = 2, so that Phi_T is the shrinking sphere.
double shrinker_sphere_parameter();

/// Radius of the concentric-sphere slice at parameter t in [0, 1].
double sphere_family_radius(double t);

/// Two concentric spheres joined by one neck per singular ray of the chosen class.
struct PlatonicScheme {
  std::string id;  // "t12-z3", "o24-z4", "o24-z3", "i60-z5", "i60-z3"
  RotationGroup group;
  int neck_order = 0;     // isotropy order m of the neck rays
  int neck_count = 0;     // k
  int expected_genus = 0; // k - 1
  std::vector<Vec3> neck_rays;
};

/// The five doubled-Platonic schemes, plus "sphere" handled by callers.
PlatonicScheme make_scheme(const std::string& id);
std::vector<std::string> scheme_ids();

enum class FamilyTag { Sphere, Doubled, Catenoid, CatenoidWithParameter, Shell };
std::string to_string(FamilyTag tag);

struct SweepoutSlice {
  TriMesh mesh;
  std::vector<double> params;
  FamilyTag family = FamilyTag::Sphere;
  bool degenerate = false;
  /// Gaussian area (order-3 quadrature) computed while building the slice.
  double gaussian_area = 0.0;
};

/// Logarithmic cutoff eta_t and the reparameterisation f used by the parametric estimate.
struct CutoffProfile {
  double t = 0.1;

  /// 1 for r >= t, (log t^2 - log r) / log t on [t^2, t], 0 below t^2.
  double eta(double r) const;
};

double log_cutoff(const CutoffProfile& profile, double r);

/// f(x) = tan((pi/2)(T(1 - eps1) + x(1 - eps1))), strictly increasing near 0.
struct Reparameterization {
  double eps1 = 0.05;
  double T = 0.0;

  double operator()(double x) const;
  double derivative(double x) const;
  /// Lower bound of f' on [lo, hi] (f' is increasing where f is finite and positive).
  double derivative_lower_bound(double lo, double hi) const;
};

Reparameterization default_reparameterization(double eps1);

struct FamilyConfig {
  int refinement = 3;            // q = 2^refinement samples per cell side
  double eps1 = 0.05;            // width of the hole-opening strip
  double neck_amplitude = 0.02;  // peak of the bump eta(t, s)
  double cutoff_radius = 0.4;    // R: log-cutoff phase runs t' in [0, R]
  double retraction_power = 2.0; // sheet heights decay as (1 - sigma)^p while holes retract
  double alpha = 0.75;           // max |offset| for the catenoid families
  double alpha2 = 0.06;          // half-width of the parametric estimate's s-domain
  double r_min = 0.02;           // sphere radii are clamped into [r_min, r_max]
  double r_max = 30.0;
  bool tag_orbits = true;
};

/// Retraction curve radius: geodesic distance from the neck point to S_tau in direction theta.
/// Circles of radius tau * inradius for small tau; the face boundary at tau = 1.
struct CellGeometry {
  Vec3 center;
  Vec3 e1, e2;             // tangent frame, e1 x e2 = center
  int sides = 0;
  double inradius = 0.0;   // geodesic distance to an edge midpoint
  double circumradius = 0.0;
  double corner_angle = 0.0;  // polar angle of one corner in the (e1, e2) frame
  std::vector<Vec3> neighbor_rays;  // the other neck rays; the cell is their spherical Voronoi region

  /// Geodesic distance to the cell boundary in polar direction theta.
  double boundary_distance(double theta) const;
  Vec3 direction(double theta) const;
  Vec3 point(double theta, double dist) const;
};

CellGeometry cell_geometry(const PlatonicScheme& scheme);

double retraction_radius(const CellGeometry& cell, double tau, double theta);

SweepoutSlice sphere_family(const PlatonicScheme& scheme, double t, int refinement, bool tag_orbits = true);

/// k closed polylines on the unit sphere, each with `samples` points (a multiple of the neck order).
std::vector<std::vector<Vec3>> retraction_curves(const PlatonicScheme& scheme, double tau, int refinement);

struct ConeSegment {
  TriMesh mesh;
  bool degenerate = false;
};

/// Ruled radial strip {lambda x : x on curve, lambda in [tan(pi a/2), tan(pi b/2)]} over each curve.
ConeSegment cone_segment(const std::vector<std::vector<Vec3>>& curves, double a, double b, int refinement);

/// amplitude * sin(pi t) * sin(pi (s - eps1)/(1 - eps1)), clamped to [0, 1].
double bump_eta(double t, double s, double eps1, double amplitude);

/// Phi_{t,s} on [0,1]^2: the doubled family on s >= eps1 and the hole-opening extension below.
SweepoutSlice doubled_family(const PlatonicScheme& scheme, double t, double s, const FamilyConfig& cfg);

/// Lambda_t for the sphere of radius 2 with sheets at signed offsets eps > delta.
SweepoutSlice catenoid_family(const PlatonicScheme& scheme, double eps, double delta, double t,
                              const FamilyConfig& cfg);

/// Gamma_{s,t}: catenoid family for the offsets f(s) - 2 and f(s + eta) - 2.
SweepoutSlice catenoid_family_with_parameter(const PlatonicScheme& scheme, double s, double t, double eta,
                                             const FamilyConfig& cfg);

/// Smooth genus k-1 surface: sheets of radius r_mid -+ half_gap joined by rounded lips around
/// the holes bounded by S_tau. Used as a solver starting point, not as a sweepout.
SweepoutSlice lipped_shell(const PlatonicScheme& scheme, double r_mid, double half_gap, double tau, int refinement,
                           bool tag_orbits = true);

/// Area below which a slice counts as a degenerate sliver.
double degenerate_area_threshold();

}  // namespace shrinker
