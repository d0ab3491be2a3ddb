#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "shrinker/error.hpp"
#include "shrinker/primitives.hpp"
#include "shrinker/sweepout.hpp"
#include "shrinker/symmetry.hpp"

using namespace shrinker;

namespace {

std::vector<GroupName> polyhedral() {
  return {GroupName::tetrahedral(), GroupName::octahedral(), GroupName::icosahedral()};
}

TriMesh invariant_mesh(const RotationGroup& g) {
  // Icosphere vertices are I60-invariant and contain the T12 frame; the octasphere carries O24.
  const TriMesh base = g.name.kind == GroupKind::O24 ? make_octasphere(3, 2.0) : make_icosphere(3, 2.0);
  return tag_orbits(base.with_sphere_projection(std::nullopt), g);
}

double max_moved(const TriMesh& a, const TriMesh& b) {
  double d = 0.0;
  for (int v = 0; v < a.vertex_count(); ++v) d = std::max(d, (a.vertices()[v] - b.vertices()[v]).norm());
  return d;
}

// Rotation angle of R; atan2 stays accurate near pi where acos of the trace does not.
double angle(const Mat3& R) {
  const Vec3 axis(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  return std::atan2(0.5 * axis.norm(), 0.5 * (R.trace() - 1.0));
}

}  // namespace

TEST_CASE("group orders") {
  CHECK(build_group(GroupName::tetrahedral()).order() == 12);
  CHECK(build_group(GroupName::octahedral()).order() == 24);
  CHECK(build_group(GroupName::icosahedral()).order() == 60);
  CHECK(build_group(GroupName::cyclic(1)).order() == 1);
  CHECK(build_group(GroupName::cyclic(5)).order() == 5);
  CHECK(build_group(GroupName::dihedral(4)).order() == 8);
}

TEST_CASE("closure, inverses and orthogonality") {
  for (const GroupName& name : {GroupName::tetrahedral(), GroupName::octahedral(), GroupName::icosahedral(),
                                GroupName::cyclic(6), GroupName::dihedral(3)}) {
    const RotationGroup g = build_group(name);
    CHECK((g.elements[0] - Mat3::Identity()).norm() < 1e-15);
    for (const Mat3& a : g.elements) {
      CHECK((a.transpose() * a - Mat3::Identity()).norm() < 1e-12);
      CHECK(a.determinant() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(g.find(a.transpose()) >= 0);
      for (const Mat3& b : g.elements) {
        const int k = g.find(a * b);
        REQUIRE(k >= 0);
        CHECK((g.elements[k] - a * b).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("octahedral axis census") {
  const RotationGroup g = build_group(GroupName::octahedral());
  std::map<int, int> rays;
  for (const auto& a : g.axes) rays[a.isotropy_order] += static_cast<int>(a.rays.size());
  CHECK(rays[4] == 6);
  CHECK(rays[3] == 8);
  CHECK(rays[2] == 12);
  // Z4 rays are the coordinate half-axes.
  for (const auto& a : g.axes)
    if (a.isotropy_order == 4)
      for (const Vec3& r : a.rays) CHECK(r.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("axis classes agree with the rotations they fix") {
  for (const GroupName& name : polyhedral()) {
    const RotationGroup g = build_group(name);
    // Each line carries two rays; a line of order m contributes m - 1 nontrivial rotations.
    int nontrivial = 0;
    for (const auto& a : g.axes) nontrivial += static_cast<int>(a.rays.size()) / 2 * (a.isotropy_order - 1);
    CHECK(nontrivial + 1 == g.order());

    // Independent count: the stabiliser of each ray, by brute force over the elements.
    for (const auto& a : g.axes)
      for (const Vec3& r : a.rays) {
        int fixing = 0;
        double smallest = 10.0;
        for (const Mat3& m : g.elements)
          if ((m * r - r).norm() < 1e-9) {
            ++fixing;
            if (angle(m) > 1e-9) smallest = std::min(smallest, angle(m));
          }
        CHECK(fixing == a.isotropy_order);
        CHECK(smallest == doctest::Approx(2.0 * M_PI / a.isotropy_order).epsilon(1e-9));
      }
  }
}

TEST_CASE("orbits") {
  const RotationGroup o = build_group(GroupName::octahedral());
  CHECK(orbit(o, Vec3(1, 0, 0)).size() == 6);
  CHECK(orbit(o, Vec3(0, 0, 0)).size() == 1);
  CHECK(orbit(o, Vec3(0.3, 0.5, 0.7)).size() == 24);
  CHECK(orbit(o, Vec3(1, 1, 1)).size() == 8);
  CHECK(orbit(o, Vec3(1, 1, 0)).size() == 12);
}

TEST_CASE("orbit sizes divide the group order") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n(0.0, 1.0);
  for (const GroupName& name : polyhedral()) {
    const RotationGroup g = build_group(name);
    for (int i = 0; i < 1000; ++i) {
      Vec3 p(n(rng), n(rng), n(rng));
      // Every fourth point sits on a singular ray.
      if (i % 4 == 0) {
        const auto& cls = g.axes[i / 4 % g.axes.size()];
        p = cls.rays[i % cls.rays.size()] * (1.0 + std::abs(n(rng)));
      }
      const auto pts = orbit(g, p);
      CHECK(g.order() % static_cast<int>(pts.size()) == 0);
    }
  }
}

TEST_CASE("symmetrize") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (const GroupName& name : polyhedral()) {
    const RotationGroup g = build_group(name);
    const TriMesh m = invariant_mesh(g);
    CHECK(symmetry_error(m, g) < 1e-13);
    CHECK(max_moved(symmetrize(m, g), m) <= 1e-14);

    std::vector<Vec3> v = m.vertices();
    for (auto& x : v) x += 0.05 * Vec3(n(rng), n(rng), n(rng));
    const TriMesh noisy = m.with_vertices(v);
    CHECK(symmetry_error(noisy, g) > 1e-3);
    const TriMesh s1 = symmetrize(noisy, g);
    CHECK(symmetry_error(s1, g) <= 1e-12);
    CHECK(max_moved(symmetrize(s1, g), s1) <= 1e-14);

    // Equivariance as vertex sets: every g maps the vertex set onto itself.
    for (const Mat3& R : g.elements) {
      double worst = 0.0;
      for (const Vec3& x : s1.vertices()) {
        double best = 1e300;
        const Vec3 y = R * x;
        for (const Vec3& z : s1.vertices()) best = std::min(best, (y - z).norm());
        worst = std::max(worst, best);
      }
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("symmetrize needs orbit tags") {
  bool thrown = false;
  try {
    symmetrize(make_icosphere(1), build_group(GroupName::icosahedral()));
  } catch (const Error& e) {
    thrown = e.code() == ErrorCode::MissingOrbitTags;
  }
  CHECK(thrown);
}

TEST_CASE("Riemann-Hurwitz") {
  // 24 sheets over a sphere branched once at orders 2, 3 and 4: 48 - (12*1 + 8*2 + 6*3).
  CHECK(riemann_hurwitz_chi(24, 2, {{2, 1}, {3, 1}, {4, 1}}) == 2);
  CHECK(riemann_hurwitz_chi(24, 2, {}) == 48);
  CHECK(riemann_hurwitz_chi(24, 2, {{4, 2}}) == 12);
  CHECK(riemann_hurwitz_chi(1, 2, {}) == 2);
  bool thrown = false;
  try {
    riemann_hurwitz_chi(24, 2, {{5, 1}});
  } catch (const Error& e) {
    thrown = e.code() == ErrorCode::NonDivisible;
  }
  CHECK(thrown);
}

TEST_CASE("Riemann-Hurwitz predicts the doubled-Platonic meshes") {
  // The quotient of the doubled surface is a sphere. Every non-neck ray crosses each sheet once,
  // giving two branch points per axis class downstairs; the neck rays run through the holes.
  FamilyConfig cfg;
  cfg.refinement = 2;
  for (const std::string& id : scheme_ids()) {
    CAPTURE(id);
    const PlatonicScheme s = make_scheme(id);
    BranchData branch;
    for (const auto& cls : s.group.axes) {
      bool neck = false;
      for (const Vec3& r : cls.rays) neck |= (r - s.neck_rays.front()).norm() < 1e-9;
      if (!neck) branch.push_back({cls.isotropy_order, 2});
    }
    const int chi = riemann_hurwitz_chi(s.group.order(), 2, branch);
    const TopologyReport census = validate(doubled_family(s, 0.6, 0.5, cfg).mesh);
    CHECK(chi == census.euler_char);
    CHECK(chi == 2 - 2 * s.expected_genus);
  }
}

TEST_CASE("singular set distance") {
  const RotationGroup o = build_group(GroupName::octahedral());
  CHECK(singular_set_distance(make_octasphere(3, 2.0), o) < 1e-12);

  // A small patch in the plane z = 1 whose nearest point to the z axis is (0.3, 0, 1).
  std::vector<Vec3> v = make_plane_patch(4, 0.2).vertices();
  for (auto& x : v) x += Vec3(0.4, 0.0, 1.0);
  const TriMesh patch(v, make_plane_patch(4, 0.2).triangles());
  CHECK(singular_set_distance(patch, o) == doctest::Approx(0.3).epsilon(1e-12));

  // Tube of radius 0.5 around the z axis for 1 <= z <= 2, clear of the origin and of every ray.
  const TriMesh tube = make_cylinder(0.5, 0.5, 32, 8);
  std::vector<Vec3> w = tube.vertices();
  for (auto& x : w) x.z() += 1.5;
  double brute = 1e300;
  for (const auto& cls : o.axes)
    for (const Vec3& r : cls.rays)
      for (const Vec3& x : w) brute = std::min(brute, (x - std::max(0.0, x.dot(r)) * r).norm());
  const double d = singular_set_distance(TriMesh(w, tube.triangles()), o);
  CHECK(d > 0.3);
  CHECK(d == doctest::Approx(brute).epsilon(1e-12));
}
