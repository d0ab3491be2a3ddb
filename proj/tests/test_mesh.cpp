#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "shrinker/error.hpp"
#include "shrinker/mesh.hpp"
#include "shrinker/mesh_io.hpp"
#include "shrinker/primitives.hpp"
#include "shrinker/sweepout.hpp"
#include "shrinker/symmetry.hpp"

using namespace shrinker;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "shrinker_test_mesh";
  fs::create_directories(dir);
  return dir / name;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidMesh;
}

TriMesh doubled_cube() {
  FamilyConfig cfg;
  cfg.refinement = 2;
  return doubled_family(make_scheme("o24-z4"), 0.6, 0.5, cfg).mesh;
}

}  // namespace

TEST_CASE("tetrahedron census") {
  const TopologyReport r = validate(make_tetrahedron());
  CHECK(r.vertices == 4);
  CHECK(r.edges == 6);
  CHECK(r.faces == 4);
  CHECK(r.euler_char == 2);
  CHECK(r.genus == 0);
  CHECK(r.components == 1);
}

TEST_CASE("doubled cube has genus five") {
  const TopologyReport r = validate(doubled_cube());
  CHECK(r.euler_char == -8);
  CHECK(r.genus == 5);
}

TEST_CASE("single triangle is a disc") {
  const TriMesh tri({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {Triangle{0, 1, 2}});
  const TopologyReport r = validate(tri, true);
  CHECK(r.euler_char == 1);
  CHECK(r.boundary_loops == 1);
  CHECK(r.genus == 0);
  CHECK(code_of([&] { validate(tri); }) == ErrorCode::OpenBoundary);
}

TEST_CASE("validate rejects bad input") {
  const std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(0, -1, 0)};
  // Three triangles on edge 0-1.
  const TriMesh fan(v, {Triangle{0, 1, 2}, Triangle{1, 0, 3}, Triangle{0, 1, 4}});
  CHECK(code_of([&] { validate(fan, true); }) == ErrorCode::NonManifoldEdge);
  // Two triangles traversing edge 0-1 in the same direction.
  const TriMesh twisted({v[0], v[1], v[2], v[3]}, {Triangle{0, 1, 2}, Triangle{0, 1, 3}});
  CHECK(code_of([&] { validate(twisted, true); }) == ErrorCode::OrientationConflict);
  const TriMesh flat({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)}, {Triangle{0, 1, 2}});
  CHECK(code_of([&] { validate(flat, true); }) == ErrorCode::DegenerateTriangle);
}

TEST_CASE("boundary-corrected genus") {
  // A torus with one triangle removed: chi = -1, one boundary loop, still genus 1.
  const TriMesh torus = make_jittered_torus(2.0, 0.7, 16, 10, 0.0, 1);
  std::vector<Triangle> tris = torus.triangles();
  tris.erase(tris.begin() + 7);
  const TopologyReport r = validate(TriMesh(torus.vertices(), tris), true);
  CHECK(r.euler_char == -1);
  CHECK(r.boundary_loops == 1);
  CHECK(r.genus == 1);
  CHECK(r.genus == (2 * r.components - r.euler_char - r.boundary_loops) / 2);
}

TEST_CASE("refinement multiplies faces by four and keeps chi") {
  const TriMesh ico = refine(refine(refine(make_icosphere(0))));
  CHECK(ico.triangle_count() == 1280);
  CHECK(validate(ico).genus == 0);
  for (const TriMesh& m : {make_tetrahedron(), make_jittered_torus(2.0, 0.6, 12, 8, 0.05, 3), doubled_cube()}) {
    const TopologyReport a = validate(m), b = validate(refine(m));
    CHECK(b.faces == 4 * a.faces);
    CHECK(b.euler_char == a.euler_char);
    CHECK(b.genus == a.genus);
  }
}

TEST_CASE("sphere projection survives refinement") {
  const TriMesh s = refine(make_icosphere(1, 2.0));
  for (const Vec3& x : s.vertices()) CHECK(x.norm() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("orbit tags propagate through refinement") {
  const RotationGroup g = build_group(GroupName::octahedral());
  const TriMesh m = refine(tag_orbits(make_octasphere(1), g));
  REQUIRE(m.orbit_tags() != nullptr);
  CHECK(m.orbit_tags()->group_order() == 24);
  CHECK(symmetry_error(m, g) < 1e-14);
}

TEST_CASE("vertex normals") {
  // Area-weighted normals are first-order accurate: rms within 1e-2 at level 3, every vertex at level 4.
  double prev_worst = 0.0;
  for (int level = 3; level <= 5; ++level) {
    const TriMesh m = make_icosphere(level, 1.5);
    const auto n = vertex_normals(m);
    double worst = 0.0, ss = 0.0;
    for (int v = 0; v < m.vertex_count(); ++v) {
      const double e = (n[v] - m.vertices()[v].normalized()).norm();
      worst = std::max(worst, e);
      ss += e * e;
    }
    if (level == 3) CHECK(std::sqrt(ss / m.vertex_count()) < 1e-2);
    if (level >= 4) CHECK(worst < 1e-2);
    if (level > 3) CHECK(worst < 0.6 * prev_worst);
    prev_worst = worst;
  }

  const TriMesh s = make_icosphere(3, 1.5);
  const auto n = vertex_normals(s);
  for (const Vec3& p : vertex_normals(make_plane_patch(6, 2.0))) CHECK((p - Vec3(0, 0, 1)).norm() < 1e-15);

  const auto f = vertex_normals(s.flipped());
  for (int v = 0; v < s.vertex_count(); ++v) CHECK((f[v] + n[v]).norm() < 1e-15);
}

TEST_CASE("quality of an equilateral triangle is one") {
  const TriMesh tri({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2, 0)}, {Triangle{0, 1, 2}});
  CHECK(min_triangle_quality(tri) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weld merges coincident vertices") {
  const std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 0, 1e-13), Vec3(0, 1, 0), Vec3(1, 1, 0)};
  const TriMesh w = weld(v, {Triangle{0, 1, 2}, Triangle{3, 5, 4}}, 1e-10);
  CHECK(w.vertex_count() == 4);
  CHECK(validate(w, true).boundary_loops == 1);
}

TEST_CASE("orbit tags need an invariant vertex set") {
  const RotationGroup g = build_group(GroupName::octahedral());
  const std::vector<Vec3> pts = {Vec3(1, 0, 0), Vec3(0, 1, 0)};
  CHECK(code_of([&] { assign_orbit_tags(pts, g.elements, 1e-10); }) == ErrorCode::MissingOrbitTags);
}

TEST_CASE("obj and ply round trips") {
  const TriMesh m = doubled_cube();
  const TopologyReport before = validate(m);
  for (const char* ext : {".obj", ".ply"}) {
    const fs::path p = scratch(std::string("roundtrip") + ext);
    write_mesh(m, p);
    const TriMesh back = read_mesh(p);
    REQUIRE(back.vertex_count() == m.vertex_count());
    CHECK(back.triangles() == m.triangles());
    double err = 0.0;
    for (int v = 0; v < m.vertex_count(); ++v) err = std::max(err, (back.vertices()[v] - m.vertices()[v]).norm());
    CHECK(err <= 1e-12);
    const TopologyReport after = validate(back);
    CHECK(after.genus == before.genus);
    CHECK(after.euler_char == before.euler_char);
    CHECK(after.components == before.components);
  }
}

TEST_CASE("reader errors") {
  const fs::path quad = scratch("quad.obj");
  std::ofstream(quad) << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
  CHECK(code_of([&] { read_mesh(quad); }) == ErrorCode::UnsupportedFeature);

  const fs::path empty = scratch("empty.obj");
  std::ofstream(empty).flush();
  CHECK(code_of([&] { read_mesh(empty); }) == ErrorCode::ParseError);

  const fs::path junk = scratch("junk.obj");
  std::ofstream(junk) << "v 0 0 0\nv 1 0 zero\n";
  try {
    read_mesh(junk);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}
