#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shrinker/error.hpp"
#include "shrinker/gaussian.hpp"
#include "shrinker/primitives.hpp"

using namespace shrinker;

namespace {

// F of the origin-centred sphere of radius r: (1/4pi) * 4 pi r^2 * e^{-r^2/4}.
double sphere_F(double r) { return r * r * std::exp(-r * r / 4.0); }

TriMesh translated(const TriMesh& m, const Vec3& d) {
  std::vector<Vec3> v = m.vertices();
  for (auto& x : v) x += d;
  return TriMesh(v, m.triangles());
}

TriMesh rotated(const TriMesh& m, const Mat3& R) {
  std::vector<Vec3> v = m.vertices();
  for (auto& x : v) x = R * x;
  return TriMesh(v, m.triangles());
}

double max_edge(const TriMesh& m) {
  double h = 0.0;
  for (const auto& t : m.triangles())
    for (int k = 0; k < 3; ++k) h = std::max(h, (m.vertices()[t[k]] - m.vertices()[t[(k + 1) % 3]]).norm());
  return h;
}

bool interior(const Vec3& x, double half) { return std::abs(x.x()) < half && std::abs(x.y()) < half; }

}  // namespace

TEST_CASE("sphere gaussian area matches the closed form") {
  for (double r : {1.0, 2.0, 4.0}) {
    const double F = gaussian_area(make_icosphere(4, r));
    CHECK(std::abs(F / sphere_F(r) - 1.0) < 5e-3);
  }
  CHECK(sphere_F(2.0) == doctest::Approx(1.47152).epsilon(1e-5));
}

TEST_CASE("flat disc through the origin has F = 1") {
  const double F = gaussian_area(make_disc(20.0, 400, 512));
  CHECK(std::abs(F - 1.0) < 1e-6);
}

TEST_CASE("higher quadrature order is closer on a coarse sphere") {
  const TriMesh s = make_icosphere(2, 2.0);
  const double exact = sphere_F(2.0);
  GaussKernelConfig one, three;
  one.quadrature_order = 1;
  three.quadrature_order = 3;
  CHECK(std::abs(gaussian_area(s, three) - exact) <= std::abs(gaussian_area(s, one) - exact));
}

TEST_CASE("gaussian area is rotation invariant") {
  std::mt19937_64 rng(7);
  const TriMesh m = make_jittered_torus(1.8, 0.6, 14, 9, 0.05, 11);
  const double F = gaussian_area(m);
  for (int k = 0; k < 5; ++k) {
    Eigen::Vector4d q = Eigen::Vector4d::NullaryExpr([&] { return std::normal_distribution<>(0, 1)(rng); });
    const Mat3 R = Eigen::Quaterniond(q.normalized()).toRotationMatrix();
    CHECK(std::abs(gaussian_area(rotated(m, R)) - F) <= 1e-13 * F);
  }
}

TEST_CASE("gradient matches central differences") {
  // Only the triangles around v depend on x_v, so differencing F over that star is exact and keeps
  // cancellation error far below the tolerance, even for tiny components.
  const double h = 1e-6;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    // 10 x 10 grid: 200 triangles.
    const TriMesh m = make_jittered_torus(1.5 + 0.05 * seed, 0.7, 10, 10, 0.08, seed);
    REQUIRE(m.triangle_count() == 200);
    std::vector<std::vector<Triangle>> star(m.vertex_count());
    for (const auto& t : m.triangles())
      for (int v : t) star[v].push_back(t);
    for (int order : {1, 3, 6}) {
      GaussKernelConfig cfg;
      cfg.quadrature_order = order;
      const auto g = gaussian_area_gradient(m, cfg);
      double worst = 0.0;
      for (int v = 0; v < m.vertex_count(); ++v)
        for (int c = 0; c < 3; ++c) {
          std::vector<Vec3> p = m.vertices(), q = m.vertices();
          p[v][c] += h;
          q[v][c] -= h;
          const double fd = (gaussian_area(TriMesh(p, star[v]), cfg) - gaussian_area(TriMesh(q, star[v]), cfg)) / (2 * h);
          worst = std::max(worst, std::abs(g[v][c] - fd) / std::abs(fd));
        }
      CHECK(worst <= 1e-5);
    }
  }
}

TEST_CASE("gradient vanishes far from the origin") {
  const TriMesh far = translated(make_icosphere(2, 1.0), Vec3(40, 0, 0));
  double n = 0.0;
  for (const Vec3& g : gaussian_area_gradient(far)) n += g.squaredNorm();
  CHECK(std::sqrt(n) < 1e-12);
}

TEST_CASE("normal gradient on the radius-2 sphere vanishes under refinement") {
  double prev = 1e300;
  for (int level = 2; level <= 5; ++level) {
    const TriMesh s = make_icosphere(level, 2.0);
    const auto g = gaussian_area_gradient(s);
    const auto a = dual_areas(s);
    const auto n = vertex_normals(s);
    double worst = 0.0;
    for (int v = 0; v < s.vertex_count(); ++v) worst = std::max(worst, std::abs(g[v].dot(n[v])) / a[v]);
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("discrete F(r) peaks at r = 2") {
  double best_r = 0.0, best_F = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double r = 1.9 + 0.002 * i;
    const double F = gaussian_area(make_icosphere(4, r));
    if (F > best_F) best_F = F, best_r = r;
  }
  CHECK(std::abs(best_r - 2.0) <= 0.01);
}

TEST_CASE("mean curvature on model surfaces") {
  for (CurvatureScheme scheme : {CurvatureScheme::Cotangent, CurvatureScheme::QuadraticFit}) {
    CAPTURE(static_cast<int>(scheme));
    GaussKernelConfig cfg;
    cfg.curvature_scheme = scheme;

    for (double H : mean_curvature(make_icosphere(4, 2.0), cfg)) CHECK(std::abs(H - 1.0) < 0.02);

    const TriMesh plane = make_plane_patch(12, 4.0);
    const auto Hp = mean_curvature(plane, cfg);
    for (int v = 0; v < plane.vertex_count(); ++v)
      if (interior(plane.vertices()[v], 1.9)) CHECK(std::abs(Hp[v]) < 1e-10);

    const TriMesh cyl = make_cylinder(std::sqrt(2.0), 3.0, 96, 60);
    const auto Hc = mean_curvature(cyl, cfg);
    for (int v = 0; v < cyl.vertex_count(); ++v)
      if (std::abs(cyl.vertices()[v].z()) < 2.0) CHECK(std::abs(Hc[v] - 1.0 / std::sqrt(2.0)) < 0.02 / std::sqrt(2.0));
  }
}

TEST_CASE("quadratic fit rejects collinear stencils") {
  // A fan whose rim points all lie on one line through the hub.
  const std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 1e-7), Vec3(-1, 0, 1e-7), Vec3(-2, 0, 0)};
  const TriMesh fan(v, {Triangle{0, 1, 2}, Triangle{0, 3, 4}});
  GaussKernelConfig cfg;
  cfg.curvature_scheme = CurvatureScheme::QuadraticFit;
  bool thrown = false;
  try {
    mean_curvature(fan, cfg);
  } catch (const Error& e) {
    thrown = e.code() == ErrorCode::IllConditionedFit || e.code() == ErrorCode::DegenerateTriangle ||
             e.code() == ErrorCode::NonManifoldEdge || e.code() == ErrorCode::InvalidMesh;
  }
  CHECK(thrown);
}

TEST_CASE("shrinker residual") {
  SUBCASE("unit sphere is far from a shrinker") {
    const ResidualField r = shrinker_residual(make_icosphere(4, 1.0));
    for (double x : r.r) CHECK(std::abs(x - 1.5) < 0.03 * 1.5);
  }
  SUBCASE("norms are consistent with the field") {
    const ResidualField r = shrinker_residual(make_jittered_torus(1.5, 0.6, 16, 10, 0.04, 5));
    double ss = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < r.r.size(); ++i) {
      ss += r.weight[i] * r.r[i] * r.r[i];
      mx = std::max(mx, std::abs(r.r[i]));
    }
    CHECK(r.l2_norm * r.l2_norm == doctest::Approx(ss).epsilon(1e-12));
    CHECK(r.linf_norm == mx);
  }
  SUBCASE("plane through the origin") {
    const TriMesh plane = make_plane_patch(12, 4.0);
    const ResidualField r = shrinker_residual(plane);
    for (int v = 0; v < plane.vertex_count(); ++v)
      if (interior(plane.vertices()[v], 1.9)) CHECK(std::abs(r.r[v]) < 1e-10);
  }
  SUBCASE("radius-2 sphere converges at second order") {
    double prev_res = 0.0, prev_h = 0.0;
    for (int level = 2; level <= 5; ++level) {
      const TriMesh s = make_icosphere(level, 2.0);
      const double res = shrinker_residual(s).linf_norm, h = max_edge(s);
      if (level > 2) {
        CHECK(std::log(prev_res / res) / std::log(prev_h / h) >= 1.5);
        CHECK(prev_res / res > 3.0);
      }
      prev_res = res;
      prev_h = h;
    }
  }
}
