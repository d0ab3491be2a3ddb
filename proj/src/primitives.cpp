#include "shrinker/primitives.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

namespace shrinker {

TriMesh make_tetrahedron() {
  const double s = 1.0 / std::sqrt(3.0);
  std::vector<Vec3> V = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  std::vector<Triangle> T = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return TriMesh(std::move(V), std::move(T));
}

TriMesh make_icosphere(int level, double radius) {
  const double p = std::numbers::phi;
  std::vector<Vec3> V = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                         {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  for (auto& v : V) v *= radius / v.norm();
  std::vector<Triangle> T = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  TriMesh mesh = TriMesh(std::move(V), std::move(T)).with_sphere_projection(radius);
  for (int i = 0; i < level; ++i) mesh = refine(mesh);
  return mesh;
}

TriMesh make_octasphere(int level, double radius) {
  std::vector<Vec3> V = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (auto& v : V) v *= radius;
  std::vector<Triangle> T = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  TriMesh mesh = TriMesh(std::move(V), std::move(T)).with_sphere_projection(radius);
  for (int i = 0; i < level; ++i) mesh = refine(mesh);
  return mesh;
}

TriMesh make_plane_patch(int n, double size) {
  std::vector<Vec3> V;
  std::vector<Triangle> T;
  const double h = size / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) V.emplace_back(-0.5 * size + i * h, -0.5 * size + j * h, 0.0);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // Alternate the diagonal so the patch has no preferred direction.
      if ((i + j) % 2 == 0) {
        T.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        T.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      } else {
        T.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
        T.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
  return TriMesh(std::move(V), std::move(T));
}

TriMesh make_disc(double radius, int rings, int sectors) {
  std::vector<Vec3> V = {Vec3::Zero()};
  std::vector<Triangle> T;
  for (int r = 1; r <= rings; ++r) {
    const double rad = radius * r / rings;
    for (int k = 0; k < sectors; ++k) {
      const double a = 2.0 * std::numbers::pi * (k + 0.5 * (r % 2)) / sectors;
      V.emplace_back(rad * std::cos(a), rad * std::sin(a), 0.0);
    }
  }
  auto id = [sectors](int r, int k) { return r == 0 ? 0 : 1 + (r - 1) * sectors + ((k % sectors) + sectors) % sectors; };
  for (int k = 0; k < sectors; ++k) T.push_back({0, id(1, k), id(1, k + 1)});
  for (int r = 1; r < rings; ++r)
    for (int k = 0; k < sectors; ++k) {
      // Odd rings are rotated by half a sector relative to even rings.
      if (r % 2 == 1) {
        T.push_back({id(r, k), id(r + 1, k), id(r + 1, k + 1)});
        T.push_back({id(r, k), id(r + 1, k + 1), id(r, k + 1)});
      } else {
        T.push_back({id(r, k), id(r + 1, k - 1), id(r + 1, k)});
        T.push_back({id(r, k), id(r + 1, k), id(r, k + 1)});
      }
    }
  return TriMesh(std::move(V), std::move(T));
}

TriMesh make_cylinder(double radius, double half_length, int sectors, int rings) {
  std::vector<Vec3> V;
  std::vector<Triangle> T;
  for (int r = 0; r <= rings; ++r) {
    const double z = -half_length + 2.0 * half_length * r / rings;
    for (int k = 0; k < sectors; ++k) {
      const double a = 2.0 * std::numbers::pi * (k + 0.5 * (r % 2)) / sectors;
      V.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
    }
  }
  auto id = [sectors](int r, int k) { return r * sectors + ((k % sectors) + sectors) % sectors; };
  for (int r = 0; r < rings; ++r)
    for (int k = 0; k < sectors; ++k) {
      if (r % 2 == 0) {
        T.push_back({id(r, k), id(r, k + 1), id(r + 1, k)});
        T.push_back({id(r, k + 1), id(r + 1, k + 1), id(r + 1, k)});
      } else {
        T.push_back({id(r, k), id(r + 1, k + 1), id(r + 1, k)});
        T.push_back({id(r, k), id(r, k + 1), id(r + 1, k + 1)});
      }
    }
  return TriMesh(std::move(V), std::move(T));
}

TriMesh make_jittered_torus(double major, double minor, int n, int m, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  std::vector<Vec3> V;
  std::vector<Triangle> T;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * std::numbers::pi * i / n, b = 2.0 * std::numbers::pi * j / m;
      Vec3 p((major + minor * std::cos(b)) * std::cos(a), (major + minor * std::cos(b)) * std::sin(a),
             minor * std::sin(b));
      V.push_back(p + Vec3(u(rng), u(rng), u(rng)));
    }
  auto id = [n, m](int i, int j) { return ((i % n) * m) + (j % m); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      T.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      T.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return TriMesh(std::move(V), std::move(T));
}

}  // namespace shrinker
