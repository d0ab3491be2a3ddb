#include "shrinker/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "shrinker/error.hpp"
#include "shrinker/point_index.hpp"

namespace shrinker {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMesh: return "InvalidMesh";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::OrientationConflict: return "OrientationConflict";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::OpenBoundary: return "OpenBoundary";
    case ErrorCode::ZeroNormal: return "ZeroNormal";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::MissingOrbitTags: return "MissingOrbitTags";
    case ErrorCode::NonDivisible: return "NonDivisible";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::GenusChanged: return "GenusChanged";
    case ErrorCode::MeshQualityCollapse: return "MeshQualityCollapse";
    case ErrorCode::MaxIterations: return "MaxIterations";
  }
  return "Unknown";
}

int OrbitTags::orbit_size(int o) const {
  std::vector<int> row = image[o];
  std::sort(row.begin(), row.end());
  return static_cast<int>(std::unique(row.begin(), row.end()) - row.begin());
}

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {}

TriMesh TriMesh::with_vertices(std::vector<Vec3> vertices) const {
  if (vertices.size() != vertices_.size())
    throw Error(ErrorCode::InvalidMesh, "with_vertices: vertex count mismatch");
  TriMesh out = *this;
  out.vertices_ = std::move(vertices);
  return out;
}

TriMesh TriMesh::with_orbit_tags(OrbitTags tags) const {
  if (tags.orbit_of.size() != vertices_.size())
    throw Error(ErrorCode::MissingOrbitTags, "orbit tags do not cover every vertex");
  TriMesh out = *this;
  out.tags_ = std::make_shared<const OrbitTags>(std::move(tags));
  return out;
}

TriMesh TriMesh::with_sphere_projection(std::optional<double> radius) const {
  TriMesh out = *this;
  out.sphere_radius_ = radius;
  return out;
}

TriMesh TriMesh::without_orbit_tags() const {
  TriMesh out = *this;
  out.tags_.reset();
  return out;
}

TriMesh TriMesh::flipped() const {
  TriMesh out = *this;
  for (auto& t : out.triangles_) std::swap(t[1], t[2]);
  return out;
}

double TriMesh::bounding_box_diagonal() const {
  if (vertices_.empty()) return 0.0;
  Vec3 lo = vertices_.front(), hi = vertices_.front();
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace

TopologyReport validate(const TriMesh& mesh, bool allow_boundary) {
  if (mesh.triangle_count() < 1) throw Error(ErrorCode::InvalidMesh, "mesh has no triangles");
  const auto& V = mesh.vertices();
  const int nv = mesh.vertex_count();

  std::vector<bool> referenced(nv, false);
  for (int f = 0; f < mesh.triangle_count(); ++f) {
    const auto& t = mesh.triangles()[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv)
        throw Error(ErrorCode::InvalidMesh, "triangle " + std::to_string(f) + " index out of range");
      referenced[t[k]] = true;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw Error(ErrorCode::DegenerateTriangle, "triangle " + std::to_string(f) + " repeats a vertex");
  }
  for (int v = 0; v < nv; ++v)
    if (!referenced[v])
      throw Error(ErrorCode::InvalidMesh, "vertex " + std::to_string(v) + " is unreferenced");

  const double diag = mesh.bounding_box_diagonal();
  const double min_area = 1e-14 * diag * diag;
  for (int f = 0; f < mesh.triangle_count(); ++f) {
    const auto& t = mesh.triangles()[f];
    if (!(tri_area(V[t[0]], V[t[1]], V[t[2]]) >= min_area))
      throw Error(ErrorCode::DegenerateTriangle, "triangle " + std::to_string(f) + " has near-zero area");
  }

  // Directed half-edge multiplicities per undirected edge.
  struct EdgeUse {
    int forward = 0;  // occurrences as (min, max)
    int backward = 0;
  };
  std::unordered_map<std::uint64_t, EdgeUse> uses;
  uses.reserve(mesh.triangle_count() * 2);
  for (const auto& t : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      auto& u = uses[edge_key(a, b)];
      (a < b ? u.forward : u.backward)++;
    }
  }

  TopologyReport rep;
  DisjointSets boundary_sets(nv);
  std::vector<bool> boundary_vertex(nv, false);
  for (const auto& [key, u] : uses) {
    const int total = u.forward + u.backward;
    const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
    if (total > 2)
      throw Error(ErrorCode::NonManifoldEdge,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") in " +
                      std::to_string(total) + " triangles");
    if (total == 2 && (u.forward != 1 || u.backward != 1))
      throw Error(ErrorCode::OrientationConflict,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") traversed twice in one direction");
    if (total == 1) {
      if (!allow_boundary)
        throw Error(ErrorCode::OpenBoundary,
                    "edge (" + std::to_string(a) + "," + std::to_string(b) + ") is a boundary edge");
      boundary_sets.unite(a, b);
      boundary_vertex[a] = boundary_vertex[b] = true;
    }
  }

  DisjointSets comp(nv);
  for (const auto& t : mesh.triangles()) {
    comp.unite(t[0], t[1]);
    comp.unite(t[1], t[2]);
  }
  for (int v = 0; v < nv; ++v) {
    if (comp.find(v) == v) ++rep.components;
    if (boundary_vertex[v] && boundary_sets.find(v) == v) ++rep.boundary_loops;
  }

  rep.vertices = nv;
  rep.edges = static_cast<int>(uses.size());
  rep.faces = mesh.triangle_count();
  rep.euler_char = rep.vertices - rep.edges + rep.faces;
  rep.genus = (2 * rep.components - rep.boundary_loops - rep.euler_char) / 2;
  rep.orientable = true;
  return rep;
}

TriMesh refine(const TriMesh& mesh) {
  std::vector<Vec3> V = mesh.vertices();
  std::vector<Triangle> T;
  T.reserve(mesh.triangle_count() * 4);
  std::unordered_map<std::uint64_t, int> midpoint;
  const auto proj = mesh.sphere_projection();
  auto mid = [&](int a, int b) {
    auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), static_cast<int>(V.size()));
    if (inserted) {
      Vec3 m = 0.5 * (V[a] + V[b]);
      if (proj) m *= *proj / m.norm();
      V.push_back(m);
    }
    return it->second;
  };
  for (const auto& t : mesh.triangles()) {
    const int ab = mid(t[0], t[1]);
    const int bc = mid(t[1], t[2]);
    const int ca = mid(t[2], t[0]);
    T.push_back({t[0], ab, ca});
    T.push_back({t[1], bc, ab});
    T.push_back({t[2], ca, bc});
    T.push_back({ab, bc, ca});
  }
  TriMesh out = TriMesh(std::move(V), std::move(T)).with_sphere_projection(proj);
  if (const auto* tags = mesh.orbit_tags()) {
    double scale = std::max(1.0, out.bounding_box_diagonal());
    out = out.with_orbit_tags(assign_orbit_tags(out.vertices(), tags->elements, 1e-9 * scale));
  }
  return out;
}

std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
  const auto& V = mesh.vertices();
  std::vector<Vec3> N(V.size(), Vec3::Zero());
  std::vector<double> scale(V.size(), 0.0);
  for (const auto& t : mesh.triangles()) {
    // |cross| = 2 * area, so this is the area-weighted sum.
    const Vec3 n = (V[t[1]] - V[t[0]]).cross(V[t[2]] - V[t[0]]);
    const double a = n.norm();
    for (int k = 0; k < 3; ++k) {
      N[t[k]] += n;
      scale[t[k]] += a;
    }
  }
  for (std::size_t v = 0; v < V.size(); ++v) {
    const double len = N[v].norm();
    if (!(len > 1e-12 * scale[v]) || len == 0.0)
      throw Error(ErrorCode::ZeroNormal, "vertex " + std::to_string(v) + " has cancelling normals");
    N[v] /= len;
  }
  return N;
}

std::vector<double> triangle_areas(const TriMesh& mesh) {
  const auto& V = mesh.vertices();
  std::vector<double> out;
  out.reserve(mesh.triangle_count());
  for (const auto& t : mesh.triangles()) out.push_back(tri_area(V[t[0]], V[t[1]], V[t[2]]));
  return out;
}

double total_area(const TriMesh& mesh) {
  double s = 0.0;
  for (double a : triangle_areas(mesh)) s += a;
  return s;
}

double min_triangle_quality(const TriMesh& mesh) {
  const auto& V = mesh.vertices();
  double q = 1.0;
  for (const auto& t : mesh.triangles()) {
    const double l2 = (V[t[0]] - V[t[1]]).squaredNorm() + (V[t[1]] - V[t[2]]).squaredNorm() +
                      (V[t[2]] - V[t[0]]).squaredNorm();
    const double a = tri_area(V[t[0]], V[t[1]], V[t[2]]);
    q = std::min(q, l2 > 0 ? 4.0 * std::sqrt(3.0) * a / l2 : 0.0);
  }
  return q;
}

TriMesh weld(std::vector<Vec3> vertices, std::vector<Triangle> triangles, double tol) {
  PointIndex index(tol);
  std::vector<int> remap(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) remap[i] = index.find_or_insert(vertices[i]);
  std::vector<Triangle> out;
  out.reserve(triangles.size());
  for (auto t : triangles) {
    for (auto& i : t) i = remap[i];
    // Collapsed triangles vanish.
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
    out.push_back(t);
  }
  // Drop vertices that only belonged to collapsed triangles.
  std::vector<int> used(index.points().size(), -1);
  std::vector<Vec3> V;
  for (auto& t : out)
    for (auto& i : t) {
      if (used[i] < 0) {
        used[i] = static_cast<int>(V.size());
        V.push_back(index.points()[i]);
      }
      i = used[i];
    }
  return TriMesh(std::move(V), std::move(out));
}

TriMesh weld(std::span<const TriMesh> parts, double tol) {
  std::vector<Vec3> V;
  std::vector<Triangle> T;
  for (const auto& p : parts) {
    const int base = static_cast<int>(V.size());
    V.insert(V.end(), p.vertices().begin(), p.vertices().end());
    for (auto t : p.triangles()) T.push_back({t[0] + base, t[1] + base, t[2] + base});
  }
  return weld(std::move(V), std::move(T), tol);
}

OrbitTags assign_orbit_tags(std::span<const Vec3> vertices, std::span<const Mat3> elements, double tol) {
  if (elements.empty() || !elements[0].isIdentity(1e-12))
    throw Error(ErrorCode::MissingOrbitTags, "group element list must start with the identity");
  PointIndex index(tol);
  for (const auto& v : vertices) index.insert(v);

  OrbitTags tags;
  tags.elements.assign(elements.begin(), elements.end());
  tags.orbit_of.assign(vertices.size(), -1);
  tags.element_of.assign(vertices.size(), -1);
  for (int v = 0; v < static_cast<int>(vertices.size()); ++v) {
    if (tags.orbit_of[v] >= 0) continue;
    const int o = tags.orbit_count();
    tags.representatives.push_back(v);
    std::vector<int> row(elements.size());
    for (std::size_t g = 0; g < elements.size(); ++g) {
      auto hit = index.find(elements[g] * vertices[v]);
      if (!hit)
        throw Error(ErrorCode::MissingOrbitTags,
                    "vertex " + std::to_string(v) + " has no image under group element " + std::to_string(g));
      const int w = *hit;
      if (tags.orbit_of[w] >= 0 && tags.orbit_of[w] != o)
        throw Error(ErrorCode::MissingOrbitTags, "orbits overlap; vertex set is not group invariant");
      if (tags.orbit_of[w] < 0) {
        tags.orbit_of[w] = o;
        tags.element_of[w] = static_cast<int>(g);
      }
      row[g] = w;
    }
    tags.image.push_back(std::move(row));
  }
  return tags;
}

MeshConnectivity build_connectivity(const TriMesh& mesh) {
  MeshConnectivity c;
  const int nv = mesh.vertex_count();
  c.neighbors.resize(nv);
  c.vertex_triangles.resize(nv);
  c.on_boundary.assign(nv, false);
  std::unordered_map<std::uint64_t, int> index;
  for (int f = 0; f < mesh.triangle_count(); ++f) {
    const auto& t = mesh.triangles()[f];
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3], apex = t[(k + 2) % 3];
      c.vertex_triangles[a].push_back(f);
      auto [it, inserted] = index.try_emplace(edge_key(a, b), static_cast<int>(c.edges.size()));
      if (inserted) {
        c.edges.push_back({a, b, apex, -1});
        c.neighbors[a].push_back(b);
        c.neighbors[b].push_back(a);
      } else {
        auto& e = c.edges[it->second];
        e.opposite1 = apex;
      }
    }
  }
  for (const auto& e : c.edges)
    if (e.opposite1 < 0) c.on_boundary[e.v0] = c.on_boundary[e.v1] = true;
  return c;
}

}  // namespace shrinker
