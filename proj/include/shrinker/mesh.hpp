#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace shrinker {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Triangle = std::array<int, 3>;

/// Orbit bookkeeping for a vertex set invariant under a finite rotation group.
///
/// Every vertex belongs to exactly one orbit. For orbit `o` with representative
/// vertex `r`, `image[o][g]` is the vertex at `elements[g] * x_r`; vertices with
/// nontrivial stabilizer appear several times in that row.
struct OrbitTags {
  std::vector<Mat3> elements;
  std::vector<int> orbit_of;
  std::vector<int> element_of;
  std::vector<int> representatives;
  std::vector<std::vector<int>> image;

  int orbit_count() const { return static_cast<int>(representatives.size()); }
  int group_order() const { return static_cast<int>(elements.size()); }
  bool is_representative(int v) const { return representatives[orbit_of[v]] == v; }
  /// Number of distinct vertices in orbit `o`.
  int orbit_size(int o) const;
};

/// Indexed, oriented triangle surface. Immutable: geometry changes produce a new mesh
/// that shares connectivity-independent metadata (orbit tags, sphere projection).
class TriMesh {
 public:
  TriMesh() = default;
  TriMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  bool empty() const { return triangles_.empty(); }

  const OrbitTags* orbit_tags() const { return tags_.get(); }
  /// Radius of the origin-centred sphere that refinement projects new vertices onto.
  std::optional<double> sphere_projection() const { return sphere_radius_; }

  TriMesh with_vertices(std::vector<Vec3> vertices) const;
  TriMesh with_orbit_tags(OrbitTags tags) const;
  TriMesh with_sphere_projection(std::optional<double> radius) const;
  TriMesh without_orbit_tags() const;
  /// Reverses the winding of every triangle.
  TriMesh flipped() const;

  double bounding_box_diagonal() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::shared_ptr<const OrbitTags> tags_;
  std::optional<double> sphere_radius_;
};

struct TopologyReport {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int euler_char = 0;
  int genus = 0;
  int boundary_loops = 0;
  int components = 0;
  bool orientable = true;
};

/// Checks manifoldness, orientation and non-degeneracy and returns the topology census.
/// Genus is summed over components: chi = 2c - 2g - b.
TopologyReport validate(const TriMesh& mesh, bool allow_boundary = false);

/// 1-to-4 midpoint subdivision.
TriMesh refine(const TriMesh& mesh);

std::vector<Vec3> vertex_normals(const TriMesh& mesh);
std::vector<double> triangle_areas(const TriMesh& mesh);
double total_area(const TriMesh& mesh);

/// Minimum over triangles of 4*sqrt(3)*area / (sum of squared edge lengths); 1 for equilateral.
double min_triangle_quality(const TriMesh& mesh);

/// Concatenates vertex and triangle lists, then merges vertices closer than `tol`.
TriMesh weld(std::span<const TriMesh> parts, double tol);
TriMesh weld(std::vector<Vec3> vertices, std::vector<Triangle> triangles, double tol);

/// Builds orbit tags for a vertex set that is invariant under `elements` (first element must
/// be the identity). Throws MissingOrbitTags when an image point has no matching vertex.
OrbitTags assign_orbit_tags(std::span<const Vec3> vertices, std::span<const Mat3> elements,
                            double tol);

/// Edge-based adjacency, built once per connectivity.
struct MeshConnectivity {
  struct Edge {
    int v0, v1;
    int opposite0 = -1;  // apex of the triangle containing v0->v1
    int opposite1 = -1;  // apex of the triangle containing v1->v0, -1 on the boundary
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> neighbors;
  std::vector<std::vector<int>> vertex_triangles;
  std::vector<bool> on_boundary;
};

MeshConnectivity build_connectivity(const TriMesh& mesh);

}  // namespace shrinker
