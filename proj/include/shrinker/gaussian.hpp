#pragma once

#include <span>
#include <vector>

#include "shrinker/mesh.hpp"

namespace shrinker {

enum class CurvatureScheme { Cotangent, QuadraticFit };

struct GaussKernelConfig {
  int quadrature_order = 3;  // points per triangle: 1, 3 or 6
  CurvatureScheme curvature_scheme = CurvatureScheme::Cotangent;
};

/// Gaussian weight e^{-|x|^2/4}.
double gaussian_weight(const Vec3& x);

/// F(mesh) = (1/4pi) * sum_T sum_q w_q area(T) e^{-|x_q|^2/4}.
double gaussian_area(const TriMesh& mesh, const GaussKernelConfig& cfg = {});

/// Exact gradient of gaussian_area with respect to every vertex position.
std::vector<Vec3> gaussian_area_gradient(const TriMesh& mesh, const GaussKernelConfig& cfg = {});

/// Mixed Voronoi dual areas (obtuse triangles split 1/2, 1/4, 1/4).
std::vector<double> dual_areas(const TriMesh& mesh);

/// Per-vertex mean curvature, H = kappa1 + kappa2, positive on a sphere with outward normals.
std::vector<double> mean_curvature(const TriMesh& mesh, const GaussKernelConfig& cfg = {});

struct ResidualField {
  std::vector<double> r;       // H_i - <x_i, nu_i>/2
  std::vector<double> weight;  // Gaussian-weighted dual area, normalised by 1/4pi
  double l2_norm = 0.0;
  double linf_norm = 0.0;
};

ResidualField shrinker_residual(const TriMesh& mesh, const GaussKernelConfig& cfg = {});

/// Cotangent-scheme quantities at one vertex, computed from its incident triangles only.
struct VertexGeometry {
  Vec3 normal = Vec3::Zero();
  double dual_area = 0.0;
  double mean_curvature = 0.0;
  /// H - <x, nu>/2
  double residual = 0.0;
};

VertexGeometry cotangent_vertex_geometry(std::span<const Vec3> positions, std::span<const Triangle> triangles,
                                         const MeshConnectivity& conn, int v);

}  // namespace shrinker
