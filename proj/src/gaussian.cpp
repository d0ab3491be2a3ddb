#include "shrinker/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include <Eigen/Dense>

#include "shrinker/error.hpp"

namespace shrinker {

namespace {

constexpr double kInv4Pi = 1.0 / (4.0 * std::numbers::pi);

struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};

std::vector<QuadPoint> quadrature_rule(int order) {
  switch (order) {
    case 1:
      return {{{1.0 / 3, 1.0 / 3, 1.0 / 3}, 1.0}};
    case 3:
      return {{{2.0 / 3, 1.0 / 6, 1.0 / 6}, 1.0 / 3},
              {{1.0 / 6, 2.0 / 3, 1.0 / 6}, 1.0 / 3},
              {{1.0 / 6, 1.0 / 6, 2.0 / 3}, 1.0 / 3}};
    case 6: {
      // Dunavant degree-4 rule.
      const double a = 0.445948490915965, wa = 0.223381589678011;
      const double b = 0.091576213509771, wb = 0.109951743655322;
      return {{{1 - 2 * a, a, a}, wa}, {{a, 1 - 2 * a, a}, wa}, {{a, a, 1 - 2 * a}, wa},
              {{1 - 2 * b, b, b}, wb}, {{b, 1 - 2 * b, b}, wb}, {{b, b, 1 - 2 * b}, wb}};
    }
    default:
      throw Error(ErrorCode::InvalidParams, "quadrature_order must be 1, 3 or 6");
  }
}

// Neumaier compensated sum, keeps reductions reproducible to the last bits regardless of magnitude mix.
struct CompensatedSum {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) c += (sum - t) + x;
    else c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

double cot(const Vec3& u, const Vec3& w) {
  return u.dot(w) / u.cross(w).norm();
}

}  // namespace

double gaussian_weight(const Vec3& x) { return std::exp(-0.25 * x.squaredNorm()); }

double gaussian_area(const TriMesh& mesh, const GaussKernelConfig& cfg) {
  const auto rule = quadrature_rule(cfg.quadrature_order);
  const auto& V = mesh.vertices();
  CompensatedSum total;
  for (const auto& t : mesh.triangles()) {
    const Vec3 &p0 = V[t[0]], &p1 = V[t[1]], &p2 = V[t[2]];
    const double area = 0.5 * (p1 - p0).cross(p2 - p0).norm();
    double s = 0.0;
    for (const auto& q : rule) s += q.weight * gaussian_weight(q.bary[0] * p0 + q.bary[1] * p1 + q.bary[2] * p2);
    total.add(area * s);
  }
  return kInv4Pi * total.value();
}

std::vector<Vec3> gaussian_area_gradient(const TriMesh& mesh, const GaussKernelConfig& cfg) {
  const auto rule = quadrature_rule(cfg.quadrature_order);
  const auto& V = mesh.vertices();
  std::vector<Vec3> grad(V.size(), Vec3::Zero());
  for (const auto& t : mesh.triangles()) {
    const Vec3 p[3] = {V[t[0]], V[t[1]], V[t[2]]};
    const Vec3 n = (p[1] - p[0]).cross(p[2] - p[0]);
    const double nn = n.norm();
    if (nn == 0.0) continue;
    const Vec3 nhat = n / nn;
    const double area = 0.5 * nn;
    // dA/dp_i = (p_{i+1} - p_{i+2}) x nhat / 2
    const Vec3 dA[3] = {0.5 * (p[1] - p[2]).cross(nhat), 0.5 * (p[2] - p[0]).cross(nhat),
                        0.5 * (p[0] - p[1]).cross(nhat)};
    double wsum = 0.0;
    Vec3 dw[3] = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    for (const auto& q : rule) {
      const Vec3 x = q.bary[0] * p[0] + q.bary[1] * p[1] + q.bary[2] * p[2];
      const double g = gaussian_weight(x);
      wsum += q.weight * g;
      // d/dp_i e^{-|x|^2/4} = -lambda_i x/2 e^{-|x|^2/4}
      for (int i = 0; i < 3; ++i) dw[i] += q.weight * q.bary[i] * (-0.5 * g) * x;
    }
    for (int i = 0; i < 3; ++i) grad[t[i]] += kInv4Pi * (dA[i] * wsum + area * dw[i]);
  }
  return grad;
}

std::vector<double> dual_areas(const TriMesh& mesh) {
  const auto& V = mesh.vertices();
  std::vector<double> A(V.size(), 0.0);
  for (const auto& t : mesh.triangles()) {
    const Vec3 p[3] = {V[t[0]], V[t[1]], V[t[2]]};
    const double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
    double c[3];
    bool obtuse = false;
    for (int k = 0; k < 3; ++k) {
      c[k] = cot(p[(k + 1) % 3] - p[k], p[(k + 2) % 3] - p[k]);
      obtuse |= c[k] < 0.0;
    }
    for (int k = 0; k < 3; ++k) {
      const int j = (k + 1) % 3, l = (k + 2) % 3;
      if (obtuse) A[t[k]] += c[k] < 0.0 ? 0.5 * area : 0.25 * area;
      else A[t[k]] += ((p[j] - p[k]).squaredNorm() * c[l] + (p[l] - p[k]).squaredNorm() * c[j]) / 8.0;
    }
  }
  return A;
}

VertexGeometry cotangent_vertex_geometry(std::span<const Vec3> X, std::span<const Triangle> triangles,
                                         const MeshConnectivity& conn, int v) {
  VertexGeometry g;
  Vec3 laplace = Vec3::Zero();
  const Vec3& x = X[v];
  for (int f : conn.vertex_triangles[v]) {
    const auto& t = triangles[f];
    const int k = t[0] == v ? 0 : (t[1] == v ? 1 : 2);
    const Vec3& a = X[t[(k + 1) % 3]];
    const Vec3& b = X[t[(k + 2) % 3]];
    const Vec3 n = (a - x).cross(b - x);
    const double area = 0.5 * n.norm();
    g.normal += n;
    const double cot_v = cot(a - x, b - x);
    const double cot_a = cot(x - a, b - a);
    const double cot_b = cot(x - b, a - b);
    laplace += cot_b * (x - a) + cot_a * (x - b);
    if (cot_v < 0.0) g.dual_area += 0.5 * area;
    else if (cot_a < 0.0 || cot_b < 0.0) g.dual_area += 0.25 * area;
    else g.dual_area += ((a - x).squaredNorm() * cot_b + (b - x).squaredNorm() * cot_a) / 8.0;
  }
  const double len = g.normal.norm();
  if (len == 0.0) throw Error(ErrorCode::ZeroNormal, "vertex " + std::to_string(v) + " has cancelling normals");
  g.normal /= len;
  g.mean_curvature = laplace.dot(g.normal) / (2.0 * g.dual_area);
  g.residual = g.mean_curvature - 0.5 * x.dot(g.normal);
  return g;
}

namespace {

std::vector<double> quadratic_fit_curvature(const TriMesh& mesh) {
  const auto conn = build_connectivity(mesh);
  const auto N = vertex_normals(mesh);
  const auto& X = mesh.vertices();
  std::vector<double> H(X.size());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    // Two-ring stencil.
    std::unordered_set<int> ring(conn.neighbors[v].begin(), conn.neighbors[v].end());
    for (int w : conn.neighbors[v]) ring.insert(conn.neighbors[w].begin(), conn.neighbors[w].end());
    ring.erase(v);
    std::vector<int> stencil(ring.begin(), ring.end());
    std::sort(stencil.begin(), stencil.end());

    const Vec3& n = N[v];
    const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = n.cross(seed).normalized();
    const Vec3 e2 = n.cross(e1);
    double scale = 0.0;
    for (int w : conn.neighbors[v]) scale += (X[w] - X[v]).norm();
    scale /= std::max<std::size_t>(1, conn.neighbors[v].size());

    Eigen::MatrixXd A(stencil.size(), 5);
    Eigen::VectorXd b(stencil.size());
    for (std::size_t i = 0; i < stencil.size(); ++i) {
      const Vec3 d = (X[stencil[i]] - X[v]) / scale;
      const double u = d.dot(e1), w = d.dot(e2);
      A.row(i) << u * u, u * w, w * w, u, w;
      b(i) = d.dot(n);
    }
    if (stencil.size() < 5)
      throw Error(ErrorCode::IllConditionedFit, "vertex " + std::to_string(v) + " has fewer than 5 stencil points");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (!(s(4) > 1e-8 * s(0)))
      throw Error(ErrorCode::IllConditionedFit, "vertex " + std::to_string(v) + " stencil is near-degenerate");
    const Eigen::VectorXd c = svd.solve(b);
    // Graph z = f(u, w) in units of `scale`; derivatives rescaled back.
    const double fuu = 2.0 * c(0) / scale, fuw = c(1) / scale, fww = 2.0 * c(2) / scale;
    const double fu = c(3), fw = c(4);
    const double num = (1 + fw * fw) * fuu - 2 * fu * fw * fuw + (1 + fu * fu) * fww;
    // Outward normal: a convex surface bends away from n, so the trace is minus the graph Laplacian.
    H[v] = -num / std::pow(1 + fu * fu + fw * fw, 1.5);
  }
  return H;
}

}  // namespace

std::vector<double> mean_curvature(const TriMesh& mesh, const GaussKernelConfig& cfg) {
  if (cfg.curvature_scheme == CurvatureScheme::QuadraticFit) return quadratic_fit_curvature(mesh);
  const auto conn = build_connectivity(mesh);
  std::vector<double> H(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v)
    H[v] = cotangent_vertex_geometry(mesh.vertices(), mesh.triangles(), conn, v).mean_curvature;
  return H;
}

ResidualField shrinker_residual(const TriMesh& mesh, const GaussKernelConfig& cfg) {
  const auto conn = build_connectivity(mesh);
  const auto& X = mesh.vertices();
  ResidualField out;
  out.r.resize(X.size());
  out.weight.resize(X.size());
  std::vector<double> fit_h;
  if (cfg.curvature_scheme == CurvatureScheme::QuadraticFit) fit_h = quadratic_fit_curvature(mesh);
  CompensatedSum l2;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const auto g = cotangent_vertex_geometry(X, mesh.triangles(), conn, v);
    out.r[v] = fit_h.empty() ? g.residual : fit_h[v] - 0.5 * X[v].dot(g.normal);
    out.weight[v] = kInv4Pi * g.dual_area * gaussian_weight(X[v]);
    l2.add(out.weight[v] * out.r[v] * out.r[v]);
    out.linf_norm = std::max(out.linf_norm, std::abs(out.r[v]));
  }
  out.l2_norm = std::sqrt(l2.value());
  return out;
}

}  // namespace shrinker
