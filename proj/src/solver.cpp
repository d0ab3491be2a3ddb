#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <limits>
#include <unordered_map>

#include <Eigen/Dense>

#include "shrinker/minmax.hpp"
#include "shrinker/primitives.hpp"

namespace shrinker {

namespace {

struct Field {
  std::vector<Vec3> normal;
  std::vector<double> r, w;
  double l2 = 0.0, linf = 0.0;
  bool ok = true;
};

constexpr double kInv4Pi = 0.25 / 3.14159265358979323846;

Field evaluate(const std::vector<Vec3>& X, const std::vector<Triangle>& T, const MeshConnectivity& conn) {
  Field f;
  const int n = static_cast<int>(X.size());
  f.normal.resize(n);
  f.r.resize(n);
  f.w.resize(n);
  double l2 = 0.0;
  for (int v = 0; v < n; ++v) {
    VertexGeometry g;
    try {
      g = cotangent_vertex_geometry(X, T, conn, v);
    } catch (const Error&) {
      f.ok = false;
      return f;
    }
    if (!std::isfinite(g.residual) || g.dual_area <= 0.0) {
      f.ok = false;
      return f;
    }
    f.normal[v] = g.normal;
    f.r[v] = g.residual;
    f.w[v] = kInv4Pi * g.dual_area * gaussian_weight(X[v]);
    l2 += f.w[v] * f.r[v] * f.r[v];
    f.linf = std::max(f.linf, std::abs(g.residual));
  }
  f.l2 = std::sqrt(l2);
  return f;
}

std::vector<Vec3> face_normals(const std::vector<Vec3>& X, const std::vector<Triangle>& T) {
  std::vector<Vec3> n(T.size());
  for (std::size_t i = 0; i < T.size(); ++i) n[i] = (X[T[i][1]] - X[T[i][0]]).cross(X[T[i][2]] - X[T[i][0]]);
  return n;
}

bool any_inverted(const std::vector<Vec3>& before, const std::vector<Vec3>& after) {
  for (std::size_t i = 0; i < before.size(); ++i)
    if (before[i].dot(after[i]) <= 0.0) return true;
  return false;
}

double mean_edge_length(const std::vector<Vec3>& X, const MeshConnectivity& conn) {
  double s = 0.0;
  for (const auto& e : conn.edges) s += (X[e.v0] - X[e.v1]).norm();
  return conn.edges.empty() ? 0.0 : s / conn.edges.size();
}

// Segment [p, q] against triangle (a, b, c), strict interior crossing.
bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double dp = n.dot(p - a), dq = n.dot(q - a);
  if ((dp > 0 && dq > 0) || (dp < 0 && dq < 0) || dp == dq) return false;
  const Vec3 x = p + (dp / (dp - dq)) * (q - p);
  const double s0 = n.dot((b - a).cross(x - a));
  const double s1 = n.dot((c - b).cross(x - b));
  const double s2 = n.dot((a - c).cross(x - c));
  return (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0);
}

bool triangles_intersect(const std::vector<Vec3>& X, const Triangle& s, const Triangle& t) {
  for (int k = 0; k < 3; ++k) {
    if (segment_hits_triangle(X[s[k]], X[s[(k + 1) % 3]], X[t[0]], X[t[1]], X[t[2]])) return true;
    if (segment_hits_triangle(X[t[k]], X[t[(k + 1) % 3]], X[s[0]], X[s[1]], X[s[2]])) return true;
  }
  return false;
}

struct Solve {
  const RotationGroup& group;
  const SolverConfig& cfg;
  std::vector<Triangle> T;
  MeshConnectivity conn;
  TriMesh shape;  // carries tags and connectivity; vertices replaced per step
  std::vector<std::vector<int>> members;  // distinct vertices per orbit
  const OrbitTags* tags = nullptr;

  std::vector<Vec3> symmetrized(std::vector<Vec3> X) const {
    if (!cfg.symmetrize_every_step) return X;
    return symmetrize(shape.with_vertices(std::move(X)), group).vertices();
  }

  // Central differences of the residual in the normal offset of each orbit. Each column only
  // touches the orbit's vertices and their one-rings, so a full Jacobian costs O(n) residual evaluations.
  Eigen::MatrixXd jacobian(std::vector<Vec3>& X, const Field& f, double h) const {
    const int m = tags->orbit_count();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    std::vector<int> stamp(X.size(), -1);
    std::vector<int> affected;
    std::vector<double> plus;
    for (int o = 0; o < m; ++o) {
      affected.clear();
      for (int v : members[o]) {
        if (stamp[v] != o) stamp[v] = o, affected.push_back(v);
        for (int w : conn.neighbors[v])
          if (stamp[w] != o) stamp[w] = o, affected.push_back(w);
      }
      // Central differences: forward ones cap the terminal contraction near 1e-3.
      for (int v : members[o]) X[v] += h * f.normal[v];
      plus.resize(affected.size());
      for (std::size_t k = 0; k < affected.size(); ++k) plus[k] = cotangent_vertex_geometry(X, T, conn, affected[k]).residual;
      for (int v : members[o]) X[v] -= 2.0 * h * f.normal[v];
      for (std::size_t k = 0; k < affected.size(); ++k) {
        const int w = affected[k];
        J(tags->orbit_of[w], o) = (plus[k] - cotangent_vertex_geometry(X, T, conn, w).residual) / (2.0 * h);
      }
      for (int v : members[o]) X[v] += h * f.normal[v];
    }
    return J;
  }

  std::vector<Vec3> smooth(const std::vector<Vec3>& X, const Field& f) const {
    std::vector<Vec3> Y = X;
    for (std::size_t v = 0; v < X.size(); ++v) {
      Vec3 c = Vec3::Zero();
      for (int w : conn.neighbors[v]) c += X[w];
      c /= static_cast<double>(conn.neighbors[v].size());
      Vec3 d = c - X[v];
      d -= d.dot(f.normal[v]) * f.normal[v];
      Y[v] += cfg.tangential_smoothing_weight * d;
    }
    return symmetrized(std::move(Y));
  }

  bool intersects(const std::vector<Vec3>& X) const {
    return cfg.check_self_intersection && has_self_intersection(shape.with_vertices(X));
  }
};

SolveResult run_level(const TriMesh& init, const RotationGroup& group, const SolverConfig& cfg, int iteration0,
                      std::vector<IterationRecord> log) {
  Solve S{group, cfg, init.triangles(), build_connectivity(init), init, {}, init.orbit_tags()};
  for (int o = 0; o < S.tags->orbit_count(); ++o) {
    std::vector<int> row = S.tags->image[o];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    S.members.push_back(std::move(row));
  }
  std::vector<Vec3> X = S.symmetrized(init.vertices());
  const int genus0 = validate(init).genus;

  auto result = [&](int iters, const std::string& status) {
    SolveResult out;
    out.mesh = init.with_vertices(X);
    out.report = verify(out.mesh, group, cfg);
    out.report.iterations = iters;
    out.report.status = status;
    out.log = log;
    return out;
  };

  Field f = evaluate(X, S.T, S.conn);
  if (!f.ok) throw SolverFailure(ErrorCode::MeshQualityCollapse, "initial mesh has degenerate vertex stars", result(iteration0, "quality-collapse"));
  double lambda = cfg.lambda_init;
  const double h = 1e-7 * std::max(1.0, init.bounding_box_diagonal());
  int it = iteration0;
  for (;; ++it) {
    const TriMesh now = init.with_vertices(X);
    log.push_back({it, f.l2, f.linf, lambda, gaussian_area(now, cfg.kernel), symmetry_error(now, group), false});
    if (f.linf <= cfg.residual_tol_linf) break;
    if (it - iteration0 >= cfg.max_iterations)
      throw SolverFailure(ErrorCode::MaxIterations,
                          "no convergence after " + std::to_string(cfg.max_iterations) + " iterations (residual Linf " +
                              std::to_string(f.linf) + ")",
                          result(it, "max-iterations"));

    // No real progress over a window counts as a stall as well.
    const int window = 10;
    if (it - iteration0 >= window && f.l2 > 0.5 * log[log.size() - 1 - window].residual_l2) return result(it, "stalled");

    // Tangential reparameterisation while far from the solution.
    if (f.linf > cfg.smoothing_until_linf && cfg.tangential_smoothing_weight > 0.0) {
      std::vector<Vec3> Y = S.smooth(X, f);
      if (!any_inverted(face_normals(X, S.T), face_normals(Y, S.T))) {
        Field g = evaluate(Y, S.T, S.conn);
        if (g.ok) {
          X = std::move(Y);
          f = std::move(g);
          log.back().smoothed = true;
        }
      }
    }

    const Eigen::MatrixXd J = S.jacobian(X, f, h);
    const int m = S.tags->orbit_count();
    Eigen::VectorXd sw(m), r(m);
    for (int o = 0; o < m; ++o) {
      const int rep = S.tags->representatives[o];
      sw(o) = std::sqrt(S.tags->orbit_size(o) * f.w[rep]);
      r(o) = f.r[rep];
    }
    const Eigen::MatrixXd Jw = sw.asDiagonal() * J;
    const Eigen::MatrixXd A = Jw.transpose() * Jw;
    const Eigen::VectorXd g = Jw.transpose() * (sw.asDiagonal() * r);
    const double step_cap = cfg.max_step_fraction * mean_edge_length(X, S.conn);
    const auto normals_before = face_normals(X, S.T);

    bool accepted = false;
    while (lambda <= cfg.lambda_max) {
      Eigen::MatrixXd M = A;
      // Damping proportional to the residual norm keeps the terminal phase quadratic.
      M.diagonal() += lambda * std::min(1.0, f.l2) * A.diagonal().cwiseMax(1e-12 * A.diagonal().maxCoeff());
      Eigen::VectorXd delta = -M.ldlt().solve(g);
      const double big = delta.cwiseAbs().maxCoeff();
      if (!std::isfinite(big)) {
        lambda = std::max(lambda * cfg.lambda_growth, 1e-12);
        continue;
      }
      if (big > step_cap) delta *= step_cap / big;
      std::vector<Vec3> Y = X;
      for (int o = 0; o < m; ++o)
        for (int v : S.members[o]) Y[v] += delta(o) * f.normal[v];
      Y = S.symmetrized(std::move(Y));
      Field ft = evaluate(Y, S.T, S.conn);
      if (ft.ok && ft.l2 < f.l2 && !any_inverted(normals_before, face_normals(Y, S.T)) && !S.intersects(Y)) {
        X = std::move(Y);
        f = std::move(ft);
        lambda = std::max(lambda * cfg.lambda_decay, 1e-12);
        accepted = true;
        break;
      }
      lambda = std::max(lambda * cfg.lambda_growth, 1e-12);
    }
    if (!accepted) {
      // Every damped step is blocked. A surface touching itself is a topology change; otherwise
      // the caller may refine and resume.
      if (S.intersects(X))
        throw SolverFailure(ErrorCode::GenusChanged,
                            "iteration " + std::to_string(it) + ": sheets touch (residual Linf " + std::to_string(f.linf) + ")",
                            result(it, "genus-changed"));
      return result(it, "stalled");
    }
    const TriMesh cur = init.with_vertices(X);
    if (min_triangle_quality(cur) < cfg.min_triangle_quality)
      throw SolverFailure(ErrorCode::MeshQualityCollapse, "iteration " + std::to_string(it) + ": triangle quality collapsed",
                          result(it + 1, "quality-collapse"));
    if (validate(cur).genus != genus0)
      throw SolverFailure(ErrorCode::GenusChanged, "iteration " + std::to_string(it) + ": genus changed",
                          result(it + 1, "genus-changed"));
  }
  return result(it, "converged");
}

}  // namespace

bool has_self_intersection(const TriMesh& mesh) {
  const auto& X = mesh.vertices();
  const auto& T = mesh.triangles();
  if (T.empty()) return false;
  // Uniform grid keyed on triangle bounding boxes.
  double edge = 0.0;
  for (const auto& t : T) edge += (X[t[1]] - X[t[0]]).norm();
  const double cell = 2.0 * edge / T.size();
  std::unordered_map<long long, std::vector<int>> grid;
  auto key = [](long long i, long long j, long long k) { return (i * 73856093LL) ^ (j * 19349663LL) ^ (k * 83492791LL); };
  std::vector<Eigen::Array3i> lo(T.size()), hi(T.size());
  for (std::size_t f = 0; f < T.size(); ++f) {
    Vec3 a = X[T[f][0]], b = a;
    for (int k = 1; k < 3; ++k) {
      a = a.cwiseMin(X[T[f][k]]);
      b = b.cwiseMax(X[T[f][k]]);
    }
    lo[f] = (a.array() / cell).floor().cast<int>();
    hi[f] = (b.array() / cell).floor().cast<int>();
    for (int i = lo[f](0); i <= hi[f](0); ++i)
      for (int j = lo[f](1); j <= hi[f](1); ++j)
        for (int k = lo[f](2); k <= hi[f](2); ++k) grid[key(i, j, k)].push_back(static_cast<int>(f));
  }
  std::vector<int> seen(T.size(), -1);
  for (std::size_t f = 0; f < T.size(); ++f) {
    for (int i = lo[f](0); i <= hi[f](0); ++i)
      for (int j = lo[f](1); j <= hi[f](1); ++j)
        for (int k = lo[f](2); k <= hi[f](2); ++k) {
          auto it = grid.find(key(i, j, k));
          if (it == grid.end()) continue;
          for (int g : it->second) {
            if (g <= static_cast<int>(f) || seen[g] == static_cast<int>(f)) continue;
            seen[g] = static_cast<int>(f);
            const auto &s = T[f], &t = T[g];
            bool shared = false;
            for (int a : s)
              for (int b : t) shared |= a == b;
            if (!shared && triangles_intersect(X, s, t)) return true;
          }
        }
  }
  return false;
}

SolveResult solve_shrinker(const TriMesh& init, const RotationGroup& group, const SolverConfig& cfg) {
  if (!(cfg.residual_tol_linf > 0.0) || !(cfg.lambda_init >= 0.0) || cfg.lambda_growth <= 1.0 || cfg.max_iterations < 0)
    throw Error(ErrorCode::InvalidParams, "solver tolerances must be positive and damping non-negative");
  validate(init);
  TriMesh mesh = init.orbit_tags() && init.orbit_tags()->group_order() == group.order() ? init : tag_orbits(init, group);
  mesh = mesh.with_sphere_projection(std::nullopt);
  SolveResult res = run_level(mesh, group, cfg, 0, {});
  int refinements = 0;
  while (res.report.status == "stalled") {
    // A stalled level is usually under-resolved where the surface moved far from its start.
    if (refinements++ >= cfg.max_stall_refinements)
      throw SolverFailure(ErrorCode::MaxIterations,
                          "stalled at residual Linf " + std::to_string(res.report.residual_linf) + " after " +
                              std::to_string(cfg.max_stall_refinements) + " refinements",
                          res);
    res = run_level(refine(res.mesh), group, cfg, res.report.iterations, res.log);
  }
  for (int level = 0; level < cfg.refinement_steps; ++level) {
    res = run_level(refine(res.mesh), group, cfg, res.report.iterations, res.log);
    if (res.report.status == "stalled")
      throw SolverFailure(ErrorCode::MaxIterations, "stalled after refinement", res);
  }
  return res;
}

ShrinkerReport verify(const TriMesh& mesh, const RotationGroup& group, const SolverConfig& cfg) {
  ShrinkerReport rep;
  const TopologyReport topo = validate(mesh);
  rep.genus = topo.genus;
  rep.components = topo.components;
  rep.vertices = topo.vertices;
  rep.triangles = topo.faces;
  rep.F_value = gaussian_area(mesh, cfg.kernel);
  const ResidualField r = shrinker_residual(mesh, cfg.kernel);
  rep.residual_l2 = r.l2_norm;
  rep.residual_linf = r.linf_norm;
  const TriMesh tagged = mesh.orbit_tags() && mesh.orbit_tags()->group_order() == group.order() ? mesh : tag_orbits(mesh, group);
  rep.symmetry_error = symmetry_error(tagged, group);
  rep.min_triangle_quality = min_triangle_quality(mesh);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
  for (const auto& x : mesh.vertices()) {
    const double n = x.norm();
    lo = std::min(lo, n);
    hi = std::max(hi, n);
    sum += n;
  }
  rep.mean_radius = sum / std::max(1, mesh.vertex_count());
  rep.radius_spread = hi - lo;
  rep.converged = rep.residual_linf <= cfg.residual_tol_linf && rep.symmetry_error <= 1e-10;
  return rep;
}

void write_report(std::ostream& out, const ShrinkerReport& r) {
  char buf[96];
  auto num = [&](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "%s=%.12g\n", k, v);
    out << buf;
  };
  num("F_value", r.F_value);
  num("residual_l2", r.residual_l2);
  num("residual_linf", r.residual_linf);
  out << "genus=" << r.genus << "\n";
  out << "components=" << r.components << "\n";
  num("symmetry_error", r.symmetry_error);
  out << "iterations=" << r.iterations << "\n";
  out << "converged=" << (r.converged ? "true" : "false") << "\n";
  num("min_triangle_quality", r.min_triangle_quality);
  num("mean_radius", r.mean_radius);
  num("radius_spread", r.radius_spread);
  out << "vertices=" << r.vertices << "\n";
  out << "triangles=" << r.triangles << "\n";
  out << "status=" << r.status << "\n";
}

TriMesh saddle_init(const PlatonicScheme& scheme, const SaddleConfig& cfg) {
  if (scheme.neck_count == 0) {
    const TriMesh s = make_octasphere(cfg.mesh_refinement, 1.9).with_sphere_projection(std::nullopt);
    return tag_orbits(s, scheme.group);
  }
  // A fat shell with wide necks: the grid argmax of the doubled family has necks far too thin to start from.
  return lipped_shell(scheme, cfg.shell_radius, cfg.shell_half_gap, cfg.shell_neck, cfg.mesh_refinement).mesh;
}

}  // namespace shrinker
