#include "shrinker/symmetry.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "shrinker/error.hpp"
#include "shrinker/point_index.hpp"

namespace shrinker {

namespace {

Mat3 axis_rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

std::vector<Mat3> closure(const std::vector<Mat3>& generators, std::size_t limit) {
  std::vector<Mat3> out = {Mat3::Identity()};
  std::deque<Mat3> frontier = {Mat3::Identity()};
  auto known = [&](const Mat3& m) {
    for (const auto& e : out)
      if ((e - m).cwiseAbs().maxCoeff() < 1e-9) return true;
    return false;
  };
  while (!frontier.empty()) {
    const Mat3 cur = frontier.front();
    frontier.pop_front();
    for (const auto& g : generators) {
      Mat3 next = g * cur;
      if (known(next)) continue;
      // Re-orthonormalise so roundoff does not accumulate along long words.
      Eigen::JacobiSVD<Mat3> svd(next, Eigen::ComputeFullU | Eigen::ComputeFullV);
      next = svd.matrixU() * svd.matrixV().transpose();
      out.push_back(next);
      frontier.push_back(next);
      if (out.size() > limit) throw Error(ErrorCode::InvalidParams, "group closure did not terminate");
    }
  }
  return out;
}

// Snap entries within 1e-14 of 0 or +-1 so coordinate-aligned elements are exact.
Mat3 snap(Mat3 m) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (double target : {-1.0, 0.0, 1.0})
        if (std::abs(m(i, j) - target) < 1e-14) m(i, j) = target;
  return m;
}

std::vector<AxisClass> enumerate_axes(const std::vector<Mat3>& elements) {
  // Collect rays fixed by some non-identity element, with their stabilizer size.
  std::vector<Vec3> rays;
  std::vector<int> orders;
  PointIndex index(1e-8);
  for (std::size_t g = 1; g < elements.size(); ++g) {
    Eigen::EigenSolver<Mat3> es(elements[g]);
    for (int k = 0; k < 3; ++k) {
      if (std::abs(es.eigenvalues()(k) - std::complex<double>(1.0, 0.0)) > 1e-8) continue;
      Vec3 axis = es.eigenvectors().col(k).real().normalized();
      for (const Vec3& dir : {axis, Vec3(-axis)}) {
        if (index.find(dir)) continue;
        index.insert(dir);
        int stab = 0;
        for (const auto& e : elements)
          if ((e * dir - dir).norm() < 1e-8) ++stab;
        rays.push_back(dir);
        orders.push_back(stab);
      }
      break;
    }
  }
  // Group rays into orbits.
  std::vector<AxisClass> classes;
  std::vector<bool> done(rays.size(), false);
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (done[i]) continue;
    AxisClass cls;
    cls.isotropy_order = orders[i];
    for (std::size_t j = i; j < rays.size(); ++j) {
      if (done[j]) continue;
      for (const auto& e : elements)
        if ((e * rays[i] - rays[j]).norm() < 1e-8) {
          done[j] = true;
          cls.rays.push_back(rays[j]);
          break;
        }
    }
    classes.push_back(std::move(cls));
  }
  // Highest isotropy first, then larger orbits.
  std::stable_sort(classes.begin(), classes.end(), [](const AxisClass& a, const AxisClass& b) {
    if (a.isotropy_order != b.isotropy_order) return a.isotropy_order > b.isotropy_order;
    return a.rays.size() > b.rays.size();
  });
  return classes;
}

}  // namespace

std::string to_string(const GroupName& name) {
  switch (name.kind) {
    case GroupKind::Cyclic: return "C" + std::to_string(name.n);
    case GroupKind::Dihedral: return "D" + std::to_string(name.n);
    case GroupKind::T12: return "T12";
    case GroupKind::O24: return "O24";
    case GroupKind::I60: return "I60";
  }
  return "?";
}

int RotationGroup::find(const Mat3& m) const {
  for (int g = 0; g < order(); ++g)
    if ((elements[g] - m).cwiseAbs().maxCoeff() < 1e-9) return g;
  return -1;
}

RotationGroup build_group(const GroupName& name) {
  RotationGroup group;
  group.name = name;
  const double pi = std::numbers::pi;
  std::vector<Mat3> gens;
  std::size_t expected = 0;
  Mat3 cycle;  // (x, y, z) -> (z, x, y)
  cycle << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  switch (name.kind) {
    case GroupKind::Cyclic:
      if (name.n < 1) throw Error(ErrorCode::InvalidParams, "cyclic group order must be >= 1");
      if (name.n > 1) gens.push_back(axis_rotation(Vec3::UnitZ(), 2 * pi / name.n));
      expected = name.n;
      break;
    case GroupKind::Dihedral:
      if (name.n < 2) throw Error(ErrorCode::InvalidParams, "dihedral group needs n >= 2");
      gens.push_back(axis_rotation(Vec3::UnitZ(), 2 * pi / name.n));
      gens.push_back(axis_rotation(Vec3::UnitX(), pi));
      expected = 2 * name.n;
      break;
    case GroupKind::T12:
      gens = {cycle, axis_rotation(Vec3::UnitX(), pi)};
      expected = 12;
      break;
    case GroupKind::O24:
      gens = {cycle, axis_rotation(Vec3::UnitZ(), pi / 2)};
      expected = 24;
      break;
    case GroupKind::I60:
      // Icosahedron with vertices at cyclic permutations of (0, +-1, +-phi).
      gens = {cycle, axis_rotation(Vec3::UnitX(), pi),
              axis_rotation(Vec3(0.0, 1.0, std::numbers::phi), 2 * pi / 5)};
      expected = 60;
      break;
  }
  for (auto& g : gens) g = snap(g);
  group.elements = closure(gens, 200);
  for (auto& e : group.elements) e = snap(e);
  if (group.elements.size() != expected)
    throw Error(ErrorCode::InvalidParams, "group " + to_string(name) + " closed with " +
                                              std::to_string(group.elements.size()) + " elements");
  group.axes = enumerate_axes(group.elements);
  return group;
}

std::vector<Vec3> orbit(const RotationGroup& group, const Vec3& point) {
  PointIndex index(1e-10);
  for (const auto& g : group.elements) index.find_or_insert(g * point);
  return index.points();
}

TriMesh tag_orbits(const TriMesh& mesh, const RotationGroup& group) {
  const double tol = 1e-9 * std::max(1.0, mesh.bounding_box_diagonal());
  return mesh.with_orbit_tags(assign_orbit_tags(mesh.vertices(), group.elements, tol));
}

TriMesh symmetrize(const TriMesh& mesh, const RotationGroup& group) {
  const OrbitTags* tags = mesh.orbit_tags();
  if (!tags) throw Error(ErrorCode::MissingOrbitTags, "symmetrize needs an orbit-tagged mesh");
  if (tags->group_order() != group.order())
    throw Error(ErrorCode::MissingOrbitTags, "orbit tags were built for a different group");
  const auto& X = mesh.vertices();
  std::vector<Vec3> Y = X;
  const double inv = 1.0 / group.order();
  for (int o = 0; o < tags->orbit_count(); ++o) {
    const auto& row = tags->image[o];
    Vec3 rep = Vec3::Zero();
    for (int g = 0; g < group.order(); ++g) rep += tags->elements[g].transpose() * X[row[g]];
    rep *= inv;
    for (int g = 0; g < group.order(); ++g) Y[row[g]] = tags->elements[g] * rep;
  }
  return mesh.with_vertices(std::move(Y));
}

double symmetry_error(const TriMesh& mesh, const RotationGroup& group) {
  const OrbitTags* tags = mesh.orbit_tags();
  if (!tags) throw Error(ErrorCode::MissingOrbitTags, "symmetry_error needs an orbit-tagged mesh");
  if (tags->group_order() != group.order())
    throw Error(ErrorCode::MissingOrbitTags, "orbit tags were built for a different group");
  const auto& X = mesh.vertices();
  double err = 0.0;
  for (int o = 0; o < tags->orbit_count(); ++o) {
    const Vec3& rep = X[tags->representatives[o]];
    for (int g = 0; g < group.order(); ++g)
      err = std::max(err, (X[tags->image[o][g]] - group.elements[g] * rep).norm());
  }
  return err;
}

int riemann_hurwitz_chi(int sheets, int chi_quotient, const BranchData& branch) {
  if (sheets < 1) throw Error(ErrorCode::InvalidParams, "sheets must be >= 1");
  int chi = sheets * chi_quotient;
  for (const auto& b : branch) {
    if (b.isotropy_order < 2 || b.count < 0)
      throw Error(ErrorCode::InvalidParams, "branch entries need order >= 2 and count >= 0");
    if (sheets % b.isotropy_order != 0)
      throw Error(ErrorCode::NonDivisible, std::to_string(sheets) + " sheets not divisible by isotropy " +
                                               std::to_string(b.isotropy_order));
    // Each quotient branch point lifts to sheets/m points, each losing m - 1.
    chi -= b.count * (sheets / b.isotropy_order) * (b.isotropy_order - 1);
  }
  return chi;
}

double singular_set_distance(const TriMesh& mesh, const RotationGroup& group) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : mesh.vertices())
    for (const auto& cls : group.axes)
      for (const auto& u : cls.rays) {
        const double along = std::max(0.0, x.dot(u));
        best = std::min(best, (x - along * u).norm());
      }
  return best;
}

}  // namespace shrinker
