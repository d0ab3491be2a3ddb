#pragma once

#include <string>
#include <vector>

#include "shrinker/mesh.hpp"

namespace shrinker {

enum class GroupKind { Cyclic, Dihedral, T12, O24, I60 };

struct GroupName {
  GroupKind kind = GroupKind::Cyclic;
  int n = 1;  // only meaningful for Cyclic and Dihedral

  static GroupName cyclic(int n) { return {GroupKind::Cyclic, n}; }
  static GroupName dihedral(int n) { return {GroupKind::Dihedral, n}; }
  static GroupName tetrahedral() { return {GroupKind::T12, 0}; }
  static GroupName octahedral() { return {GroupKind::O24, 0}; }
  static GroupName icosahedral() { return {GroupKind::I60, 0}; }
};

std::string to_string(const GroupName& name);

/// One orbit of singular rays: every ray has isotropy Z_m.
struct AxisClass {
  int isotropy_order = 0;
  std::vector<Vec3> rays;  // unit directions
};

/// Finite subgroup of SO(3). Cube axes are the coordinate axes; the icosahedral group
/// contains the tetrahedral one.
struct RotationGroup {
  GroupName name;
  std::vector<Mat3> elements;  // elements[0] is the identity
  std::vector<AxisClass> axes;

  int order() const { return static_cast<int>(elements.size()); }
  /// Index of the element equal to `m` within 1e-9, or -1.
  int find(const Mat3& m) const;
};

RotationGroup build_group(const GroupName& name);

/// Distinct images of `point`, merged within 1e-10.
std::vector<Vec3> orbit(const RotationGroup& group, const Vec3& point);

/// Orbit tags for a mesh whose vertex set is already invariant under `group`.
TriMesh tag_orbits(const TriMesh& mesh, const RotationGroup& group);

/// L2-nearest equivariant configuration of a tagged mesh: each orbit representative is
/// replaced by the group average and every orbit member is re-derived from it.
TriMesh symmetrize(const TriMesh& mesh, const RotationGroup& group);

/// max over orbits o and elements g of |x_{g rep(o)} - g x_{rep(o)}|.
double symmetry_error(const TriMesh& mesh, const RotationGroup& group);

struct BranchPoint {
  int isotropy_order = 2;
  int count = 0;  // branch points of this order on the quotient surface
};
using BranchData = std::vector<BranchPoint>;

/// chi of the lift of a quotient surface under a `sheets`-fold branched cover.
int riemann_hurwitz_chi(int sheets, int chi_quotient, const BranchData& branch);

/// Minimum distance from mesh vertices to the union of singular rays.
double singular_set_distance(const TriMesh& mesh, const RotationGroup& group);

}  // namespace shrinker
