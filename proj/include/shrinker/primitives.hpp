#pragma once

#include <cstdint>

#include "shrinker/mesh.hpp"

namespace shrinker {

/// Regular tetrahedron inscribed in the unit sphere, outward winding.
TriMesh make_tetrahedron();

/// Icosahedron refined `level` times with projection to the sphere of `radius`.
/// The returned mesh keeps the sphere-projection tag.
TriMesh make_icosphere(int level, double radius = 1.0);

/// Octahedron refined `level` times onto the sphere of `radius`; invariant under the cube group.
TriMesh make_octasphere(int level, double radius = 1.0);

/// Square grid of n x n quads split into triangles, in the plane z = 0, side length `size`,
/// centred at the origin, normal +z.
TriMesh make_plane_patch(int n, double size);

/// Polar triangulation of the disc of radius `radius` in the plane z = 0.
TriMesh make_disc(double radius, int rings, int sectors);

/// Open cylinder around the z axis, outward normals, alternating ring offsets.
TriMesh make_cylinder(double radius, double half_length, int sectors, int rings);

/// Torus (major R, minor r) on an n x m grid, each vertex jittered by up to `jitter`.
TriMesh make_jittered_torus(double major, double minor, int n, int m, double jitter, std::uint64_t seed);

}  // namespace shrinker
