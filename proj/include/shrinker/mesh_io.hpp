#pragma once

#include <filesystem>

#include "shrinker/mesh.hpp"

namespace shrinker {

/// Reads an OBJ or ascii PLY triangle mesh; the format is chosen by extension.
TriMesh read_mesh(const std::filesystem::path& path);

/// Writes OBJ or ascii PLY with 17 significant digits per coordinate.
void write_mesh(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace shrinker
