#include "shrinker/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "shrinker/error.hpp"

namespace shrinker {

namespace {

std::string extension_of(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

// OBJ face tokens may be "i", "i/t", "i//n" or "i/t/n"; negative indices count from the end.
int parse_obj_index(const std::string& token, int vertex_count, int line) {
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoi(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw ParseError(line, "bad face index '" + token + "'");
  }
  if (idx < 0) idx = vertex_count + idx + 1;
  if (idx < 1 || idx > vertex_count) throw ParseError(line, "face index " + token + " out of range");
  return idx - 1;
}

TriMesh read_obj(std::istream& in) {
  std::vector<Vec3> V;
  std::vector<Triangle> T;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ss >> p.x() >> p.y() >> p.z())) throw ParseError(lineno, "vertex needs three coordinates");
      V.push_back(p);
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      if (tokens.size() < 3) throw ParseError(lineno, "face with fewer than three vertices");
      if (tokens.size() > 3)
        throw Error(ErrorCode::UnsupportedFeature,
                    "line " + std::to_string(lineno) + ": " + std::to_string(tokens.size()) + "-sided face");
      const int n = static_cast<int>(V.size());
      T.push_back({parse_obj_index(tokens[0], n, lineno), parse_obj_index(tokens[1], n, lineno),
                   parse_obj_index(tokens[2], n, lineno)});
    }
    // Other records (vn, vt, o, g, s, usemtl, mtllib) carry nothing we use.
  }
  if (V.empty() || T.empty()) throw ParseError(lineno, "no vertices or faces");
  return TriMesh(std::move(V), std::move(T));
}

TriMesh read_ply(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError(lineno, std::string("unexpected end of file reading ") + what);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  if (!std::getline(in, line)) throw ParseError(0, "empty file");
  ++lineno;
  if (line.rfind("ply", 0) != 0) throw ParseError(lineno, "missing 'ply' magic");

  long nverts = -1, nfaces = -1;
  int vertex_props = 0;
  int xyz[3] = {-1, -1, -1};
  std::string current;
  for (;;) {
    next_line("header");
    std::istringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "ascii") throw Error(ErrorCode::UnsupportedFeature, "PLY format '" + fmt + "'");
    } else if (kw == "element") {
      long n = 0;
      ss >> current >> n;
      if (current == "vertex") nverts = n;
      else if (current == "face") nfaces = n;
      else if (n > 0) throw Error(ErrorCode::UnsupportedFeature, "PLY element '" + current + "'");
    } else if (kw == "property" && current == "vertex") {
      std::string type, name;
      ss >> type >> name;
      if (type == "list") throw ParseError(lineno, "list property on vertex");
      if (name == "x") xyz[0] = vertex_props;
      if (name == "y") xyz[1] = vertex_props;
      if (name == "z") xyz[2] = vertex_props;
      ++vertex_props;
    } else if (kw == "end_header") {
      break;
    }
  }
  if (nverts <= 0 || nfaces <= 0) throw ParseError(lineno, "PLY header lacks vertex or face elements");
  if (xyz[0] < 0 || xyz[1] < 0 || xyz[2] < 0) throw ParseError(lineno, "PLY vertex lacks x/y/z");

  std::vector<Vec3> V(nverts);
  std::vector<double> props(vertex_props);
  for (long i = 0; i < nverts; ++i) {
    next_line("vertices");
    std::istringstream ss(line);
    for (auto& p : props)
      if (!(ss >> p)) throw ParseError(lineno, "short vertex record");
    V[i] = Vec3(props[xyz[0]], props[xyz[1]], props[xyz[2]]);
  }
  std::vector<Triangle> T(nfaces);
  for (long i = 0; i < nfaces; ++i) {
    next_line("faces");
    std::istringstream ss(line);
    int count = 0;
    if (!(ss >> count)) throw ParseError(lineno, "bad face record");
    if (count != 3)
      throw Error(ErrorCode::UnsupportedFeature,
                  "line " + std::to_string(lineno) + ": " + std::to_string(count) + "-sided face");
    for (int k = 0; k < 3; ++k) {
      if (!(ss >> T[i][k])) throw ParseError(lineno, "short face record");
      if (T[i][k] < 0 || T[i][k] >= nverts) throw ParseError(lineno, "face index out of range");
    }
  }
  return TriMesh(std::move(V), std::move(T));
}

}  // namespace

TriMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  const auto ext = extension_of(path);
  if (ext == ".obj") return read_obj(in);
  if (ext == ".ply") return read_ply(in);
  throw Error(ErrorCode::UnsupportedFeature, "unknown mesh extension '" + ext + "'");
}

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  const auto ext = extension_of(path);
  if (ext != ".obj" && ext != ".ply")
    throw Error(ErrorCode::UnsupportedFeature, "unknown mesh extension '" + ext + "'");
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw Error(ErrorCode::InvalidParams, "cannot write " + path.string());
  if (ext == ".obj") {
    std::fprintf(f, "# %d vertices, %d triangles\n", mesh.vertex_count(), mesh.triangle_count());
    for (const auto& v : mesh.vertices()) std::fprintf(f, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    for (const auto& t : mesh.triangles()) std::fprintf(f, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
  } else {
    std::fprintf(f, "ply\nformat ascii 1.0\nelement vertex %d\n", mesh.vertex_count());
    std::fprintf(f, "property double x\nproperty double y\nproperty double z\n");
    std::fprintf(f, "element face %d\nproperty list uchar int vertex_indices\nend_header\n",
                 mesh.triangle_count());
    for (const auto& v : mesh.vertices()) std::fprintf(f, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    for (const auto& t : mesh.triangles()) std::fprintf(f, "3 %d %d %d\n", t[0], t[1], t[2]);
  }
  const bool ok = std::ferror(f) == 0;
  std::fclose(f);
  if (!ok) throw Error(ErrorCode::InvalidParams, "write failed for " + path.string());
}

}  // namespace shrinker
