#include "boot3d/mesh_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "boot3d/error.hpp"

namespace boot3d {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void write_obj(const std::string& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::io_failure, "cannot open for write: " + path);
  const bool colors = mesh.has_colors();
  std::string line;
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    line = "v";
    for (int k = 0; k < 3; ++k) {
      line += ' ';
      append_number(line, mesh.vertices[i][k]);
    }
    if (colors) {
      for (int k = 0; k < 3; ++k) {
        line += ' ';
        append_number(line, mesh.vertex_colors[i][k]);
      }
    }
    line += '\n';
    out << line;
  }
  for (const Vec3i& t : mesh.triangles)
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
}

TriangleMesh read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::io_failure, "cannot open: " + path);
  TriangleMesh mesh;
  bool any_color = false;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ss >> p[0] >> p[1] >> p[2]))
        throw_error(ErrorCode::io_failure, "malformed vertex line in " + path);
      Vec3 c(0.7, 0.7, 0.7);
      if (ss >> c[0] >> c[1] >> c[2]) any_color = true;
      mesh.vertices.push_back(p);
      mesh.vertex_colors.push_back(c);
    } else if (tag == "f") {
      std::vector<int> corners;
      std::string item;
      while (ss >> item) {
        // "idx", "idx/uv", "idx/uv/n" all start with the vertex index.
        corners.push_back(std::stoi(item.substr(0, item.find('/'))) - 1);
      }
      if (corners.size() < 3)
        throw_error(ErrorCode::io_failure, "malformed face line in " + path);
      for (size_t k = 2; k < corners.size(); ++k)
        mesh.triangles.push_back(Vec3i(corners[0], corners[k - 1], corners[k]));
    }
  }
  if (!any_color) mesh.vertex_colors.clear();
  validate_mesh(mesh);
  return mesh;
}

void write_landmarks(const std::string& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::io_failure, "cannot open for write: " + path);
  for (const auto& [name, idx] : mesh.landmarks) out << name << ' ' << idx << '\n';
  if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
}

void read_landmarks(const std::string& path, TriangleMesh& mesh) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::io_failure, "cannot open: " + path);
  std::string name;
  int idx = 0;
  while (in >> name >> idx) mesh.landmarks[name] = idx;
  validate_mesh(mesh);
}

std::string landmark_sidecar_path(const std::string& obj_path) {
  std::filesystem::path p(obj_path);
  p.replace_extension(".lmk");
  return p.string();
}

void save_mesh(const std::string& obj_path, const TriangleMesh& mesh) {
  write_obj(obj_path, mesh);
  if (!mesh.landmarks.empty())
    write_landmarks(landmark_sidecar_path(obj_path), mesh);
}

TriangleMesh load_mesh(const std::string& obj_path) {
  TriangleMesh mesh = read_obj(obj_path);
  const std::string sidecar = landmark_sidecar_path(obj_path);
  if (std::filesystem::exists(sidecar)) read_landmarks(sidecar, mesh);
  return mesh;
}

}  // namespace boot3d
