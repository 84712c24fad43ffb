#pragma once

#include <string>

#include "boot3d/mesh.hpp"

namespace boot3d {

/// ASCII OBJ. Vertex colors, when present, are written as the extended
/// "v x y z r g b" form. Faces with more than 3 corners are fanned into
/// triangles on read; vt/vn data is ignored.
void write_obj(const std::string& path, const TriangleMesh& mesh);
TriangleMesh read_obj(const std::string& path);

/// Landmark sidecar: one "name index" line per landmark.
void write_landmarks(const std::string& path, const TriangleMesh& mesh);
void read_landmarks(const std::string& path, TriangleMesh& mesh);

/// Writes mesh.obj plus, when landmarks exist, the ".lmk" sidecar next to it.
void save_mesh(const std::string& obj_path, const TriangleMesh& mesh);
/// Reads an OBJ and, when present, its ".lmk" sidecar.
TriangleMesh load_mesh(const std::string& obj_path);

std::string landmark_sidecar_path(const std::string& obj_path);

}  // namespace boot3d
