#pragma once

#include <vector>

#include "boot3d/camera.hpp"
#include "boot3d/face_frame.hpp"
#include "boot3d/image.hpp"
#include "boot3d/mesh.hpp"
#include "boot3d/rigid_transform.hpp"
#include "boot3d/view_schedule.hpp"

namespace boot3d {

struct RenderedView {
  Image image;
  std::vector<float> depth;  // -z per covered pixel, +inf elsewhere
  RigidTransform transform;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;

  bool covered(int x, int y) const {
    return std::isfinite(depth[static_cast<size_t>(y) * image.width + x]);
  }
};

/// Assigns vertex colors by projecting each vertex into the source image
/// and sampling bilinearly (border-clamped for off-image vertices).
TriangleMesh project_colors(const TriangleMesh& mesh, const Image& source_image,
                            const Camera& camera);

/// Background carrier: a quad with normal = gaze placed behind the mesh's
/// rear extent along gaze, large enough to cover the camera view. The quad
/// is tessellated `subdivisions` times per side so that per-vertex sampling
/// of the source image approximates a texture map (1 reproduces the plain
/// two-triangle quad).
TriangleMesh make_backplane(const FaceFrame& frame, const Aabb& mesh_bounds,
                            const Image& source_image, const Camera& camera,
                            int subdivisions = 64);

/// Z-buffered rasterization with barycentric color interpolation, emissive
/// shading (colors pass through unlit), pixel-center sampling and top-left
/// fill rule. Every mesh must carry vertex colors.
RenderedView rasterize(const std::vector<TriangleMesh>& scene, const Camera& camera);

/// One render per schedule entry: the face moves, the backplane built from
/// the untransformed frame stays fixed. The mesh is colored from
/// source_image in its untransformed pose unless it already carries colors.
std::vector<RenderedView> render_sweep(const TriangleMesh& mesh, const FaceFrame& frame,
                                       const Image& source_image,
                                       const ViewSchedule& schedule, const Camera& camera,
                                       int threads = 1);

/// Depth buffer normalized to [0,1] over [near, far], 1 where uncovered.
std::vector<float> normalized_depth(const RenderedView& view, const Camera& camera);

}  // namespace boot3d
