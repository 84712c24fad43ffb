#include "boot3d/render.hpp"

#include <algorithm>
#include <cmath>

#include "boot3d/error.hpp"
#include "boot3d/parallel.hpp"

namespace boot3d {

TriangleMesh project_colors(const TriangleMesh& mesh, const Image& source_image,
                            const Camera& camera) {
  if (source_image.empty())
    throw_error(ErrorCode::invalid_input, "project_colors: empty source image");
  TriangleMesh out = mesh;
  out.vertex_colors.resize(out.vertices.size());
  for (size_t i = 0; i < out.vertices.size(); ++i) {
    const Vec3 pix = camera.project(out.vertices[i]);
    out.vertex_colors[i] = source_image.sample_bilinear(pix[0], pix[1]).cast<double>();
  }
  return out;
}

TriangleMesh make_backplane(const FaceFrame& frame, const Aabb& mesh_bounds,
                            const Image& source_image, const Camera& camera,
                            int subdivisions) {
  if (subdivisions < 1)
    throw_error(ErrorCode::invalid_config, "make_backplane: subdivisions must be >= 1");

  // Plane with normal = gaze, behind the rearmost vertex along gaze.
  Vec3 corners[8];
  int c = 0;
  for (int ix = 0; ix < 2; ++ix)
    for (int iy = 0; iy < 2; ++iy)
      for (int iz = 0; iz < 2; ++iz)
        corners[c++] = Vec3(ix ? mesh_bounds.max[0] : mesh_bounds.min[0],
                            iy ? mesh_bounds.max[1] : mesh_bounds.min[1],
                            iz ? mesh_bounds.max[2] : mesh_bounds.min[2]);
  double rear = std::numeric_limits<double>::max();
  for (const Vec3& p : corners) rear = std::min(rear, p.dot(frame.gaze));
  const double margin = std::max(1e-6, 1e-3 * mesh_bounds.diagonal());
  const double offset = rear - margin;

  // Center the quad under the camera view, spanning lateral/vertical wide
  // enough to cover the viewport from any in-plane position.
  const Vec3 view_center(camera.center_x, camera.center_y,
                         frame.centroid[2]);
  const Vec3 center = view_center + (offset - view_center.dot(frame.gaze)) * frame.gaze;
  const double half = 2.0 * (camera.half_w + camera.half_h) + mesh_bounds.diagonal();

  TriangleMesh quad;
  const int n = subdivisions;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double u = -1.0 + 2.0 * i / n;
      const double v = -1.0 + 2.0 * j / n;
      quad.vertices.push_back(center + u * half * frame.lateral + v * half * frame.vertical);
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i;
      const int b = a + 1;
      const int d = a + (n + 1);
      const int e = d + 1;
      quad.triangles.push_back(Vec3i(a, b, e));
      quad.triangles.push_back(Vec3i(a, e, d));
    }
  }
  return project_colors(quad, source_image, camera);
}

RenderedView rasterize(const std::vector<TriangleMesh>& scene, const Camera& camera) {
  if (camera.half_w <= 0.0 || camera.half_h <= 0.0)
    throw_error(ErrorCode::invalid_config, "rasterize: zero-area view rect");
  if (camera.image_width <= 0 || camera.image_height <= 0)
    throw_error(ErrorCode::invalid_config, "rasterize: empty image size");
  if (!(camera.near < camera.far))
    throw_error(ErrorCode::invalid_config, "rasterize: near must be < far");
  for (const TriangleMesh& mesh : scene) {
    if (!mesh.triangles.empty() && !mesh.has_colors())
      throw_error(ErrorCode::invalid_input, "rasterize: mesh lacks vertex colors");
  }

  const int w = camera.image_width, h = camera.image_height;
  RenderedView view;
  view.image = Image(w, h, Vec3f::Zero());
  view.depth.assign(static_cast<size_t>(w) * h, std::numeric_limits<float>::infinity());

  for (const TriangleMesh& mesh : scene) {
    for (const Vec3i& tri : mesh.triangles) {
      const Vec3 p0 = camera.project(mesh.vertices[tri[0]]);
      const Vec3 p1 = camera.project(mesh.vertices[tri[1]]);
      const Vec3 p2 = camera.project(mesh.vertices[tri[2]]);

      double area2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
      if (area2 == 0.0) continue;  // edge-on
      // Wind consistently so the fill rule below sees CCW triangles.
      const Vec3* v0 = &p0;
      const Vec3* v1 = area2 > 0.0 ? &p1 : &p2;
      const Vec3* v2 = area2 > 0.0 ? &p2 : &p1;
      const Vec3f c0 = mesh.vertex_colors[tri[0]].cast<float>();
      const Vec3f c1 = (area2 > 0.0 ? mesh.vertex_colors[tri[1]] : mesh.vertex_colors[tri[2]]).cast<float>();
      const Vec3f c2 = (area2 > 0.0 ? mesh.vertex_colors[tri[2]] : mesh.vertex_colors[tri[1]]).cast<float>();
      area2 = std::abs(area2);

      const int x0 = std::max(0, static_cast<int>(std::floor(std::min({(*v0)[0], (*v1)[0], (*v2)[0]}) - 0.5)));
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max({(*v0)[0], (*v1)[0], (*v2)[0]}))));
      const int y0 = std::max(0, static_cast<int>(std::floor(std::min({(*v0)[1], (*v1)[1], (*v2)[1]}) - 0.5)));
      const int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max({(*v0)[1], (*v1)[1], (*v2)[1]}))));

      // Top-left rule: an edge owns pixels exactly on it when it is a top
      // or left edge of the (CCW in pixel space, y down) triangle.
      auto edge_accepts_zero = [](const Vec3& a, const Vec3& b) {
        const double dy = b[1] - a[1];
        return dy < 0.0 || (dy == 0.0 && b[0] > a[0]);
      };
      const bool tl0 = edge_accepts_zero(*v0, *v1);
      const bool tl1 = edge_accepts_zero(*v1, *v2);
      const bool tl2 = edge_accepts_zero(*v2, *v0);

      for (int y = y0; y <= y1; ++y) {
        const double py = y + 0.5;
        for (int x = x0; x <= x1; ++x) {
          const double px = x + 0.5;
          // Signed areas; CCW in pixel space (y down) makes these >= 0 inside.
          const double e0 = ((*v1)[0] - (*v0)[0]) * (py - (*v0)[1]) - (px - (*v0)[0]) * ((*v1)[1] - (*v0)[1]);
          const double e1 = ((*v2)[0] - (*v1)[0]) * (py - (*v1)[1]) - (px - (*v1)[0]) * ((*v2)[1] - (*v1)[1]);
          const double e2 = ((*v0)[0] - (*v2)[0]) * (py - (*v2)[1]) - (px - (*v2)[0]) * ((*v0)[1] - (*v2)[1]);
          const bool in0 = e0 > 0.0 || (e0 == 0.0 && tl0);
          const bool in1 = e1 > 0.0 || (e1 == 0.0 && tl1);
          const bool in2 = e2 > 0.0 || (e2 == 0.0 && tl2);
          if (!(in0 && in1 && in2)) continue;

          const double b0 = e1 / area2, b1 = e2 / area2, b2 = e0 / area2;
          const double depth = b0 * (*v0)[2] + b1 * (*v1)[2] + b2 * (*v2)[2];
          if (depth < camera.near || depth > camera.far) continue;
          const size_t pix = static_cast<size_t>(y) * w + x;
          if (depth < view.depth[pix]) {
            view.depth[pix] = static_cast<float>(depth);
            view.image.set(x, y,
                           static_cast<float>(b0) * c0 + static_cast<float>(b1) * c1 +
                               static_cast<float>(b2) * c2);
          }
        }
      }
    }
  }
  return view;
}

std::vector<RenderedView> render_sweep(const TriangleMesh& mesh, const FaceFrame& frame,
                                       const Image& source_image,
                                       const ViewSchedule& schedule, const Camera& camera,
                                       int threads) {
  const TriangleMesh colored =
      mesh.has_colors() ? mesh : project_colors(mesh, source_image, camera);
  const TriangleMesh backplane =
      make_backplane(frame, mesh_bounds(colored), source_image, camera);

  std::vector<RenderedView> views(schedule.entries.size());
  parallel_for(schedule.entries.size(), threads, [&](size_t i) {
    const ViewEntry& entry = schedule.entries[i];
    RenderedView v = rasterize({apply_transform(colored, entry.transform), backplane}, camera);
    v.transform = entry.transform;
    v.yaw_deg = entry.yaw_deg;
    v.pitch_deg = entry.pitch_deg;
    views[i] = std::move(v);
  });
  return views;
}

std::vector<float> normalized_depth(const RenderedView& view, const Camera& camera) {
  std::vector<float> out(view.depth.size(), 1.0f);
  const double range = camera.far - camera.near;
  for (size_t i = 0; i < view.depth.size(); ++i) {
    if (std::isfinite(view.depth[i]))
      out[i] = static_cast<float>(std::clamp((view.depth[i] - camera.near) / range, 0.0, 1.0));
  }
  return out;
}

}  // namespace boot3d
