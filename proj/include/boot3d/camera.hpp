#pragma once

#include "boot3d/types.hpp"

namespace boot3d {

/// Orthographic camera on +z looking along -z, y up. view_rect is the world
/// window (center, half extents) mapped onto the image; depth is -z so that
/// smaller depth means closer to the camera. Pixel row 0 is the top.
struct Camera {
  double center_x = 0.0;
  double center_y = 0.0;
  double half_w = 1.0;
  double half_h = 1.0;
  int image_width = 128;
  int image_height = 128;
  double near = -1e9;
  double far = 1e9;

  /// World point -> continuous pixel coordinates plus depth.
  Vec3 project(const Vec3& p) const {
    const double u = (p[0] - center_x) / half_w;   // [-1, 1] across view
    const double v = (p[1] - center_y) / half_h;
    return Vec3((u + 1.0) * 0.5 * image_width,
                (1.0 - v) * 0.5 * image_height,
                -p[2]);
  }
};

}  // namespace boot3d
