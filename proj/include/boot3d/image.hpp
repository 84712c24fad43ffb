#pragma once

#include <string>
#include <vector>

#include "boot3d/types.hpp"

namespace boot3d {

/// Row-major RGB image, channels in [0,1]. `id` is pipeline metadata (used
/// to key oracle registrations); it does not participate in file I/O.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;  // 3 floats per pixel
  std::string id;

  Image() = default;
  Image(int w, int h, const Vec3f& fill = Vec3f::Zero());

  bool empty() const { return width <= 0 || height <= 0; }

  Vec3f at(int x, int y) const {
    const size_t o = 3 * (static_cast<size_t>(y) * width + x);
    return Vec3f(pixels[o], pixels[o + 1], pixels[o + 2]);
  }
  void set(int x, int y, const Vec3f& rgb) {
    const size_t o = 3 * (static_cast<size_t>(y) * width + x);
    pixels[o] = rgb[0];
    pixels[o + 1] = rgb[1];
    pixels[o + 2] = rgb[2];
  }

  /// Bilinear sample at continuous pixel coordinates (pixel centers at
  /// integer + 0.5), clamped to the image border.
  Vec3f sample_bilinear(double px, double py) const;

  /// Mean of R,G,B per pixel, area-averaged down to (w, h).
  std::vector<float> to_grayscale_resized(int w, int h) const;
};

/// Binary PPM (P6, maxval 255). Channels are quantized with round-to-nearest.
void write_ppm(const std::string& path, const Image& image);
Image read_ppm(const std::string& path);

}  // namespace boot3d
