#include "boot3d/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "boot3d/error.hpp"

namespace boot3d {

Image::Image(int w, int h, const Vec3f& fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw_error(ErrorCode::invalid_input, "Image: non-positive size");
  pixels.resize(static_cast<size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) set(x, y, fill);
}

Vec3f Image::sample_bilinear(double px, double py) const {
  const double fx = std::clamp(px - 0.5, 0.0, static_cast<double>(width - 1));
  const double fy = std::clamp(py - 0.5, 0.0, static_cast<double>(height - 1));
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const float tx = static_cast<float>(fx - x0);
  const float ty = static_cast<float>(fy - y0);
  const Vec3f top = (1.0f - tx) * at(x0, y0) + tx * at(x1, y0);
  const Vec3f bot = (1.0f - tx) * at(x0, y1) + tx * at(x1, y1);
  return (1.0f - ty) * top + ty * bot;
}

std::vector<float> Image::to_grayscale_resized(int w, int h) const {
  std::vector<float> out(static_cast<size_t>(w) * h, 0.0f);
  if (empty()) return out;
  // Area average over the source box covered by each target pixel.
  for (int ty = 0; ty < h; ++ty) {
    const int y0 = ty * height / h;
    const int y1 = std::max(y0 + 1, (ty + 1) * height / h);
    for (int tx = 0; tx < w; ++tx) {
      const int x0 = tx * width / w;
      const int x1 = std::max(x0 + 1, (tx + 1) * width / w);
      double acc = 0.0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
          const Vec3f c = at(x, std::min(y, height - 1));
          acc += (c[0] + c[1] + c[2]) / 3.0;
        }
      out[static_cast<size_t>(ty) * w + tx] =
          static_cast<float>(acc / ((y1 - y0) * (x1 - x0)));
    }
  }
  return out;
}

void write_ppm(const std::string& path, const Image& image) {
  if (image.empty()) throw_error(ErrorCode::invalid_input, "write_ppm: empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorCode::io_failure, "cannot open for write: " + path);
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  std::vector<unsigned char> bytes(image.pixels.size());
  for (size_t i = 0; i < image.pixels.size(); ++i) {
    const float v = std::clamp(image.pixels[i], 0.0f, 1.0f);
    bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0f));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
}

Image read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::io_failure, "cannot open: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P6") throw_error(ErrorCode::io_failure, "not a P6 PPM: " + path);
  // Skip whitespace and '#' comments between header fields.
  auto next_int = [&]() {
    int c = in.get();
    while (c == '#' || std::isspace(c)) {
      if (c == '#') {
        while (c != '\n' && c != EOF) c = in.get();
      }
      c = in.get();
    }
    in.unget();
    int v = 0;
    in >> v;
    return v;
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  in.get();  // single whitespace after maxval
  if (w <= 0 || h <= 0 || maxval != 255)
    throw_error(ErrorCode::io_failure, "unsupported PPM header: " + path);
  Image image(w, h);
  std::vector<unsigned char> bytes(static_cast<size_t>(w) * h * 3);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!in) throw_error(ErrorCode::io_failure, "truncated PPM payload: " + path);
  for (size_t i = 0; i < bytes.size(); ++i)
    image.pixels[i] = static_cast<float>(bytes[i]) / 255.0f;
  return image;
}

}  // namespace boot3d
