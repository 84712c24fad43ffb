#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boot3d/types.hpp"

namespace boot3d {

/// Dense scalar occupancy volume. Sample (i,j,k) lives at the center of
/// cell (i,j,k), i.e. world position origin + (index + 0.5) .* spacing,
/// stored x-fastest. Values are clamped to [0,1] on construction.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(const Vec3i& dims, const Vec3& origin, const Vec3& spacing,
            std::vector<float> values);

  const Vec3i& dims() const { return dims_; }
  const Vec3& origin() const { return origin_; }
  const Vec3& spacing() const { return spacing_; }
  const std::vector<float>& values() const { return values_; }
  std::vector<float>& values() { return values_; }

  size_t cell_count() const { return values_.size(); }

  size_t index(int i, int j, int k) const {
    return static_cast<size_t>(i) +
           static_cast<size_t>(dims_[0]) *
               (static_cast<size_t>(j) + static_cast<size_t>(dims_[1]) * k);
  }
  float at(int i, int j, int k) const { return values_[index(i, j, k)]; }
  float& at(int i, int j, int k) { return values_[index(i, j, k)]; }

  /// World position of the sample (cell center).
  Vec3 sample_position(int i, int j, int k) const {
    return origin_ + ((Vec3(i, j, k).array() + 0.5) * spacing_.array()).matrix();
  }

  float min_value() const;
  float max_value() const;
  bool all_finite() const;

 private:
  Vec3i dims_ = Vec3i::Zero();
  Vec3 origin_ = Vec3::Zero();
  Vec3 spacing_ = Vec3::Ones();
  std::vector<float> values_;
};

/// Binary "VXG1" format: 16-byte magic header, u32-le dims, f64-le origin
/// and spacing, f32-le values x-fastest.
void write_vxg(const std::string& path, const VoxelGrid& grid);
VoxelGrid read_vxg(const std::string& path);

/// Raw VXG1 writer for non-occupancy payloads (e.g. normalized depth).
void write_vxg_raw(const std::string& path, const Vec3i& dims, const Vec3& origin,
                   const Vec3& spacing, const std::vector<float>& values);

}  // namespace boot3d
