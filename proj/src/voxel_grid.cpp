#include "boot3d/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "boot3d/error.hpp"

namespace boot3d {

VoxelGrid::VoxelGrid(const Vec3i& dims, const Vec3& origin, const Vec3& spacing,
                     std::vector<float> values)
    : dims_(dims), origin_(origin), spacing_(spacing), values_(std::move(values)) {
  if ((dims_.array() <= 0).any())
    throw_error(ErrorCode::invalid_input, "VoxelGrid: dims must be positive");
  if ((spacing_.array() <= 0.0).any())
    throw_error(ErrorCode::invalid_input, "VoxelGrid: spacing must be positive");
  if (!origin_.allFinite() || !spacing_.allFinite())
    throw_error(ErrorCode::invalid_input, "VoxelGrid: non-finite origin/spacing");
  const size_t expect = static_cast<size_t>(dims_[0]) * dims_[1] * dims_[2];
  if (values_.size() != expect)
    throw_error(ErrorCode::invalid_input, "VoxelGrid: value count mismatch");
  for (float& v : values_) v = std::clamp(v, 0.0f, 1.0f);  // NaN passes through
}

float VoxelGrid::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

float VoxelGrid::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

bool VoxelGrid::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](float v) { return std::isfinite(v); });
}

namespace {

constexpr char kMagic[16] = {'V', 'X', 'G', '1', 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};

template <class T>
void write_le(std::ostream& out, T value) {
  // Little-endian host assumed; serialize via memcpy to keep aliasing clean.
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
  char buf[sizeof(T)];
  in.read(buf, sizeof(T));
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

void write_payload(std::ostream& out, const Vec3i& dims, const Vec3& origin,
                   const Vec3& spacing, const std::vector<float>& values) {
  out.write(kMagic, sizeof(kMagic));
  for (int k = 0; k < 3; ++k) write_le<uint32_t>(out, static_cast<uint32_t>(dims[k]));
  for (int k = 0; k < 3; ++k) write_le<double>(out, origin[k]);
  for (int k = 0; k < 3; ++k) write_le<double>(out, spacing[k]);
  for (float v : values) write_le<float>(out, v);
}

}  // namespace

void write_vxg_raw(const std::string& path, const Vec3i& dims, const Vec3& origin,
                   const Vec3& spacing, const std::vector<float>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorCode::io_failure, "cannot open for write: " + path);
  write_payload(out, dims, origin, spacing, values);
  if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
}

void write_vxg(const std::string& path, const VoxelGrid& grid) {
  write_vxg_raw(path, grid.dims(), grid.origin(), grid.spacing(), grid.values());
}

VoxelGrid read_vxg(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::io_failure, "cannot open: " + path);
  char magic[16];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw_error(ErrorCode::io_failure, "not a VXG1 file: " + path);
  Vec3i dims;
  for (int k = 0; k < 3; ++k) dims[k] = static_cast<int>(read_le<uint32_t>(in));
  Vec3 origin, spacing;
  for (int k = 0; k < 3; ++k) origin[k] = read_le<double>(in);
  for (int k = 0; k < 3; ++k) spacing[k] = read_le<double>(in);
  if (!in || (dims.array() <= 0).any())
    throw_error(ErrorCode::io_failure, "corrupt VXG1 header: " + path);
  const size_t count = static_cast<size_t>(dims[0]) * dims[1] * dims[2];
  std::vector<float> values(count);
  for (size_t i = 0; i < count; ++i) values[i] = read_le<float>(in);
  if (!in) throw_error(ErrorCode::io_failure, "truncated VXG1 payload: " + path);
  return VoxelGrid(dims, origin, spacing, std::move(values));
}

}  // namespace boot3d
