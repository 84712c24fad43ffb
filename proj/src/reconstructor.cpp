#include "boot3d/reconstructor.hpp"

#include "boot3d/error.hpp"
#include "boot3d/voxelize.hpp"

namespace boot3d {

void OracleReconstructor::register_mesh(const std::string& image_id, TriangleMesh mesh) {
  if (image_id.empty())
    throw_error(ErrorCode::invalid_input, "oracle: empty image id");
  registry_[image_id] = std::move(mesh);
}

VoxelGrid OracleReconstructor::reconstruct(const Image& image) const {
  auto it = registry_.find(image.id);
  if (it == registry_.end())
    throw_error(ErrorCode::invalid_input, "oracle: unknown image id '" + image.id + "'");
  return voxelize_occupancy(it->second, dims_, bounds_, supersampling_);
}

}  // namespace boot3d
