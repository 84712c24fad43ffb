#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "boot3d/image.hpp"
#include "boot3d/mesh.hpp"
#include "boot3d/voxel_grid.hpp"

namespace boot3d {

/// Single-image-to-volume reconstructor. Implementations must be
/// deterministic given their parameters and produce grids of fixed dims.
class Reconstructor {
 public:
  virtual ~Reconstructor() = default;

  virtual VoxelGrid reconstruct(const Image& image) const = 0;
  virtual Vec3i grid_dims() const = 0;
  virtual Aabb grid_bounds() const = 0;

  /// Pipeline hook: lets privileged reconstructors (the oracle) record the
  /// true mesh behind an image id. Default is a no-op.
  virtual void observe_ground_truth(const std::string& /*image_id*/,
                                    const TriangleMesh& /*mesh*/) {}
};

struct TrainingSample {
  Image image;
  VoxelGrid target;
};

/// Reconstructor with SGD-trainable parameters.
class TrainableReconstructor : public Reconstructor {
 public:
  /// One gradient step on the batch; returns the batch's mean loss
  /// evaluated before the update. lr = 0 leaves parameters untouched.
  virtual double fit_step(const std::vector<const TrainingSample*>& batch,
                          double learning_rate) = 0;

  virtual std::vector<double> snapshot_parameters() const = 0;
  virtual void restore_parameters(const std::vector<double>& params) = 0;
};

/// Perfect reconstructor over a registry of known images: returns the
/// voxelization of the mesh registered under the image id, regardless of
/// pose. Realizes the "accurate on the good domain" premise exactly.
/// Occupancy is supersampled so the extracted surface is sub-cell accurate;
/// supersampling = 1 gives the plain binary voxelization.
class OracleReconstructor : public Reconstructor {
 public:
  OracleReconstructor(const Vec3i& dims, const Aabb& bounds, int supersampling = 3)
      : dims_(dims), bounds_(bounds), supersampling_(supersampling) {}

  void register_mesh(const std::string& image_id, TriangleMesh mesh);
  bool knows(const std::string& image_id) const { return registry_.count(image_id) != 0; }

  VoxelGrid reconstruct(const Image& image) const override;
  Vec3i grid_dims() const override { return dims_; }
  Aabb grid_bounds() const override { return bounds_; }
  void observe_ground_truth(const std::string& image_id, const TriangleMesh& mesh) override {
    register_mesh(image_id, mesh);
  }

 private:
  Vec3i dims_;
  Aabb bounds_;
  int supersampling_;
  std::map<std::string, TriangleMesh> registry_;
};

}  // namespace boot3d
