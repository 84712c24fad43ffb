#pragma once

#include <Eigen/Core>

#include "boot3d/reconstructor.hpp"

namespace boot3d {

/// Learning-rate schedule: initial * decay_factor^floor(epoch / period).
struct LrSchedule {
  double initial = 1e-2;
  double decay_factor = 0.5;
  int decay_period_epochs = 5;

  double at_epoch(int epoch) const;
};

/// Minimal trainable reconstructor: a linear map from a downsampled
/// grayscale image (plus bias) to per-cell occupancy logits, squashed by a
/// logistic. Trained with plain SGD on per-cell binary cross-entropy. Small
/// enough that a full bootstrap experiment runs in minutes, big enough to
/// show (and then shed) frontal-pose bias.
class ToyRegressor : public TrainableReconstructor {
 public:
  ToyRegressor(int input_w, int input_h, const Vec3i& grid_dims, const Aabb& grid_bounds);

  VoxelGrid reconstruct(const Image& image) const override;
  Vec3i grid_dims() const override { return dims_; }
  Aabb grid_bounds() const override { return bounds_; }

  double fit_step(const std::vector<const TrainingSample*>& batch,
                  double learning_rate) override;
  /// Mean per-cell BCE of the batch at the current parameters.
  double batch_loss(const std::vector<const TrainingSample*>& batch) const;

  std::vector<double> snapshot_parameters() const override;
  void restore_parameters(const std::vector<double>& params) override;

  int input_width() const { return in_w_; }
  int input_height() const { return in_h_; }
  size_t parameter_count() const { return static_cast<size_t>(weights_.size()); }

 private:
  Eigen::VectorXd featurize(const Image& image) const;

  int in_w_;
  int in_h_;
  Vec3i dims_;
  Aabb bounds_;
  Eigen::MatrixXd weights_;  // cells x (in_w*in_h + 1), zero-initialized
};

struct EpochLog {
  int epoch = 0;
  double learning_rate = 0.0;
  double train_loss = 0.0;
};

/// Seeded SGD over the dataset: shuffles sample order each epoch, steps per
/// batch, records the mean pre-update batch loss per epoch. Deterministic
/// for a fixed (seed, dataset order).
std::vector<EpochLog> toy_fit(ToyRegressor& model, const std::vector<TrainingSample>& dataset,
                              int epochs, int batch_size, const LrSchedule& schedule,
                              uint64_t seed);

/// Versioned binary model file, magic "TOY1": u32 input dims and grid dims,
/// f64 grid origin/spacing, then f64 parameters.
void write_toy(const std::string& path, const ToyRegressor& model);
ToyRegressor read_toy(const std::string& path);

}  // namespace boot3d
