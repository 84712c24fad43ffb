#pragma once

#include <map>
#include <string>
#include <vector>

#include "boot3d/bootstrap.hpp"
#include "boot3d/camera.hpp"

namespace boot3d {

/// One documented, versioned key-value file drives every pipeline run.
/// Unknown keys are rejected; missing keys take the defaults below. The
/// effective configuration (after flag overrides) is hashed into every
/// output manifest; `threads` is execution-only and stays out of the hash.
struct PipelineConfig {
  int config_version = 1;
  uint64_t seed = 1;
  int threads = 1;

  // Camera / rendering.
  int image_width = 128;
  int image_height = 128;
  double camera_center_x = 0.0;
  double camera_center_y = 0.0;
  double camera_half_w = 1.2;
  double camera_half_h = 1.2;
  double camera_near = -4.0;
  double camera_far = 4.0;

  // Reconstruction volume (cube), shared by oracle and toy grids.
  double volume_min = -1.15;
  double volume_max = 1.15;
  int oracle_grid_n = 48;
  int oracle_supersampling = 3;
  double iso = 0.5;

  // Toy regressor.
  int toy_input_w = 16;
  int toy_input_h = 16;
  int toy_grid_n = 16;

  // View schedule.
  double increment_deg = 10.0;
  double pitch_limit_deg = 0.0;
  double gaze_limit_deg = 90.0;
  std::vector<double> yaw_set = {-60, -40, -20, 20, 40, 60};

  // Bootstrap fine-tuning.
  double split_ratio = 0.9;
  int epochs = 10;
  int batch_size = 32;
  double lr_initial = 0.6;
  double lr_decay_factor = 0.5;
  int lr_decay_period = 5;
  bool include_frontal_seed_pairs = false;

  // Desk-scale benchmark for bootstrap-run / self-recon demos.
  int train_faces = 40;
  int bootstrap_faces = 16;
  int eval_faces = 20;
  int base_epochs = 30;
  double base_lr_initial = 1.2;
  std::vector<double> base_yaws = {-10, 0, 10};
  std::vector<double> eval_yaws = {-60, -50, -40, -30, -20, -10, 0, 10, 20, 30, 40, 50, 60};

  Camera camera() const;
  Aabb volume_bounds() const;
  BootstrapConfig bootstrap() const;

  /// Applies "key = value"; throws Error(invalid_config) on unknown keys or
  /// unparsable values.
  void set(const std::string& key, const std::string& value);

  void validate() const;

  /// Canonical "key = value" listing of every hashed key.
  std::string canonical() const;
  /// FNV-1a 64-bit hash of canonical(), as 16 hex digits.
  std::string hash() const;
};

PipelineConfig load_pipeline_config(const std::string& path);
void write_pipeline_config(const std::string& path, const PipelineConfig& config);

}  // namespace boot3d
