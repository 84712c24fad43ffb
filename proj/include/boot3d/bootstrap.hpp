#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boot3d/camera.hpp"
#include "boot3d/metrics.hpp"
#include "boot3d/reconstructor.hpp"
#include "boot3d/toy_regressor.hpp"
#include "boot3d/view_schedule.hpp"

namespace boot3d {

/// One synthesized supervision pair: the rendered novel view and the
/// voxelized transformed reconstruction it should map back to.
struct TrainingPair {
  Image image;
  VoxelGrid target;
  struct Provenance {
    std::string source_id;
    RigidTransform transform;
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
  } provenance;
};

struct BootstrapConfig {
  std::vector<double> yaw_set = {-60, -40, -20, 20, 40, 60};
  double pitch_limit_deg = 0.0;
  double increment_deg = 10.0;
  double gaze_limit_deg = 90.0;
  double split_ratio = 0.9;
  int epochs = 10;
  int batch_size = 32;
  LrSchedule lr;
  uint64_t seed = 1;
  bool include_frontal_seed_pairs = false;

  void validate() const;
};

struct PairGenLog {
  std::vector<std::string> skipped;  // "<image id>: <reason>" per failure
};

/// The pair-construction pipeline: reconstruct each (assumed near-frontal)
/// image, extract the mesh, estimate its frame, build the constrained view
/// schedule, then per entry render the transformed mesh over the fixed
/// backplane and voxelize the transformed mesh as the target. Per-image and
/// per-view failures are skipped and logged, never fatal. Output order is
/// image-major in input order, then schedule order.
std::vector<TrainingPair> generate_pairs(const Reconstructor& reconstructor,
                                         const std::vector<Image>& frontal_images,
                                         const BootstrapConfig& config, const Camera& camera,
                                         PairGenLog* log = nullptr, int threads = 1);

/// Seeded group-wise split: all pairs sharing a source image land on the
/// same side, and both sides are non-empty whenever two groups exist.
std::pair<std::vector<TrainingPair>, std::vector<TrainingPair>> split_pairs(
    const std::vector<TrainingPair>& pairs, double ratio, uint64_t seed);

struct FineTuneResult {
  std::vector<std::vector<double>> snapshots;  // parameters after each epoch
  std::vector<EpochLog> log;
  std::vector<double> val_loss;  // per epoch
  int best_epoch = -1;           // argmin val loss, -1 when no epochs ran
};

/// SGD fine-tuning on the pair images/targets with the configured schedule;
/// validation loss is recorded after every epoch and the best-val epoch is
/// designated. The model is left at the final epoch's parameters.
FineTuneResult fine_tune(TrainableReconstructor& model,
                         const std::vector<TrainingPair>& train,
                         const std::vector<TrainingPair>& val, const BootstrapConfig& config);

/// The self-reconstruction robustness experiment: reconstruct, transform by
/// each schedule entry (re-centered on the reconstruction's centroid),
/// render, reconstruct again, undo the transform, and compare against the
/// first reconstruction with NME (proxy normalizer). The reconstructor's
/// observe_ground_truth hook is fed each rendered view's true mesh so a
/// privileged oracle can realize pose-independent reconstruction.
NmeReport self_reconstruction_experiment(Reconstructor& reconstructor,
                                         const std::vector<Image>& images,
                                         const ViewSchedule& schedule, const Camera& camera,
                                         PairGenLog* log = nullptr, int threads = 1);

/// Pair dataset on disk: manifest.csv plus per-pair PPM and VXG1 files.
void write_pair_dataset(const std::string& dir, const std::vector<TrainingPair>& pairs);
std::vector<TrainingPair> read_pair_dataset(const std::string& dir);

std::vector<TrainingSample> pairs_to_samples(const std::vector<TrainingPair>& pairs);

}  // namespace boot3d
