#pragma once

#include <array>
#include <string>
#include <vector>

#include "boot3d/bootstrap.hpp"
#include "boot3d/pipeline_config.hpp"
#include "boot3d/synthetic_face.hpp"

namespace boot3d {

/// One synthetic face with its ground-truth mesh.
struct FaceSample {
  uint64_t seed = 0;
  std::string id;
  TriangleMesh mesh;
};

/// Deterministic bank of faces: seeds first_seed .. first_seed + count - 1.
std::vector<FaceSample> make_face_bank(uint64_t first_seed, int count);

/// A rendered view of a face plus the transformed ground-truth mesh.
struct RenderedSample {
  Image image;
  TriangleMesh gt;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  std::string id;
};

/// Renders the face rotated about its centroid over a black background.
RenderedSample render_face_view(const FaceSample& face, double yaw_deg, double pitch_deg,
                                const Camera& camera);

/// The fixed desk-scale benchmark: disjoint face banks for supervised base
/// training (frontal-ish poses only), bootstrap sources (frontal renders,
/// no 3D used downstream) and held-out evaluation across the yaw range.
struct Benchmark {
  PipelineConfig config;
  std::vector<FaceSample> train_faces;      // seeds 1000+
  std::vector<FaceSample> bootstrap_faces;  // seeds 3000+
  std::vector<FaceSample> eval_faces;       // seeds 2000+
  std::vector<TrainingSample> base_dataset;
  std::vector<RenderedSample> eval_set;
  std::vector<Image> bootstrap_sources;
};

Benchmark build_benchmark(const PipelineConfig& config);

ToyRegressor make_toy_model(const PipelineConfig& config);

/// Base ("biased") training on the frontal-only dataset.
std::vector<EpochLog> train_base_model(ToyRegressor& model, const Benchmark& bench,
                                       uint64_t seed);

/// Reconstruct each sample, extract the iso-0.5 mesh, and score NME against
/// the ground-truth mesh (landmark normalizer, no alignment so pose errors
/// stay visible). Failures become flagged rows.
NmeReport evaluate_model(const Reconstructor& model, const std::vector<RenderedSample>& samples,
                         double iso, int threads = 1);

/// Mean NME over |yaw| in [0,20), [20,40), [40,60]; NaN for empty buckets.
std::array<double, 3> abs_yaw_bucket_means(const NmeReport& report);

struct VariantResult {
  std::vector<double> yaw_set;
  size_t pair_count = 0;
  FineTuneResult tune;
  NmeReport post_eval;
  std::vector<TrainingPair> pairs;  // kept when keep_pairs was requested
};

/// Full bootstrap pass for one yaw-set variant: generate pairs with the
/// base model's own reconstructions, group-split, fine-tune, restore the
/// best-validation snapshot, evaluate on the held-out set.
VariantResult run_bootstrap_variant(const Benchmark& bench, const ToyRegressor& base_model,
                                    const std::vector<double>& yaw_set, uint64_t seed,
                                    bool keep_pairs = false, PairGenLog* log = nullptr);

/// Self-reconstruction robustness run over the constrained full lattice
/// (yaw_set ignored); frontal renders are registered with the reconstructor
/// via observe_ground_truth so an oracle realizes the good-domain premise.
NmeReport run_self_reconstruction(const PipelineConfig& config, Reconstructor& reconstructor,
                                  const std::vector<FaceSample>& faces,
                                  PairGenLog* log = nullptr);

/// Sphere occupancy fixture: per-cell inside fraction from
/// samples_per_axis^3 sub-points, so the 0.5 level sits on the sphere.
VoxelGrid make_sphere_occupancy_grid(int n, const Vec3& center, double radius,
                                     const Aabb& bounds, int samples_per_axis = 4);

}  // namespace boot3d
