#include "boot3d/experiments.hpp"

#include <cmath>
#include <cstdio>

#include "boot3d/error.hpp"
#include "boot3d/marching_cubes.hpp"
#include "boot3d/parallel.hpp"
#include "boot3d/render.hpp"
#include "boot3d/voxelize.hpp"

namespace boot3d {

namespace {

std::string face_id(uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "face%llu", static_cast<unsigned long long>(seed));
  return buf;
}

std::string pose_suffix(double yaw, double pitch) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "_y%+g_p%+g", yaw, pitch);
  return buf;
}

}  // namespace

std::vector<FaceSample> make_face_bank(uint64_t first_seed, int count) {
  std::vector<FaceSample> faces(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const uint64_t seed = first_seed + static_cast<uint64_t>(i);
    faces[i] = {seed, face_id(seed), generate_synthetic_face(random_face_spec(seed))};
  }
  return faces;
}

RenderedSample render_face_view(const FaceSample& face, double yaw_deg, double pitch_deg,
                                const Camera& camera) {
  const Vec3 center = mesh_centroid(face.mesh);
  const RigidTransform t = view_rotation(yaw_deg, pitch_deg, center);
  RenderedSample sample;
  sample.gt = apply_transform(face.mesh, t);
  RenderedView view = rasterize({sample.gt}, camera);
  sample.image = std::move(view.image);
  sample.yaw_deg = yaw_deg;
  sample.pitch_deg = pitch_deg;
  sample.id = face.id + pose_suffix(yaw_deg, pitch_deg);
  sample.image.id = sample.id;
  return sample;
}

Benchmark build_benchmark(const PipelineConfig& config) {
  config.validate();
  Benchmark bench;
  bench.config = config;
  bench.train_faces = make_face_bank(1000, config.train_faces);
  bench.eval_faces = make_face_bank(2000, config.eval_faces);
  bench.bootstrap_faces = make_face_bank(3000, config.bootstrap_faces);

  const Camera cam = config.camera();
  const Aabb volume = config.volume_bounds();
  const Vec3i toy_dims = Vec3i::Constant(config.toy_grid_n);

  for (const FaceSample& face : bench.train_faces) {
    for (double yaw : config.base_yaws) {
      RenderedSample view = render_face_view(face, yaw, 0.0, cam);
      TrainingSample sample;
      sample.image = std::move(view.image);
      sample.target = voxelize(view.gt, toy_dims, volume);
      bench.base_dataset.push_back(std::move(sample));
    }
  }
  for (const FaceSample& face : bench.eval_faces) {
    for (double yaw : config.eval_yaws)
      bench.eval_set.push_back(render_face_view(face, yaw, 0.0, cam));
  }
  for (const FaceSample& face : bench.bootstrap_faces) {
    RenderedSample frontal = render_face_view(face, 0.0, 0.0, cam);
    frontal.image.id = face.id;  // sources are "just images" downstream
    bench.bootstrap_sources.push_back(std::move(frontal.image));
  }
  return bench;
}

ToyRegressor make_toy_model(const PipelineConfig& config) {
  return ToyRegressor(config.toy_input_w, config.toy_input_h,
                      Vec3i::Constant(config.toy_grid_n), config.volume_bounds());
}

std::vector<EpochLog> train_base_model(ToyRegressor& model, const Benchmark& bench,
                                       uint64_t seed) {
  LrSchedule lr;
  lr.initial = bench.config.base_lr_initial;
  lr.decay_factor = bench.config.lr_decay_factor;
  lr.decay_period_epochs = bench.config.lr_decay_period;
  return toy_fit(model, bench.base_dataset, bench.config.base_epochs,
                 bench.config.batch_size, lr, seed);
}

NmeReport evaluate_model(const Reconstructor& model, const std::vector<RenderedSample>& samples,
                         double iso, int threads) {
  std::vector<NmeRow> rows(samples.size());
  parallel_for(samples.size(), threads, [&](size_t i) {
    const RenderedSample& s = samples[i];
    NmeRow row;
    row.id = s.id;
    row.yaw_deg = s.yaw_deg;
    row.pitch_deg = s.pitch_deg;
    try {
      const VoxelGrid grid = model.reconstruct(s.image);
      const TriangleMesh pred = marching_cubes(grid, iso);
      if (pred.vertices.empty())
        throw_error(ErrorCode::degenerate_input, "empty reconstruction surface");
      row.nme = nme(pred, s.gt, interocular_distance(s.gt));
    } catch (const Error& e) {
      row.flags = std::string("error:") + e.code_name();
    }
    rows[i] = std::move(row);
  });
  return assemble_report(std::move(rows));
}

std::array<double, 3> abs_yaw_bucket_means(const NmeReport& report) {
  std::array<double, 2> sums[3] = {{0, 0}, {0, 0}, {0, 0}};
  for (const NmeRow& r : report.rows) {
    if (r.failed()) continue;
    const double ay = std::abs(r.yaw_deg);
    int bucket;
    if (ay < 20.0)
      bucket = 0;
    else if (ay < 40.0)
      bucket = 1;
    else if (ay <= 60.0)
      bucket = 2;
    else
      continue;
    sums[bucket][0] += r.nme;
    sums[bucket][1] += 1.0;
  }
  std::array<double, 3> means{};
  for (int b = 0; b < 3; ++b)
    means[b] = sums[b][1] > 0 ? sums[b][0] / sums[b][1]
                              : std::numeric_limits<double>::quiet_NaN();
  return means;
}

VariantResult run_bootstrap_variant(const Benchmark& bench, const ToyRegressor& base_model,
                                    const std::vector<double>& yaw_set, uint64_t seed,
                                    bool keep_pairs, PairGenLog* log) {
  const PipelineConfig& config = bench.config;
  BootstrapConfig cfg = config.bootstrap();
  cfg.yaw_set = yaw_set;
  cfg.seed = seed;

  ToyRegressor model = base_model;
  std::vector<TrainingPair> pairs = generate_pairs(model, bench.bootstrap_sources, cfg,
                                                   config.camera(), log, config.threads);
  if (pairs.empty())
    throw_error(ErrorCode::degenerate_input, "bootstrap produced no training pairs");

  if (cfg.include_frontal_seed_pairs) {
    for (const Image& source : bench.bootstrap_sources) {
      try {
        const VoxelGrid grid = model.reconstruct(source);
        const TriangleMesh mesh = marching_cubes(grid, config.iso);
        TrainingPair seed_pair;
        seed_pair.image = source;
        seed_pair.target = voxelize(mesh, model.grid_dims(), model.grid_bounds());
        seed_pair.provenance = {source.id, RigidTransform::identity(), 0.0, 0.0};
        pairs.push_back(std::move(seed_pair));
      } catch (const Error& e) {
        if (log) log->skipped.push_back(source.id + " (seed pair): " + e.what());
      }
    }
  }

  auto [train, val] = split_pairs(pairs, cfg.split_ratio, cfg.seed);

  VariantResult result;
  result.yaw_set = yaw_set;
  result.pair_count = pairs.size();
  result.tune = fine_tune(model, train, val, cfg);
  if (result.tune.best_epoch >= 0)
    model.restore_parameters(result.tune.snapshots[result.tune.best_epoch]);
  result.post_eval = evaluate_model(model, bench.eval_set, config.iso, config.threads);
  if (keep_pairs) result.pairs = std::move(pairs);
  return result;
}

NmeReport run_self_reconstruction(const PipelineConfig& config, Reconstructor& reconstructor,
                                  const std::vector<FaceSample>& faces, PairGenLog* log) {
  const Camera cam = config.camera();
  std::vector<Image> frontals;
  for (const FaceSample& face : faces) {
    RenderedSample frontal = render_face_view(face, 0.0, 0.0, cam);
    frontal.image.id = face.id + "_frontal";
    reconstructor.observe_ground_truth(frontal.image.id, frontal.gt);
    frontals.push_back(std::move(frontal.image));
  }
  const ViewSchedule schedule =
      build_schedule(FaceFrame{}, config.increment_deg, config.pitch_limit_deg,
                     config.gaze_limit_deg);
  return self_reconstruction_experiment(reconstructor, frontals, schedule, cam, log,
                                        config.threads);
}

VoxelGrid make_sphere_occupancy_grid(int n, const Vec3& center, double radius,
                                     const Aabb& bounds, int samples_per_axis) {
  const Vec3i dims = Vec3i::Constant(n);
  const Vec3 spacing = (bounds.extent().array() / static_cast<double>(n)).matrix();
  std::vector<float> values(static_cast<size_t>(n) * n * n);
  const int s = samples_per_axis;
  const double r2 = radius * radius;
  size_t idx = 0;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        int inside = 0;
        for (int dk = 0; dk < s; ++dk)
          for (int dj = 0; dj < s; ++dj)
            for (int di = 0; di < s; ++di) {
              const Vec3 p = bounds.min +
                             (Vec3(i + (di + 0.5) / s, j + (dj + 0.5) / s,
                                   k + (dk + 0.5) / s)
                                  .array() *
                              spacing.array())
                                 .matrix();
              if ((p - center).squaredNorm() < r2) ++inside;
            }
        values[idx++] = static_cast<float>(inside) / static_cast<float>(s * s * s);
      }
    }
  }
  return VoxelGrid(dims, bounds.min, spacing, std::move(values));
}

}  // namespace boot3d
