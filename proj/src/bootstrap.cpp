#include "boot3d/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "boot3d/error.hpp"
#include "boot3d/marching_cubes.hpp"
#include "boot3d/parallel.hpp"
#include "boot3d/render.hpp"
#include "boot3d/voxelize.hpp"

namespace boot3d {

namespace {

std::string view_suffix(double yaw, double pitch) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "_y%+g_p%+g", yaw, pitch);
  return buf;
}

RigidTransform recentered(const RigidTransform& t, const Vec3& center) {
  RigidTransform out;
  out.rotation = t.rotation;
  out.translation = center - t.rotation * center;
  return out;
}

double proxy_interocular(const TriangleMesh& mesh, const FaceFrame& frame) {
  double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
  for (const Vec3& v : mesh.vertices) {
    const double s = v.dot(frame.lateral);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return 0.4 * (hi - lo);
}

}  // namespace

void BootstrapConfig::validate() const {
  if (!(split_ratio > 0.0 && split_ratio < 1.0))
    throw_error(ErrorCode::invalid_config, "split_ratio must lie in (0,1)");
  if (!(increment_deg > 0.0))
    throw_error(ErrorCode::invalid_config, "increment_deg must be > 0");
  if (epochs < 0 || batch_size <= 0)
    throw_error(ErrorCode::invalid_config, "bad epochs/batch_size");
  for (double yaw : yaw_set) {
    const double ratio = yaw / increment_deg;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
      throw_error(ErrorCode::invalid_config,
                  "yaw_set values must be multiples of increment_deg");
  }
}

std::vector<TrainingPair> generate_pairs(const Reconstructor& reconstructor,
                                         const std::vector<Image>& frontal_images,
                                         const BootstrapConfig& config, const Camera& camera,
                                         PairGenLog* log, int threads) {
  config.validate();
  std::vector<std::vector<TrainingPair>> per_image(frontal_images.size());
  std::vector<std::string> skipped(frontal_images.size());

  parallel_for(frontal_images.size(), threads, [&](size_t idx) {
    const Image& source = frontal_images[idx];
    try {
      const VoxelGrid grid = reconstructor.reconstruct(source);
      TriangleMesh mesh = marching_cubes(grid, 0.5);
      mesh = project_colors(mesh, source, camera);
      const FaceFrame frame = estimate_face_frame(mesh);
      const ViewSchedule schedule =
          build_schedule(frame, config.increment_deg, config.pitch_limit_deg,
                         config.gaze_limit_deg, config.yaw_set);
      const TriangleMesh backplane =
          make_backplane(frame, mesh_bounds(mesh), source, camera);

      for (const ViewEntry& entry : schedule.entries) {
        try {
          const TriangleMesh moved = apply_transform(mesh, entry.transform);
          RenderedView view = rasterize({moved, backplane}, camera);
          TrainingPair pair;
          pair.image = std::move(view.image);
          pair.image.id = source.id + view_suffix(entry.yaw_deg, entry.pitch_deg);
          pair.target =
              voxelize(moved, reconstructor.grid_dims(), reconstructor.grid_bounds());
          pair.provenance = {source.id, entry.transform, entry.yaw_deg, entry.pitch_deg};
          per_image[idx].push_back(std::move(pair));
        } catch (const Error& e) {
          skipped[idx] += source.id + view_suffix(entry.yaw_deg, entry.pitch_deg) + ": " +
                          e.what() + "\n";
        }
      }
    } catch (const Error& e) {
      skipped[idx] += source.id + ": " + e.what() + "\n";
    }
  });

  std::vector<TrainingPair> pairs;
  for (auto& group : per_image)
    for (auto& pair : group) pairs.push_back(std::move(pair));
  if (log) {
    for (const std::string& s : skipped) {
      std::istringstream ss(s);
      std::string line;
      while (std::getline(ss, line))
        if (!line.empty()) log->skipped.push_back(line);
    }
  }
  return pairs;
}

std::pair<std::vector<TrainingPair>, std::vector<TrainingPair>> split_pairs(
    const std::vector<TrainingPair>& pairs, double ratio, uint64_t seed) {
  if (pairs.empty()) throw_error(ErrorCode::invalid_input, "split_pairs: no pairs");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw_error(ErrorCode::invalid_input, "split_pairs: ratio must lie in (0,1)");

  std::vector<std::string> groups;
  for (const TrainingPair& p : pairs) {
    if (std::find(groups.begin(), groups.end(), p.provenance.source_id) == groups.end())
      groups.push_back(p.provenance.source_id);
  }
  std::sort(groups.begin(), groups.end());
  std::mt19937_64 rng(seed);
  std::shuffle(groups.begin(), groups.end(), rng);

  const int g = static_cast<int>(groups.size());
  int n_train = static_cast<int>(std::floor(ratio * g + 0.5));
  if (g >= 2) n_train = std::clamp(n_train, 1, g - 1);

  std::map<std::string, bool> in_train;
  for (int i = 0; i < g; ++i) in_train[groups[i]] = i < n_train;

  std::pair<std::vector<TrainingPair>, std::vector<TrainingPair>> out;
  for (const TrainingPair& p : pairs) {
    if (in_train.at(p.provenance.source_id))
      out.first.push_back(p);
    else
      out.second.push_back(p);
  }
  return out;
}

std::vector<TrainingSample> pairs_to_samples(const std::vector<TrainingPair>& pairs) {
  std::vector<TrainingSample> samples;
  samples.reserve(pairs.size());
  for (const TrainingPair& p : pairs) samples.push_back({p.image, p.target});
  return samples;
}

FineTuneResult fine_tune(TrainableReconstructor& model,
                         const std::vector<TrainingPair>& train,
                         const std::vector<TrainingPair>& val,
                         const BootstrapConfig& config) {
  config.validate();
  FineTuneResult result;
  if (config.epochs == 0) return result;
  if (train.empty()) throw_error(ErrorCode::invalid_input, "fine_tune: empty training set");

  const std::vector<TrainingSample> train_samples = pairs_to_samples(train);
  const std::vector<TrainingSample> val_samples = pairs_to_samples(val);
  std::vector<const TrainingSample*> val_batch;
  for (const TrainingSample& s : val_samples) val_batch.push_back(&s);

  std::mt19937_64 rng(config.seed);
  std::vector<size_t> order(train_samples.size());
  std::iota(order.begin(), order.end(), 0);

  auto* toy = dynamic_cast<ToyRegressor*>(&model);

  double best = std::numeric_limits<double>::max();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double lr = config.lr.at_epoch(epoch);
    double train_loss = 0.0;
    size_t batches = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t stop = std::min(order.size(), start + config.batch_size);
      std::vector<const TrainingSample*> batch;
      batch.reserve(stop - start);
      for (size_t i = start; i < stop; ++i) batch.push_back(&train_samples[order[i]]);
      train_loss += model.fit_step(batch, lr);
      ++batches;
    }
    result.log.push_back({epoch, lr, train_loss / static_cast<double>(batches)});

    double vloss = std::numeric_limits<double>::quiet_NaN();
    if (!val_batch.empty() && toy) vloss = toy->batch_loss(val_batch);
    result.val_loss.push_back(vloss);
    result.snapshots.push_back(model.snapshot_parameters());
    if (!std::isnan(vloss) && vloss < best) {
      best = vloss;
      result.best_epoch = epoch;
    }
  }
  if (result.best_epoch < 0) result.best_epoch = config.epochs - 1;
  return result;
}

NmeReport self_reconstruction_experiment(Reconstructor& reconstructor,
                                         const std::vector<Image>& images,
                                         const ViewSchedule& schedule, const Camera& camera,
                                         PairGenLog* log, int threads) {
  if (images.empty())
    throw_error(ErrorCode::invalid_input, "self_reconstruction_experiment: no images");

  std::vector<NmeRow> rows;
  std::mutex mutex;

  // Reconstruction and ground-truth registration stay sequential (the oracle
  // hook mutates the reconstructor); NME evaluation parallelizes per image.
  for (const Image& source : images) {
    struct Item {
      TriangleMesh back_mapped;
      double yaw, pitch;
      std::string id;
    };
    std::vector<Item> items;
    TriangleMesh first;
    double proxy_d = 0.0;
    std::string failure;
    try {
      const VoxelGrid grid0 = reconstructor.reconstruct(source);
      first = marching_cubes(grid0, 0.5);
      first = project_colors(first, source, camera);
      const FaceFrame frame = estimate_face_frame(first);
      proxy_d = proxy_interocular(first, frame);
      const TriangleMesh backplane =
          make_backplane(frame, mesh_bounds(first), source, camera);

      for (const ViewEntry& entry : schedule.entries) {
        const std::string id =
            source.id + view_suffix(entry.yaw_deg, entry.pitch_deg) + "_selfrecon";
        try {
          const RigidTransform t = recentered(entry.transform, frame.centroid);
          const TriangleMesh moved = apply_transform(first, t);
          RenderedView view = rasterize({moved, backplane}, camera);
          view.image.id = id;
          reconstructor.observe_ground_truth(id, moved);
          const VoxelGrid grid1 = reconstructor.reconstruct(view.image);
          const TriangleMesh second = marching_cubes(grid1, 0.5);
          if (second.vertices.empty())
            throw_error(ErrorCode::degenerate_input, "empty re-reconstruction");
          items.push_back(
              {apply_transform(second, inverse(t)), entry.yaw_deg, entry.pitch_deg, id});
        } catch (const Error& e) {
          NmeRow row;
          row.id = id;
          row.yaw_deg = entry.yaw_deg;
          row.pitch_deg = entry.pitch_deg;
          row.flags = std::string("error:") + e.code_name();
          std::lock_guard<std::mutex> lock(mutex);
          rows.push_back(row);
          if (log) log->skipped.push_back(id + ": " + e.what());
        }
      }
    } catch (const Error& e) {
      failure = e.what();
      if (log) log->skipped.push_back(source.id + ": " + failure);
      continue;
    }

    const BvhIndex index(first);
    std::vector<NmeRow> image_rows(items.size());
    parallel_for(items.size(), threads, [&](size_t i) {
      NmeRow row;
      row.id = items[i].id;
      row.yaw_deg = items[i].yaw;
      row.pitch_deg = items[i].pitch;
      row.flags = "proxy-d";
      row.nme = nme(items[i].back_mapped, index, proxy_d);
      image_rows[i] = std::move(row);
    });
    std::lock_guard<std::mutex> lock(mutex);
    for (auto& r : image_rows) rows.push_back(std::move(r));
  }
  return assemble_report(std::move(rows));
}

void write_pair_dataset(const std::string& dir, const std::vector<TrainingPair>& pairs) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream manifest(fs::path(dir) / "manifest.csv");
  if (!manifest) throw_error(ErrorCode::io_failure, "cannot write manifest in " + dir);
  manifest << "index,image,grid,source_id,yaw_deg,pitch_deg,"
              "r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz\n";
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (size_t i = 0; i < pairs.size(); ++i) {
    const TrainingPair& p = pairs[i];
    char img_name[64], grid_name[64];
    std::snprintf(img_name, sizeof(img_name), "pair_%06zu.ppm", i);
    std::snprintf(grid_name, sizeof(grid_name), "pair_%06zu.vxg", i);
    write_ppm((fs::path(dir) / img_name).string(), p.image);
    write_vxg((fs::path(dir) / grid_name).string(), p.target);
    manifest << i << ',' << img_name << ',' << grid_name << ',' << p.provenance.source_id
             << ',' << num(p.provenance.yaw_deg) << ',' << num(p.provenance.pitch_deg);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) manifest << ',' << num(p.provenance.transform.rotation(r, c));
    for (int k = 0; k < 3; ++k) manifest << ',' << num(p.provenance.transform.translation[k]);
    manifest << '\n';
  }
  if (!manifest) throw_error(ErrorCode::io_failure, "manifest write failed in " + dir);
}

std::vector<TrainingPair> read_pair_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream manifest(fs::path(dir) / "manifest.csv");
  if (!manifest) throw_error(ErrorCode::io_failure, "cannot open manifest in " + dir);
  std::vector<TrainingPair> pairs;
  std::string line;
  std::getline(manifest, line);  // header
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) cols.push_back(item);
    if (cols.size() != 18)
      throw_error(ErrorCode::io_failure, "bad manifest row in " + dir);
    TrainingPair p;
    p.image = read_ppm((fs::path(dir) / cols[1]).string());
    p.target = read_vxg((fs::path(dir) / cols[2]).string());
    p.provenance.source_id = cols[3];
    p.provenance.yaw_deg = std::stod(cols[4]);
    p.provenance.pitch_deg = std::stod(cols[5]);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        p.provenance.transform.rotation(r, c) = std::stod(cols[6 + 3 * r + c]);
    for (int k = 0; k < 3; ++k) p.provenance.transform.translation[k] = std::stod(cols[15 + k]);
    p.image.id = p.provenance.source_id + view_suffix(p.provenance.yaw_deg, p.provenance.pitch_deg);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace boot3d
