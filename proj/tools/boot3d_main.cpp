// boot3d: batch pipeline for self-supervised bootstrap 3D face reconstruction.
//
// Subcommands: extract-mesh, estimate-pose, render-sweep, gen-pairs,
// bootstrap-run, evaluate, self-recon, make-demo. Every run writes a
// manifest.csv carrying the effective config hash and seed; timestamps go
// to run.log so manifests stay byte-identical across reruns.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "boot3d/error.hpp"
#include "boot3d/experiments.hpp"
#include "boot3d/marching_cubes.hpp"
#include "boot3d/mesh_io.hpp"
#include "boot3d/render.hpp"
#include "boot3d/voxelize.hpp"

namespace fs = std::filesystem;
using namespace boot3d;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_config:
      return 1;
    case ErrorCode::numerical_failure:
      return 3;
    default:
      return 2;  // data errors
  }
}

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  int threads = 0;                     // 0: config/env decide
  long long seed = -1;                 // <0: config decides
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "pipeline config file");
  cmd->add_option("--set", opts.overrides, "override a config key (key=value, repeatable)");
  cmd->add_option("--threads", opts.threads, "worker threads (env BOOT3D_THREADS as fallback)");
  cmd->add_option("--seed", opts.seed, "override the config seed");
}

PipelineConfig resolve_config(const CommonOpts& opts) {
  PipelineConfig config;
  if (!opts.config_path.empty()) config = load_pipeline_config(opts.config_path);
  for (const std::string& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw_error(ErrorCode::invalid_config, "--set expects key=value, got '" + kv + "'");
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opts.seed >= 0) config.seed = static_cast<uint64_t>(opts.seed);
  if (opts.threads > 0) {
    config.threads = opts.threads;
  } else if (const char* env = std::getenv("BOOT3D_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) config.threads = n;
  }
  config.validate();
  return config;
}

// Manifest rows stay sorted and timestamp-free for byte reproducibility.
class Manifest {
 public:
  Manifest(const fs::path& dir, const PipelineConfig& config) : dir_(dir) {
    fs::create_directories(dir);
    rows_["config_hash"] = config.hash();
    rows_["seed"] = std::to_string(config.seed);
  }
  void note(const std::string& key, const std::string& value) { rows_[key] = value; }
  void note_file(const std::string& name) { files_.push_back(name); }
  void write() {
    std::ofstream out(dir_ / "manifest.csv");
    out << "key,value\n";
    for (const auto& [k, v] : rows_) out << k << ',' << v << '\n';
    std::sort(files_.begin(), files_.end());
    for (const std::string& f : files_) out << "file," << f << '\n';
  }

 private:
  fs::path dir_;
  std::map<std::string, std::string> rows_;
  std::vector<std::string> files_;
};

class RunLog {
 public:
  explicit RunLog(const fs::path& dir) : out_(dir / "run.log"), start_(clock_::now()) {}
  void line(const std::string& msg) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        clock_::now() - start_)
                        .count();
    out_ << "[" << ms << " ms] " << msg << "\n";
    out_.flush();
  }

 private:
  using clock_ = std::chrono::steady_clock;
  std::ofstream out_;
  clock_::time_point start_;
};

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::unique_ptr<Reconstructor> make_reconstructor(const std::string& spec,
                                                  const PipelineConfig& config) {
  if (spec == "oracle")
    return std::make_unique<OracleReconstructor>(Vec3i::Constant(config.oracle_grid_n),
                                                 config.volume_bounds(),
                                                 config.oracle_supersampling);
  if (spec.rfind("toy:", 0) == 0)
    return std::make_unique<ToyRegressor>(read_toy(spec.substr(4)));
  throw_error(ErrorCode::invalid_config,
              "--recon must be 'oracle' or 'toy:<model.toy>', got '" + spec + "'");
}

void write_nme_report(const fs::path& dir, const std::string& stem, const NmeReport& report,
                      Manifest& manifest) {
  write_report_rows_csv((dir / (stem + "_rows.csv")).string(), report);
  write_report_aggregate_csv((dir / (stem + "_aggregate.csv")).string(), report);
  write_report_bucket_svg((dir / (stem + "_buckets.svg")).string(), report);
  write_report_curve_svg((dir / (stem + "_curve.svg")).string(), report);
  for (const char* suffix : {"_rows.csv", "_aggregate.csv", "_buckets.svg", "_curve.svg"})
    manifest.note_file(stem + suffix);
}

void write_epoch_log_csv(const fs::path& path, const std::vector<EpochLog>& log,
                         const std::vector<double>* val_loss = nullptr) {
  std::ofstream out(path);
  out << "epoch,lr,train_loss" << (val_loss ? ",val_loss" : "") << "\n";
  for (size_t i = 0; i < log.size(); ++i) {
    out << log[i].epoch << ',' << fmt_num(log[i].learning_rate) << ','
        << fmt_num(log[i].train_loss);
    if (val_loss) out << ',' << fmt_num((*val_loss)[i]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

int cmd_extract_mesh(const std::string& grid_path, double iso, const std::string& out_path) {
  const VoxelGrid grid = read_vxg(grid_path);
  const TriangleMesh mesh = marching_cubes(grid, iso);
  save_mesh(out_path, mesh);
  std::cout << "wrote " << out_path << " (" << mesh.vertices.size() << " vertices, "
            << mesh.triangles.size() << " triangles)\n";
  return 0;
}

int cmd_estimate_pose(const std::string& mesh_path, const std::string& out_path) {
  const TriangleMesh mesh = load_mesh(mesh_path);
  const FaceFrame frame = estimate_face_frame(mesh);
  std::ofstream out(out_path);
  if (!out) throw_error(ErrorCode::io_failure, "cannot open for write: " + out_path);
  out << "cx,cy,cz,lx,ly,lz,vx,vy,vz,gx,gy,gz\n";
  out << face_frame_csv_row(frame) << "\n";
  std::cout << "wrote " << out_path << (frame.eigen_tie ? " (eigenvalue tie flagged)" : "")
            << "\n";
  return 0;
}

int cmd_render_sweep(const CommonOpts& common, const std::string& mesh_path,
                     const std::string& image_path, const std::vector<double>& yaw_set,
                     bool write_depth, const std::string& out_dir) {
  const PipelineConfig config = resolve_config(common);
  const TriangleMesh mesh = load_mesh(mesh_path);
  const Image source = read_ppm(image_path);
  const Camera cam = config.camera();

  const FaceFrame frame = estimate_face_frame(mesh);
  const std::optional<std::vector<double>> yaws =
      yaw_set.empty() ? std::nullopt : std::make_optional(yaw_set);
  const ViewSchedule schedule = build_schedule(frame, config.increment_deg,
                                               config.pitch_limit_deg,
                                               config.gaze_limit_deg, yaws);

  Manifest manifest(out_dir, config);
  RunLog log(out_dir);
  log.line("rendering " + std::to_string(schedule.entries.size()) + " views");
  const std::vector<RenderedView> views =
      render_sweep(mesh, frame, source, schedule, cam, config.threads);

  write_schedule_csv((fs::path(out_dir) / "schedule.csv").string(), schedule);
  manifest.note_file("schedule.csv");
  for (size_t i = 0; i < views.size(); ++i) {
    char name[80];
    std::snprintf(name, sizeof(name), "view_%03zu_y%+g_p%+g.ppm", i, views[i].yaw_deg,
                  views[i].pitch_deg);
    write_ppm((fs::path(out_dir) / name).string(), views[i].image);
    manifest.note_file(name);
    if (write_depth) {
      std::snprintf(name, sizeof(name), "depth_%03zu_y%+g_p%+g.vxg", i, views[i].yaw_deg,
                    views[i].pitch_deg);
      write_vxg_raw((fs::path(out_dir) / name).string(),
                    Vec3i(cam.image_width, cam.image_height, 1), Vec3::Zero(),
                    Vec3::Ones(), normalized_depth(views[i], cam));
      manifest.note_file(name);
    }
  }
  manifest.note("views", std::to_string(views.size()));
  manifest.write();
  log.line("done");
  std::cout << "wrote " << views.size() << " views to " << out_dir << "\n";
  return 0;
}

int cmd_gen_pairs(const CommonOpts& common, const std::string& recon_spec,
                  const std::string& images_dir, const std::string& out_dir) {
  const PipelineConfig config = resolve_config(common);
  std::unique_ptr<Reconstructor> recon = make_reconstructor(recon_spec, config);

  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(images_dir)) {
    if (entry.path().extension() == ".ppm") stems.push_back(entry.path().stem().string());
  }
  std::sort(stems.begin(), stems.end());
  if (stems.empty())
    throw_error(ErrorCode::invalid_input, "no .ppm images in " + images_dir);

  std::vector<Image> images;
  for (const std::string& stem : stems) {
    Image img = read_ppm((fs::path(images_dir) / (stem + ".ppm")).string());
    img.id = stem;
    // The oracle needs the true mesh behind each source image.
    const fs::path mesh_path = fs::path(images_dir) / (stem + ".obj");
    if (fs::exists(mesh_path)) recon->observe_ground_truth(stem, load_mesh(mesh_path.string()));
    images.push_back(std::move(img));
  }

  Manifest manifest(out_dir, config);
  RunLog log(out_dir);
  log.line("generating pairs from " + std::to_string(images.size()) + " images");
  PairGenLog gen_log;
  const std::vector<TrainingPair> pairs =
      generate_pairs(*recon, images, config.bootstrap(), config.camera(), &gen_log,
                     config.threads);
  write_pair_dataset(out_dir, pairs);
  for (const std::string& skip : gen_log.skipped) log.line("skipped " + skip);
  manifest.note("pairs", std::to_string(pairs.size()));
  manifest.note("skipped", std::to_string(gen_log.skipped.size()));
  manifest.note_file("manifest.csv");
  manifest.write();
  log.line("done");
  std::cout << "wrote " << pairs.size() << " pairs to " << out_dir << "\n";
  return 0;
}

int cmd_evaluate(const CommonOpts& common, const std::string& pred_dir,
                 const std::string& gt_dir, bool icp, bool proxy_d,
                 const std::string& out_dir) {
  const PipelineConfig config = resolve_config(common);

  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(pred_dir)) {
    if (entry.path().extension() == ".obj") stems.push_back(entry.path().stem().string());
  }
  std::sort(stems.begin(), stems.end());
  if (stems.empty()) throw_error(ErrorCode::invalid_input, "no .obj meshes in " + pred_dir);

  // Optional pose table: id,yaw_deg,pitch_deg. Missing ids fall back to the
  // gt frame's yaw against the camera axis.
  std::map<std::string, std::pair<double, double>> poses;
  const fs::path pose_path = fs::path(pred_dir) / "poses.csv";
  if (fs::exists(pose_path)) {
    std::ifstream in(pose_path);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      std::string id, yaw, pitch;
      if (std::getline(ss, id, ',') && std::getline(ss, yaw, ',') && std::getline(ss, pitch))
        poses[id] = {std::stod(yaw), std::stod(pitch)};
    }
  }

  std::vector<EvalPair> pairs;
  for (const std::string& stem : stems) {
    const fs::path gt_path = fs::path(gt_dir) / (stem + ".obj");
    if (!fs::exists(gt_path))
      throw_error(ErrorCode::invalid_input, "missing ground truth for " + stem);
    EvalPair pair;
    pair.pred = load_mesh((fs::path(pred_dir) / (stem + ".obj")).string());
    pair.gt = load_mesh(gt_path.string());
    pair.id = stem;
    if (auto it = poses.find(stem); it != poses.end()) {
      pair.yaw_deg = it->second.first;
      pair.pitch_deg = it->second.second;
    } else {
      const FaceFrame frame = estimate_face_frame(pair.gt);
      pair.yaw_deg = rad_to_deg(std::atan2(frame.gaze[0], frame.gaze[2]));
      pair.pitch_deg = rad_to_deg(std::asin(std::clamp(-frame.gaze[1], -1.0, 1.0)));
    }
    pairs.push_back(std::move(pair));
  }

  Manifest manifest(out_dir, config);
  RunLog log(out_dir);
  log.line("evaluating " + std::to_string(pairs.size()) + " pairs");
  const NmeReport report = evaluate_pairs(pairs, icp, proxy_d ? DMode::proxy : DMode::landmark,
                                          config.threads);
  write_nme_report(out_dir, "report", report, manifest);
  manifest.note("pairs", std::to_string(pairs.size()));
  manifest.note("icp", icp ? "1" : "0");
  manifest.note("mean_nme", fmt_num(report.mean));
  manifest.write();
  log.line("done");
  std::cout << "mean NME " << report.mean << " over " << report.valid_count()
            << " pairs -> " << out_dir << "\n";
  return 0;
}

int cmd_self_recon(const CommonOpts& common, const std::string& recon_spec,
                   const std::string& out_dir) {
  const PipelineConfig config = resolve_config(common);
  std::unique_ptr<Reconstructor> recon = make_reconstructor(recon_spec, config);
  const std::vector<FaceSample> faces = make_face_bank(2000, config.eval_faces);

  Manifest manifest(out_dir, config);
  RunLog log(out_dir);
  log.line("self-reconstruction over " + std::to_string(faces.size()) + " faces");
  PairGenLog gen_log;
  const NmeReport report = run_self_reconstruction(config, *recon, faces, &gen_log);
  for (const std::string& skip : gen_log.skipped) log.line("skipped " + skip);
  write_nme_report(out_dir, "self_recon", report, manifest);
  manifest.note("recon", recon_spec);
  manifest.note("mean_nme", fmt_num(report.mean));
  manifest.write();
  log.line("done");
  std::cout << "self-reconstruction mean NME " << report.mean << " -> " << out_dir << "\n";
  return 0;
}

int cmd_bootstrap_run(const CommonOpts& common, const std::string& out_dir) {
  const PipelineConfig config = resolve_config(common);
  Manifest manifest(out_dir, config);
  RunLog log(out_dir);

  log.line("building benchmark faces and datasets");
  const Benchmark bench = build_benchmark(config);

  log.line("base training (" + std::to_string(bench.base_dataset.size()) + " samples, " +
           std::to_string(config.base_epochs) + " epochs)");
  ToyRegressor model = make_toy_model(config);
  const std::vector<EpochLog> base_log = train_base_model(model, bench, config.seed);
  write_epoch_log_csv(fs::path(out_dir) / "base_train_log.csv", base_log);
  manifest.note_file("base_train_log.csv");
  write_toy((fs::path(out_dir) / "pre.toy").string(), model);
  manifest.note_file("pre.toy");

  log.line("pre-bootstrap evaluation");
  const NmeReport pre = evaluate_model(model, bench.eval_set, config.iso, config.threads);
  write_nme_report(out_dir, "pre_eval", pre, manifest);

  log.line("bootstrap pair generation + fine-tuning");
  PairGenLog gen_log;
  VariantResult variant =
      run_bootstrap_variant(bench, model, config.yaw_set, config.seed, true, &gen_log);
  for (const std::string& skip : gen_log.skipped) log.line("skipped " + skip);

  write_pair_dataset((fs::path(out_dir) / "pairs").string(), variant.pairs);
  manifest.note_file("pairs/manifest.csv");
  write_epoch_log_csv(fs::path(out_dir) / "finetune_log.csv", variant.tune.log,
                      &variant.tune.val_loss);
  manifest.note_file("finetune_log.csv");

  ToyRegressor post = model;
  if (variant.tune.best_epoch >= 0)
    post.restore_parameters(variant.tune.snapshots[variant.tune.best_epoch]);
  write_toy((fs::path(out_dir) / "post_best.toy").string(), post);
  manifest.note_file("post_best.toy");
  if (static_cast<int>(variant.tune.snapshots.size()) >= 10) {
    ToyRegressor epoch10 = model;
    epoch10.restore_parameters(variant.tune.snapshots[9]);
    write_toy((fs::path(out_dir) / "post_epoch10.toy").string(), epoch10);
    manifest.note_file("post_epoch10.toy");
  }

  log.line("post-bootstrap evaluation");
  const NmeReport& post_eval = variant.post_eval;
  write_nme_report(out_dir, "post_eval", post_eval, manifest);
  write_report_bucket_svg_compare((fs::path(out_dir) / "compare_buckets.svg").string(), pre,
                                  post_eval, "before bootstrap", "after bootstrap");
  manifest.note_file("compare_buckets.svg");

  const auto pre_buckets = abs_yaw_bucket_means(pre);
  const auto post_buckets = abs_yaw_bucket_means(post_eval);
  {
    std::ofstream summary(fs::path(out_dir) / "summary.csv");
    summary << "metric,before,after\n";
    summary << "mean_nme," << fmt_num(pre.mean) << ',' << fmt_num(post_eval.mean) << '\n';
    const char* names[3] = {"bucket_0_20", "bucket_20_40", "bucket_40_60"};
    for (int b = 0; b < 3; ++b)
      summary << names[b] << ',' << fmt_num(pre_buckets[b]) << ',' << fmt_num(post_buckets[b])
              << '\n';
    summary << "pairs," << variant.pair_count << ",\n";
    summary << "best_epoch," << variant.tune.best_epoch << ",\n";
  }
  manifest.note_file("summary.csv");
  manifest.note("pairs", std::to_string(variant.pair_count));
  manifest.note("pre_mean_nme", fmt_num(pre.mean));
  manifest.note("post_mean_nme", fmt_num(post_eval.mean));
  manifest.write();
  log.line("done");

  std::cout << "bootstrap-run: mean NME " << pre.mean << " -> " << post_eval.mean
            << "; 40-60deg bucket " << pre_buckets[2] << " -> " << post_buckets[2] << " -> "
            << out_dir << "\n";
  return 0;
}

int cmd_make_demo(const std::string& out_dir) {
  fs::create_directories(out_dir);

  Aabb unit;
  unit.min = Vec3::Zero();
  unit.max = Vec3::Ones();
  const VoxelGrid sphere =
      make_sphere_occupancy_grid(64, Vec3::Constant(0.5), 0.3, unit);
  write_vxg((fs::path(out_dir) / "sphere_64.vxg").string(), sphere);

  PipelineConfig config;
  const FaceSample face = make_face_bank(7, 1).front();
  save_mesh((fs::path(out_dir) / "demo_face.obj").string(), face.mesh);
  const RenderedSample frontal = render_face_view(face, 0.0, 0.0, config.camera());
  write_ppm((fs::path(out_dir) / "demo_face.ppm").string(), frontal.image);

  // Small, fast demo configuration.
  config.train_faces = 12;
  config.bootstrap_faces = 8;
  config.eval_faces = 8;
  config.base_epochs = 20;
  write_pipeline_config((fs::path(out_dir) / "demo.cfg").string(), config);

  std::cout << "wrote sphere_64.vxg, demo_face.obj/.lmk/.ppm, demo.cfg to " << out_dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-supervised bootstrap pipeline for single-image 3D face reconstruction"};
  app.require_subcommand(1);

  CommonOpts common;

  // extract-mesh
  auto* extract = app.add_subcommand("extract-mesh", "marching cubes on a VXG1 grid");
  std::string grid_path, out_path = "mesh.obj";
  double iso = 0.5;
  extract->add_option("grid", grid_path, "input .vxg grid")->required();
  extract->add_option("--iso", iso, "iso level (default 0.5)");
  extract->add_option("-o,--output", out_path, "output OBJ path")->required();

  // estimate-pose
  auto* pose = app.add_subcommand("estimate-pose", "face frame from a mesh");
  std::string pose_mesh, pose_out = "frame.csv";
  pose->add_option("mesh", pose_mesh, "input .obj mesh")->required();
  pose->add_option("-o,--output", pose_out, "output CSV path")->required();

  // render-sweep
  auto* sweep = app.add_subcommand("render-sweep", "render the constrained view sweep");
  std::string sweep_mesh, sweep_image, sweep_out;
  std::vector<double> sweep_yaws;
  bool sweep_depth = false;
  sweep->add_option("mesh", sweep_mesh, "input .obj mesh")->required();
  sweep->add_option("image", sweep_image, "source .ppm image")->required();
  sweep->add_option("--yaw-set", sweep_yaws, "explicit yaw angles (degrees)");
  sweep->add_flag("--depth", sweep_depth, "also write normalized depth VXG1 buffers");
  sweep->add_option("-o,--output", sweep_out, "output directory")->required();
  add_common(sweep, common);

  // gen-pairs
  auto* gen = app.add_subcommand("gen-pairs", "synthesize bootstrap training pairs");
  std::string gen_recon, gen_images, gen_out;
  gen->add_option("--recon", gen_recon, "oracle | toy:<model.toy>")->required();
  gen->add_option("--images", gen_images, "directory of source .ppm images")->required();
  gen->add_option("-o,--output", gen_out, "output pair-dataset directory")->required();
  add_common(gen, common);

  // bootstrap-run
  auto* run = app.add_subcommand("bootstrap-run",
                                 "full pipeline: bias-train, bootstrap, fine-tune, evaluate");
  std::string run_out;
  run->add_option("-o,--output", run_out, "output directory")->required();
  add_common(run, common);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "ICP-aligned NME reports for mesh pairs");
  std::string eval_pred, eval_gt, eval_out;
  bool eval_icp = false, eval_proxy = false;
  eval->add_option("--pred", eval_pred, "directory of predicted .obj meshes")->required();
  eval->add_option("--gt", eval_gt, "directory of ground-truth .obj meshes")->required();
  eval->add_flag("--icp", eval_icp, "align each prediction with ICP first");
  eval->add_flag("--proxy-d", eval_proxy, "use the 0.4 x lateral-extent normalizer");
  eval->add_option("-o,--output", eval_out, "output report directory")->required();
  add_common(eval, common);

  // self-recon
  auto* self = app.add_subcommand("self-recon", "self-reconstruction robustness experiment");
  std::string self_recon_spec, self_out;
  self->add_option("--recon", self_recon_spec, "oracle | toy:<model.toy>")->required();
  self->add_option("-o,--output", self_out, "output report directory")->required();
  add_common(self, common);

  // make-demo
  auto* demo = app.add_subcommand("make-demo", "write demo grid, face, image and config");
  std::string demo_out;
  demo->add_option("-o,--output", demo_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) return cmd_extract_mesh(grid_path, iso, out_path);
    if (pose->parsed()) return cmd_estimate_pose(pose_mesh, pose_out);
    if (sweep->parsed())
      return cmd_render_sweep(common, sweep_mesh, sweep_image, sweep_yaws, sweep_depth,
                              sweep_out);
    if (gen->parsed()) return cmd_gen_pairs(common, gen_recon, gen_images, gen_out);
    if (run->parsed()) return cmd_bootstrap_run(common, run_out);
    if (eval->parsed())
      return cmd_evaluate(common, eval_pred, eval_gt, eval_icp, eval_proxy, eval_out);
    if (self->parsed()) return cmd_self_recon(common, self_recon_spec, self_out);
    if (demo->parsed()) return cmd_make_demo(demo_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.code_name() << ": " << e.what() << std::endl;
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << std::endl;
    return 3;
  }
  return 0;
}
