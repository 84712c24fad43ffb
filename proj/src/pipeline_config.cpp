#include "boot3d/pipeline_config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "boot3d/error.hpp"

namespace boot3d {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string join_list(const std::vector<double>& values) {
  std::string out;
  char buf[32];
  for (double v : values) {
    if (!out.empty()) out += ',';
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
  }
  return out;
}

std::vector<double> parse_list(const std::string& value) {
  std::vector<double> out;
  std::istringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw_error(ErrorCode::invalid_config, "expected boolean, got '" + value + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

}  // namespace

Camera PipelineConfig::camera() const {
  Camera cam;
  cam.center_x = camera_center_x;
  cam.center_y = camera_center_y;
  cam.half_w = camera_half_w;
  cam.half_h = camera_half_h;
  cam.image_width = image_width;
  cam.image_height = image_height;
  cam.near = camera_near;
  cam.far = camera_far;
  return cam;
}

Aabb PipelineConfig::volume_bounds() const {
  Aabb box;
  box.min = Vec3::Constant(volume_min);
  box.max = Vec3::Constant(volume_max);
  return box;
}

BootstrapConfig PipelineConfig::bootstrap() const {
  BootstrapConfig cfg;
  cfg.yaw_set = yaw_set;
  cfg.pitch_limit_deg = pitch_limit_deg;
  cfg.increment_deg = increment_deg;
  cfg.gaze_limit_deg = gaze_limit_deg;
  cfg.split_ratio = split_ratio;
  cfg.epochs = epochs;
  cfg.batch_size = batch_size;
  cfg.lr.initial = lr_initial;
  cfg.lr.decay_factor = lr_decay_factor;
  cfg.lr.decay_period_epochs = lr_decay_period;
  cfg.seed = seed;
  cfg.include_frontal_seed_pairs = include_frontal_seed_pairs;
  return cfg;
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  try {
    if (key == "config_version") config_version = std::stoi(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "threads") threads = std::stoi(value);
    else if (key == "image_width") image_width = std::stoi(value);
    else if (key == "image_height") image_height = std::stoi(value);
    else if (key == "camera_center_x") camera_center_x = std::stod(value);
    else if (key == "camera_center_y") camera_center_y = std::stod(value);
    else if (key == "camera_half_w") camera_half_w = std::stod(value);
    else if (key == "camera_half_h") camera_half_h = std::stod(value);
    else if (key == "camera_near") camera_near = std::stod(value);
    else if (key == "camera_far") camera_far = std::stod(value);
    else if (key == "volume_min") volume_min = std::stod(value);
    else if (key == "volume_max") volume_max = std::stod(value);
    else if (key == "oracle_grid_n") oracle_grid_n = std::stoi(value);
    else if (key == "oracle_supersampling") oracle_supersampling = std::stoi(value);
    else if (key == "iso") iso = std::stod(value);
    else if (key == "toy_input_w") toy_input_w = std::stoi(value);
    else if (key == "toy_input_h") toy_input_h = std::stoi(value);
    else if (key == "toy_grid_n") toy_grid_n = std::stoi(value);
    else if (key == "increment_deg") increment_deg = std::stod(value);
    else if (key == "pitch_limit_deg") pitch_limit_deg = std::stod(value);
    else if (key == "gaze_limit_deg") gaze_limit_deg = std::stod(value);
    else if (key == "yaw_set") yaw_set = parse_list(value);
    else if (key == "split_ratio") split_ratio = std::stod(value);
    else if (key == "epochs") epochs = std::stoi(value);
    else if (key == "batch_size") batch_size = std::stoi(value);
    else if (key == "lr_initial") lr_initial = std::stod(value);
    else if (key == "lr_decay_factor") lr_decay_factor = std::stod(value);
    else if (key == "lr_decay_period") lr_decay_period = std::stoi(value);
    else if (key == "include_frontal_seed_pairs") include_frontal_seed_pairs = parse_bool(value);
    else if (key == "train_faces") train_faces = std::stoi(value);
    else if (key == "bootstrap_faces") bootstrap_faces = std::stoi(value);
    else if (key == "eval_faces") eval_faces = std::stoi(value);
    else if (key == "base_epochs") base_epochs = std::stoi(value);
    else if (key == "base_lr_initial") base_lr_initial = std::stod(value);
    else if (key == "base_yaws") base_yaws = parse_list(value);
    else if (key == "eval_yaws") eval_yaws = parse_list(value);
    else throw_error(ErrorCode::invalid_config, "unknown config key: " + key);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw_error(ErrorCode::invalid_config, "bad value for " + key + ": '" + value + "'");
  }
}

void PipelineConfig::validate() const {
  if (config_version != 1)
    throw_error(ErrorCode::invalid_config, "unsupported config_version");
  if (image_width <= 0 || image_height <= 0 || threads < 1)
    throw_error(ErrorCode::invalid_config, "bad image size or thread count");
  if (!(camera_half_w > 0.0 && camera_half_h > 0.0 && camera_near < camera_far))
    throw_error(ErrorCode::invalid_config, "bad camera geometry");
  if (!(volume_min < volume_max))
    throw_error(ErrorCode::invalid_config, "volume_min must be < volume_max");
  if (oracle_grid_n < 2 || toy_grid_n < 2 || oracle_supersampling < 1)
    throw_error(ErrorCode::invalid_config, "bad grid resolution");
  if (toy_input_w <= 0 || toy_input_h <= 0)
    throw_error(ErrorCode::invalid_config, "bad toy input size");
  if (train_faces < 1 || bootstrap_faces < 1 || eval_faces < 1 || base_epochs < 0)
    throw_error(ErrorCode::invalid_config, "bad benchmark sizes");
  bootstrap().validate();
}

std::string PipelineConfig::canonical() const {
  // Sorted key = value list; `threads` deliberately excluded so execution
  // parallelism never changes manifests.
  std::map<std::string, std::string> kv = {
      {"config_version", fmt(config_version)},
      {"seed", fmt(seed)},
      {"image_width", fmt(image_width)},
      {"image_height", fmt(image_height)},
      {"camera_center_x", fmt(camera_center_x)},
      {"camera_center_y", fmt(camera_center_y)},
      {"camera_half_w", fmt(camera_half_w)},
      {"camera_half_h", fmt(camera_half_h)},
      {"camera_near", fmt(camera_near)},
      {"camera_far", fmt(camera_far)},
      {"volume_min", fmt(volume_min)},
      {"volume_max", fmt(volume_max)},
      {"oracle_grid_n", fmt(oracle_grid_n)},
      {"oracle_supersampling", fmt(oracle_supersampling)},
      {"iso", fmt(iso)},
      {"toy_input_w", fmt(toy_input_w)},
      {"toy_input_h", fmt(toy_input_h)},
      {"toy_grid_n", fmt(toy_grid_n)},
      {"increment_deg", fmt(increment_deg)},
      {"pitch_limit_deg", fmt(pitch_limit_deg)},
      {"gaze_limit_deg", fmt(gaze_limit_deg)},
      {"yaw_set", join_list(yaw_set)},
      {"split_ratio", fmt(split_ratio)},
      {"epochs", fmt(epochs)},
      {"batch_size", fmt(batch_size)},
      {"lr_initial", fmt(lr_initial)},
      {"lr_decay_factor", fmt(lr_decay_factor)},
      {"lr_decay_period", fmt(lr_decay_period)},
      {"include_frontal_seed_pairs", fmt(include_frontal_seed_pairs)},
      {"train_faces", fmt(train_faces)},
      {"bootstrap_faces", fmt(bootstrap_faces)},
      {"eval_faces", fmt(eval_faces)},
      {"base_epochs", fmt(base_epochs)},
      {"base_lr_initial", fmt(base_lr_initial)},
      {"base_yaws", join_list(base_yaws)},
      {"eval_yaws", join_list(eval_yaws)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string PipelineConfig::hash() const {
  const std::string text = canonical();
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::io_failure, "cannot open config: " + path);
  PipelineConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw_error(ErrorCode::invalid_config,
                  path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  config.validate();
  return config;
}

void write_pipeline_config(const std::string& path, const PipelineConfig& config) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::io_failure, "cannot open for write: " + path);
  out << config.canonical();
  out << "threads = " << config.threads << "\n";
  if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
}

}  // namespace boot3d
