#include "boot3d/toy_regressor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "boot3d/error.hpp"

namespace boot3d {

double LrSchedule::at_epoch(int epoch) const {
  if (decay_period_epochs <= 0) return initial;
  return initial * std::pow(decay_factor, epoch / decay_period_epochs);
}

ToyRegressor::ToyRegressor(int input_w, int input_h, const Vec3i& grid_dims,
                           const Aabb& grid_bounds)
    : in_w_(input_w), in_h_(input_h), dims_(grid_dims), bounds_(grid_bounds) {
  if (in_w_ <= 0 || in_h_ <= 0)
    throw_error(ErrorCode::invalid_input, "ToyRegressor: bad input size");
  if ((dims_.array() <= 0).any())
    throw_error(ErrorCode::invalid_input, "ToyRegressor: bad grid dims");
  if (grid_bounds.empty() || (grid_bounds.extent().array() <= 0.0).any())
    throw_error(ErrorCode::invalid_input, "ToyRegressor: bad grid bounds");
  const Eigen::Index cells = static_cast<Eigen::Index>(dims_[0]) * dims_[1] * dims_[2];
  weights_ = Eigen::MatrixXd::Zero(cells, static_cast<Eigen::Index>(in_w_) * in_h_ + 1);
}

Eigen::VectorXd ToyRegressor::featurize(const Image& image) const {
  if (image.empty()) throw_error(ErrorCode::invalid_input, "ToyRegressor: empty image");
  const std::vector<float> gray = image.to_grayscale_resized(in_w_, in_h_);
  Eigen::VectorXd x(weights_.cols());
  for (size_t i = 0; i < gray.size(); ++i) x[static_cast<Eigen::Index>(i)] = gray[i];
  x[x.size() - 1] = 1.0;  // bias
  return x;
}

VoxelGrid ToyRegressor::reconstruct(const Image& image) const {
  const Eigen::VectorXd logits = weights_ * featurize(image);
  std::vector<float> values(static_cast<size_t>(logits.size()));
  for (Eigen::Index i = 0; i < logits.size(); ++i)
    values[static_cast<size_t>(i)] = static_cast<float>(1.0 / (1.0 + std::exp(-logits[i])));
  const Vec3 spacing =
      (bounds_.extent().array() / dims_.cast<double>().array()).matrix();
  return VoxelGrid(dims_, bounds_.min, spacing, std::move(values));
}

namespace {

double bce_and_gradient(const Eigen::VectorXd& logits, const std::vector<float>& target,
                        Eigen::VectorXd* grad) {
  // Numerically stable mean BCE on logits: max(z,0) - z*y + log(1 + e^-|z|).
  double loss = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    const double z = logits[i];
    const double y = target[static_cast<size_t>(i)];
    loss += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
    if (grad) (*grad)[i] = 1.0 / (1.0 + std::exp(-z)) - y;
  }
  return loss / static_cast<double>(logits.size());
}

}  // namespace

double ToyRegressor::batch_loss(const std::vector<const TrainingSample*>& batch) const {
  if (batch.empty()) throw_error(ErrorCode::invalid_input, "batch_loss: empty batch");
  double loss = 0.0;
  for (const TrainingSample* sample : batch) {
    if (static_cast<Eigen::Index>(sample->target.cell_count()) != weights_.rows())
      throw_error(ErrorCode::invalid_input, "batch_loss: target grid dims mismatch");
    const Eigen::VectorXd logits = weights_ * featurize(sample->image);
    loss += bce_and_gradient(logits, sample->target.values(), nullptr);
  }
  return loss / static_cast<double>(batch.size());
}

double ToyRegressor::fit_step(const std::vector<const TrainingSample*>& batch,
                              double learning_rate) {
  if (batch.empty()) throw_error(ErrorCode::invalid_input, "fit_step: empty batch");
  Eigen::MatrixXd grad_w = Eigen::MatrixXd::Zero(weights_.rows(), weights_.cols());
  Eigen::VectorXd grad_z(weights_.rows());
  double loss = 0.0;
  for (const TrainingSample* sample : batch) {
    if (static_cast<Eigen::Index>(sample->target.cell_count()) != weights_.rows())
      throw_error(ErrorCode::invalid_input, "fit_step: target grid dims mismatch");
    const Eigen::VectorXd x = featurize(sample->image);
    const Eigen::VectorXd logits = weights_ * x;
    loss += bce_and_gradient(logits, sample->target.values(), &grad_z);
    grad_w.noalias() += grad_z * x.transpose();
  }
  const double scale = learning_rate / static_cast<double>(batch.size());
  if (scale != 0.0) weights_.noalias() -= scale * grad_w;
  return loss / static_cast<double>(batch.size());
}

std::vector<double> ToyRegressor::snapshot_parameters() const {
  return {weights_.data(), weights_.data() + weights_.size()};
}

void ToyRegressor::restore_parameters(const std::vector<double>& params) {
  if (static_cast<Eigen::Index>(params.size()) != weights_.size())
    throw_error(ErrorCode::invalid_input, "restore_parameters: size mismatch");
  std::copy(params.begin(), params.end(), weights_.data());
}

std::vector<EpochLog> toy_fit(ToyRegressor& model, const std::vector<TrainingSample>& dataset,
                              int epochs, int batch_size, const LrSchedule& schedule,
                              uint64_t seed) {
  if (dataset.empty()) throw_error(ErrorCode::invalid_input, "toy_fit: empty dataset");
  if (batch_size <= 0) throw_error(ErrorCode::invalid_input, "toy_fit: bad batch size");
  for (const TrainingSample& s : dataset) {
    if (s.target.dims() != model.grid_dims())
      throw_error(ErrorCode::invalid_input, "toy_fit: target grid dims mismatch");
  }

  std::mt19937_64 rng(seed);
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<EpochLog> log;
  log.reserve(static_cast<size_t>(epochs));
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double lr = schedule.at_epoch(epoch);
    double epoch_loss = 0.0;
    size_t batches = 0;
    for (size_t start = 0; start < order.size(); start += batch_size) {
      std::vector<const TrainingSample*> batch;
      const size_t stop = std::min(order.size(), start + batch_size);
      batch.reserve(stop - start);
      for (size_t i = start; i < stop; ++i) batch.push_back(&dataset[order[i]]);
      epoch_loss += model.fit_step(batch, lr);
      ++batches;
    }
    log.push_back({epoch, lr, epoch_loss / static_cast<double>(batches)});
  }
  return log;
}

namespace {

constexpr char kToyMagic[16] = {'T', 'O', 'Y', '1', 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};

template <class T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  in.read(buf, sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_toy(const std::string& path, const ToyRegressor& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorCode::io_failure, "cannot open for write: " + path);
  out.write(kToyMagic, sizeof(kToyMagic));
  put<uint32_t>(out, static_cast<uint32_t>(model.input_width()));
  put<uint32_t>(out, static_cast<uint32_t>(model.input_height()));
  for (int k = 0; k < 3; ++k) put<uint32_t>(out, static_cast<uint32_t>(model.grid_dims()[k]));
  const Aabb bounds = model.grid_bounds();
  for (int k = 0; k < 3; ++k) put<double>(out, bounds.min[k]);
  for (int k = 0; k < 3; ++k) put<double>(out, bounds.max[k]);
  for (double v : model.snapshot_parameters()) put<double>(out, v);
  if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
}

ToyRegressor read_toy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::io_failure, "cannot open: " + path);
  char magic[16];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kToyMagic, 4) != 0)
    throw_error(ErrorCode::io_failure, "not a TOY1 file: " + path);
  const int in_w = static_cast<int>(get<uint32_t>(in));
  const int in_h = static_cast<int>(get<uint32_t>(in));
  Vec3i dims;
  for (int k = 0; k < 3; ++k) dims[k] = static_cast<int>(get<uint32_t>(in));
  Aabb bounds;
  for (int k = 0; k < 3; ++k) bounds.min[k] = get<double>(in);
  for (int k = 0; k < 3; ++k) bounds.max[k] = get<double>(in);
  if (!in) throw_error(ErrorCode::io_failure, "corrupt TOY1 header: " + path);
  ToyRegressor model(in_w, in_h, dims, bounds);
  std::vector<double> params(model.parameter_count());
  for (double& v : params) v = get<double>(in);
  if (!in) throw_error(ErrorCode::io_failure, "truncated TOY1 payload: " + path);
  model.restore_parameters(params);
  return model;
}

}  // namespace boot3d
