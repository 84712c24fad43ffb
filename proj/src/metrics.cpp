#include "boot3d/metrics.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "boot3d/error.hpp"
#include "boot3d/face_frame.hpp"
#include "boot3d/parallel.hpp"

namespace boot3d {

double interocular_distance(const TriangleMesh& mesh, bool allow_proxy, bool* used_proxy) {
  if (used_proxy) *used_proxy = false;
  if (mesh.has_landmark("eye_outer_left") && mesh.has_landmark("eye_outer_right"))
    return (mesh.landmark("eye_outer_right") - mesh.landmark("eye_outer_left")).norm();
  if (!allow_proxy)
    throw_error(ErrorCode::missing_landmark,
                "interocular_distance: eye_outer_left/right landmarks missing");
  const FaceFrame frame = estimate_face_frame(mesh);
  double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
  for (const Vec3& v : mesh.vertices) {
    const double s = v.dot(frame.lateral);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (used_proxy) *used_proxy = true;
  return 0.4 * (hi - lo);
}

double nme(const TriangleMesh& pred, const BvhIndex& gt_index, double d) {
  if (!(d > 0.0)) throw_error(ErrorCode::invalid_input, "nme: d must be > 0");
  if (pred.vertices.empty()) throw_error(ErrorCode::invalid_input, "nme: empty prediction");
  double sum = 0.0;
  for (const Vec3& v : pred.vertices) sum += gt_index.closest_point(v).distance;
  return sum / (static_cast<double>(pred.vertices.size()) * d);
}

double nme(const TriangleMesh& pred, const TriangleMesh& gt, double d) {
  return nme(pred, BvhIndex(gt), d);
}

namespace {

// Best proper rotation + translation mapping src points onto dst points.
RigidTransform procrustes(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
  Vec3 src_mean = Vec3::Zero(), dst_mean = Vec3::Zero();
  const double n = static_cast<double>(src.size());
  for (const Vec3& p : src) src_mean += p;
  for (const Vec3& p : dst) dst_mean += p;
  src_mean /= n;
  dst_mean /= n;

  Mat3 cross = Mat3::Zero();
  for (size_t i = 0; i < src.size(); ++i)
    cross.noalias() += (dst[i] - dst_mean) * (src[i] - src_mean).transpose();

  Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sigma = svd.singularValues();
  if (!(sigma[0] > 0.0) || sigma[1] <= 1e-12 * sigma[0])
    throw_error(ErrorCode::degenerate_input, "icp_align: degenerate correspondences");

  Mat3 fix = Mat3::Identity();
  fix(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  RigidTransform t;
  t.rotation = svd.matrixU() * fix * svd.matrixV().transpose();
  t.translation = dst_mean - t.rotation * src_mean;
  return t;
}

}  // namespace

IcpResult icp_align(const TriangleMesh& src, const TriangleMesh& dst, int max_iters,
                    double rel_tol, int stride) {
  if (src.vertices.empty() || dst.vertices.empty() || dst.triangles.empty())
    throw_error(ErrorCode::invalid_input, "icp_align: empty input mesh");
  if (stride < 1) throw_error(ErrorCode::invalid_input, "icp_align: stride must be >= 1");

  std::vector<Vec3> points;
  points.reserve(src.vertices.size() / stride + 1);
  for (size_t i = 0; i < src.vertices.size(); i += stride) points.push_back(src.vertices[i]);
  if (points.size() < 3)
    throw_error(ErrorCode::degenerate_input, "icp_align: too few source points");

  const BvhIndex index(dst);

  const double inv_n = 1.0 / static_cast<double>(points.size());
  auto surface_rms = [&](const RigidTransform& t) {
    double sq = 0.0;
    for (const Vec3& p : points) {
      const double d = index.closest_point(t.apply(p)).distance;
      sq += d * d;
    }
    return std::sqrt(sq * inv_n);
  };

  // Initialize with centroid alignment.
  Vec3 src_mean = Vec3::Zero();
  for (const Vec3& p : points) src_mean += p;
  src_mean *= inv_n;
  Vec3 dst_mean = Vec3::Zero();
  for (const Vec3& p : dst.vertices) dst_mean += p;
  dst_mean /= static_cast<double>(dst.vertices.size());

  IcpResult result;
  result.transform.translation = dst_mean - src_mean;

  std::vector<Vec3> corr(points.size());
  RigidTransform previous_t = result.transform;
  double prev_delta = 0.0;
  double prev = std::numeric_limits<double>::max();
  for (int iter = 0; iter < max_iters; ++iter) {
    for (size_t i = 0; i < points.size(); ++i)
      corr[i] = index.closest_point(result.transform.apply(points[i])).point;
    result.transform = procrustes(points, corr);

    double sq = 0.0;
    for (size_t i = 0; i < points.size(); ++i)
      sq += (result.transform.apply(points[i]) - corr[i]).squaredNorm();
    double residual = std::sqrt(sq * inv_n);

    // Point-to-point ICP contracts only linearly near the optimum, so
    // extrapolate along the latest update (Besl-McKay style) and keep the
    // jump only when it actually lowers the distance-to-surface RMS; the
    // guard preserves the non-increasing residual. The adaptive candidate
    // jumps the remaining geometric series r/(1-r) estimated from the last
    // two update magnitudes.
    if (iter >= 1 && residual > 0.0) {
      const Eigen::AngleAxisd delta_rot(result.transform.rotation *
                                        previous_t.rotation.transpose());
      const Vec3 delta_omega = delta_rot.angle() * delta_rot.axis();
      const Vec3 delta_trans = result.transform.translation - previous_t.translation;
      const double delta_norm =
          std::sqrt(delta_omega.squaredNorm() + delta_trans.squaredNorm());
      if (delta_norm > 1e-15) {
        std::vector<double> steps = {2.0, 8.0, 32.0};
        if (prev_delta > 0.0) {
          const double rate = delta_norm / prev_delta;
          if (rate > 0.05 && rate < 0.999) steps.push_back(rate / (1.0 - rate));
        }
        RigidTransform best = result.transform;
        double best_res = residual;
        for (double step : steps) {
          RigidTransform trial;
          const Vec3 omega = step * delta_omega;
          trial.rotation =
              (omega.norm() > 0.0
                   ? Eigen::AngleAxisd(omega.norm(), omega.normalized()).toRotationMatrix()
                   : Mat3::Identity()) *
              result.transform.rotation;
          trial.translation = result.transform.translation + step * delta_trans;
          const double trial_res = surface_rms(trial);
          if (trial_res < best_res) {
            best_res = trial_res;
            best = trial;
          }
        }
        result.transform = best;
        residual = best_res;
      }
      prev_delta = delta_norm;
    }
    previous_t = result.transform;

    result.residual = residual;
    result.residual_history.push_back(residual);
    result.iterations = iter + 1;
    if (std::abs(prev - residual) < rel_tol * std::max(prev, 1e-300)) break;
    if (residual == 0.0) break;
    prev = residual;
  }
  return result;
}

size_t NmeReport::valid_count() const {
  return static_cast<size_t>(
      std::count_if(rows.begin(), rows.end(), [](const NmeRow& r) { return !r.failed(); }));
}

NmeReport assemble_report(std::vector<NmeRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const NmeRow& a, const NmeRow& b) { return a.id < b.id; });
  NmeReport report;
  report.rows = std::move(rows);

  std::vector<double> values;
  std::map<int, std::vector<double>> bucket_values;
  for (const NmeRow& r : report.rows) {
    if (r.failed()) continue;
    values.push_back(r.nme);
    const int lower = static_cast<int>(std::floor(r.yaw_deg / 10.0)) * 10;
    bucket_values[lower].push_back(r.nme);
  }
  if (!values.empty()) {
    report.mean = std::accumulate(values.begin(), values.end(), 0.0) /
                  static_cast<double>(values.size());
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    report.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    report.curve.reserve(n);
    for (size_t i = 0; i < n; ++i)
      report.curve.emplace_back(sorted[i], static_cast<double>(i + 1) / static_cast<double>(n));
  }
  for (const auto& [lower, vals] : bucket_values) {
    YawBucket b;
    b.lower_deg = lower;
    b.count = static_cast<int>(vals.size());
    b.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - b.mean) * (v - b.mean);
    b.stddev = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
    report.buckets.push_back(b);
  }
  return report;
}

NmeReport evaluate_pairs(const std::vector<EvalPair>& pairs, bool align, DMode d_mode,
                         int threads) {
  if (pairs.empty()) throw_error(ErrorCode::invalid_input, "evaluate_pairs: no pairs");
  std::vector<NmeRow> rows(pairs.size());
  parallel_for(pairs.size(), threads, [&](size_t i) {
    const EvalPair& pair = pairs[i];
    NmeRow row;
    row.id = pair.id;
    row.yaw_deg = pair.yaw_deg;
    row.pitch_deg = pair.pitch_deg;
    try {
      TriangleMesh pred = pair.pred;
      if (align) {
        const IcpResult icp = icp_align(pred, pair.gt);
        pred = apply_transform(pred, icp.transform);
        row.aligned = true;
      }
      bool used_proxy = false;
      const double d =
          interocular_distance(pair.gt, d_mode == DMode::proxy, &used_proxy);
      if (used_proxy) row.flags = "proxy-d";
      row.nme = nme(pred, pair.gt, d);
    } catch (const Error& e) {
      row.flags = std::string("error:") + e.code_name();
    }
    rows[i] = std::move(row);
  });
  return assemble_report(std::move(rows));
}

}  // namespace boot3d
