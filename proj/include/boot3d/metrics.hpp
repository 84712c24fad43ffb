#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boot3d/bvh.hpp"
#include "boot3d/mesh.hpp"
#include "boot3d/rigid_transform.hpp"

namespace boot3d {

/// L2 distance between the outer-eye landmark vertices. Without landmarks,
/// throws Error(missing_landmark) unless `allow_proxy`, in which case the
/// documented proxy 0.4 * (extent along the estimated lateral axis) is
/// returned and *used_proxy is set.
double interocular_distance(const TriangleMesh& mesh, bool allow_proxy = false,
                            bool* used_proxy = nullptr);

/// Eq-style normalized mean error: mean over predicted vertices of the
/// distance to the closest point on the ground-truth surface, divided by d.
double nme(const TriangleMesh& pred, const TriangleMesh& gt, double d);
double nme(const TriangleMesh& pred, const BvhIndex& gt_index, double d);

struct IcpResult {
  RigidTransform transform;
  double residual = 0.0;  // final RMS distance to correspondences
  int iterations = 0;
  std::vector<double> residual_history;
};

/// Point-to-point ICP from src vertices to the dst surface. Starts from
/// centroid alignment; each iteration solves the orthogonal Procrustes
/// problem (SVD with proper-rotation correction) for fresh closest-point
/// correspondences. `stride` subsamples src vertices for large meshes.
IcpResult icp_align(const TriangleMesh& src, const TriangleMesh& dst, int max_iters = 50,
                    double rel_tol = 1e-6, int stride = 1);

struct NmeRow {
  std::string id;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  double nme = 0.0;
  bool aligned = false;
  std::string flags;  // "proxy-d", "error:<code>", ... semicolon separated

  bool failed() const { return flags.rfind("error:", 0) == 0; }
};

struct YawBucket {
  int lower_deg = 0;  // bucket spans [lower, lower+10)
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct NmeReport {
  std::vector<NmeRow> rows;  // sorted by id
  double mean = 0.0;
  double median = 0.0;
  std::vector<YawBucket> buckets;                  // 10-degree yaw buckets
  std::vector<std::pair<double, double>> curve;    // (nme threshold, fraction <=)

  /// Rows that produced a value (failed rows are excluded from aggregates).
  size_t valid_count() const;
};

enum class DMode { landmark, proxy };

struct EvalPair {
  TriangleMesh pred;
  TriangleMesh gt;
  std::string id;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
};

/// Per pair: optional ICP alignment of pred onto gt, normalizer d from gt
/// (landmarks or proxy), then NME. Per-pair failures become flagged rows.
NmeReport evaluate_pairs(const std::vector<EvalPair>& pairs, bool align, DMode d_mode,
                         int threads = 1);

/// Assembles aggregates (mean, median, buckets, cumulative curve) from rows.
NmeReport assemble_report(std::vector<NmeRow> rows);

void write_report_rows_csv(const std::string& path, const NmeReport& report);
void write_report_aggregate_csv(const std::string& path, const NmeReport& report);
void write_report_bucket_svg(const std::string& path, const NmeReport& report,
                             const std::string& title = "NME per yaw bucket");
/// Optional overlay of a second report (e.g. before/after bootstrap).
void write_report_bucket_svg_compare(const std::string& path, const NmeReport& a,
                                     const NmeReport& b, const std::string& label_a,
                                     const std::string& label_b);
void write_report_curve_svg(const std::string& path, const NmeReport& report,
                            const std::string& title = "NME vs fraction of images");

}  // namespace boot3d
