#include "boot3d/face_frame.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "boot3d/error.hpp"
#include "boot3d/kdtree.hpp"

namespace boot3d {

namespace {

Aabb vertex_bounds(const TriangleMesh& mesh) {
  Aabb box;
  for (const Vec3& v : mesh.vertices) box.expand(v);
  return box;
}

constexpr double kTieGap = 0.05;  // relative eigenvalue gap treated as a tie

}  // namespace

std::pair<Vec3, SymmetricMatrix3> sample_covariance(const TriangleMesh& mesh) {
  const size_t n = mesh.vertices.size();
  if (n < 4)
    throw_error(ErrorCode::degenerate_input, "sample_covariance: need at least 4 vertices");
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& v : mesh.vertices) centroid += v;
  centroid /= static_cast<double>(n);

  Mat3 cov = Mat3::Zero();
  for (const Vec3& v : mesh.vertices) {
    const Vec3 d = v - centroid;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Mat3> es(cov, Eigen::EigenvaluesOnly);
  const Vec3 ev = es.eigenvalues();  // ascending
  if (ev[0] < 1e-9 * std::max(ev[2], 1e-300))
    throw_error(ErrorCode::degenerate_input, "sample_covariance: rank-deficient vertex cloud");
  return {centroid, cov};
}

std::array<EigenPair, 3> eigen_symmetric3(const SymmetricMatrix3& m) {
  if (!m.allFinite())
    throw_error(ErrorCode::invalid_input, "eigen_symmetric3: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Mat3> es(m);
  if (es.info() != Eigen::Success)
    throw_error(ErrorCode::numerical_failure, "eigen_symmetric3: solver failed");
  std::array<EigenPair, 3> out;
  for (int k = 0; k < 3; ++k) {
    out[k].value = es.eigenvalues()[2 - k];  // Eigen sorts ascending
    out[k].vector = es.eigenvectors().col(2 - k);
  }
  return out;
}

double symmetry_score(const TriangleMesh& mesh, const Vec3& plane_point,
                      const Vec3& plane_normal) {
  if (mesh.vertices.empty())
    throw_error(ErrorCode::invalid_input, "symmetry_score: empty mesh");
  const double nn = plane_normal.norm();
  if (nn == 0.0 || !std::isfinite(nn))
    throw_error(ErrorCode::invalid_input, "symmetry_score: invalid plane normal");
  const Vec3 n = plane_normal / nn;

  const double diag = vertex_bounds(mesh).diagonal();
  if (diag == 0.0)
    throw_error(ErrorCode::degenerate_input, "symmetry_score: zero-extent mesh");

  KdTree tree(mesh.vertices);
  double sum = 0.0;
  for (const Vec3& v : mesh.vertices) {
    const Vec3 reflected = v - 2.0 * (v - plane_point).dot(n) * n;
    sum += std::sqrt(tree.nearest(reflected).second);
  }
  return sum / (static_cast<double>(mesh.vertices.size()) * diag);
}

FaceFrame estimate_face_frame(const TriangleMesh& mesh) {
  const auto [centroid, cov] = sample_covariance(mesh);
  const auto eig = eigen_symmetric3(cov);

  FaceFrame frame;
  frame.centroid = centroid;
  frame.eigenvalues = Vec3(eig[0].value, eig[1].value, eig[2].value);
  frame.eigen_tie = (eig[0].value - eig[1].value) < kTieGap * eig[0].value ||
                    (eig[1].value - eig[2].value) < kTieGap * eig[0].value;

  // Shallow faces: the depth (gaze) axis carries the least variance.
  Vec3 gaze = eig[2].vector;

  // The symmetry-plane normal is whichever remaining axis reflects the mesh
  // onto itself best; the ordering prior (vertical > lateral) is only a prior.
  const double score0 = symmetry_score(mesh, centroid, eig[0].vector);
  const double score1 = symmetry_score(mesh, centroid, eig[1].vector);
  Vec3 lateral = score1 <= score0 ? eig[1].vector : eig[0].vector;

  // Gaze sign: toward the nose when we have one.
  if (mesh.has_landmark("nose_tip")) {
    if (gaze.dot(mesh.landmark("nose_tip") - centroid) < 0.0) gaze = -gaze;
  } else {
    double signal = 0.0;
    if (!mesh.triangles.empty()) {
      // Side with more surface area along the gaze axis.
      for (const Vec3i& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        const double off = ((a + b + c) / 3.0 - centroid).dot(gaze);
        signal += (off > 0.0 ? 1.0 : -1.0) * triangle_area(a, b, c);
      }
    } else {
      for (const Vec3& v : mesh.vertices) signal += std::pow((v - centroid).dot(gaze), 3);
    }
    if (signal < 0.0) gaze = -gaze;
  }

  // Lateral sign: left-to-right eye direction when landmarks exist, else the
  // first off-plane vertex in storage order (stable under rigid motion).
  if (mesh.has_landmark("eye_outer_left") && mesh.has_landmark("eye_outer_right")) {
    const Vec3 across =
        mesh.landmark("eye_outer_right") - mesh.landmark("eye_outer_left");
    if (lateral.dot(across) < 0.0) lateral = -lateral;
  } else {
    const double eps = 1e-9 * vertex_bounds(mesh).diagonal();
    for (const Vec3& v : mesh.vertices) {
      const double off = (v - centroid).dot(lateral);
      if (std::abs(off) > eps) {
        if (off < 0.0) lateral = -lateral;
        break;
      }
    }
  }

  frame.gaze = gaze.normalized();
  frame.lateral = (lateral - lateral.dot(frame.gaze) * frame.gaze).normalized();
  frame.vertical = frame.gaze.cross(frame.lateral);
  return frame;
}

std::string face_frame_csv_row(const FaceFrame& frame) {
  const Vec3* parts[4] = {&frame.centroid, &frame.lateral, &frame.vertical, &frame.gaze};
  std::string row;
  char buf[32];
  for (int p = 0; p < 4; ++p) {
    for (int k = 0; k < 3; ++k) {
      if (!row.empty()) row += ',';
      std::snprintf(buf, sizeof(buf), "%.17g", (*parts[p])[k]);
      row += buf;
    }
  }
  return row;
}

FaceFrame face_frame_from_csv_row(const std::string& row) {
  std::istringstream ss(row);
  double vals[12];
  char comma;
  for (int k = 0; k < 12; ++k) {
    if (!(ss >> vals[k])) throw_error(ErrorCode::io_failure, "bad face-frame row");
    ss >> comma;
  }
  FaceFrame frame;
  frame.centroid = Vec3(vals[0], vals[1], vals[2]);
  frame.lateral = Vec3(vals[3], vals[4], vals[5]);
  frame.vertical = Vec3(vals[6], vals[7], vals[8]);
  frame.gaze = Vec3(vals[9], vals[10], vals[11]);
  return frame;
}

}  // namespace boot3d
