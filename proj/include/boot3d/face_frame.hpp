#pragma once

#include <array>
#include <string>

#include "boot3d/mesh.hpp"
#include "boot3d/types.hpp"

namespace boot3d {

using SymmetricMatrix3 = Mat3;

/// Orthonormal, right-handed face frame: lateral is the bilateral-symmetry
/// plane normal, gaze points out of the nose, vertical toward the top of
/// the head (lateral x vertical = gaze). The backplane carrying the
/// background texture is the plane with normal = gaze behind the head.
struct FaceFrame {
  Vec3 centroid = Vec3::Zero();
  Vec3 lateral = Vec3::UnitX();
  Vec3 vertical = Vec3::UnitY();
  Vec3 gaze = Vec3::UnitZ();
  Vec3 eigenvalues = Vec3::Zero();  // covariance spectrum, descending
  bool eigen_tie = false;           // set when eigenvalue gaps fall under 5%

  Mat3 rotation() const {
    Mat3 r;
    r.col(0) = lateral;
    r.col(1) = vertical;
    r.col(2) = gaze;
    return r;
  }
};

/// Vertex mean and unbiased sample covariance. Throws
/// Error(degenerate_input) for < 4 vertices or a rank-deficient cloud.
std::pair<Vec3, SymmetricMatrix3> sample_covariance(const TriangleMesh& mesh);

struct EigenPair {
  double value = 0.0;
  Vec3 vector = Vec3::Zero();
};

/// Eigen-decomposition of a symmetric 3x3, pairs sorted by descending value.
std::array<EigenPair, 3> eigen_symmetric3(const SymmetricMatrix3& m);

/// Mean distance from each vertex reflected through the plane to its
/// nearest original vertex, normalized by the bounding-box diagonal.
/// Lower is more symmetric.
double symmetry_score(const TriangleMesh& mesh, const Vec3& plane_point,
                      const Vec3& plane_normal);

/// Recovers the face frame from the vertex covariance spectrum: gaze is the
/// smallest-eigenvalue axis (faces are shallow along depth), lateral is the
/// remaining axis with the lower symmetry_score, vertical the last. Signs
/// come from the nose/eye landmarks when present, otherwise from
/// surface-area and vertex-order cues; see README for the exact rules.
FaceFrame estimate_face_frame(const TriangleMesh& mesh);

/// 12-number CSV row: centroid, lateral, vertical, gaze.
std::string face_frame_csv_row(const FaceFrame& frame);
FaceFrame face_frame_from_csv_row(const std::string& row);

}  // namespace boot3d
