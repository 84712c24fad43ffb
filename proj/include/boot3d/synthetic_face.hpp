#pragma once

#include <cstdint>

#include "boot3d/mesh.hpp"

namespace boot3d {

/// Procedural mask-like face: a closed slab whose front surface is a
/// parametric heightfield (dome + nose ridge + brow - eye sockets), exactly
/// mirror-symmetric about the x = 0 plane, shallow along +z (the gaze) and
/// taller than wide. Carries eye_outer_left / eye_outer_right / nose_tip
/// landmarks. Canonical frame: lateral = +x (left eye at -x), vertical = +y,
/// gaze = +z.
struct SyntheticFaceSpec {
  uint64_t seed = 0;

  // Shape parameters and their valid ranges.
  double width_scale = 1.0;    // [0.7, 1.3] lateral half-extent multiplier
  double height_scale = 1.0;   // [0.7, 1.3] vertical multiplier
  double depth_scale = 1.0;    // [0.7, 1.3] relief multiplier
  double nose_length = 0.32;   // [0.22, 0.42] fraction of face height
  double nose_width = 0.16;    // [0.10, 0.24] fraction of face width
  double eye_offset_x = 0.42;  // [0.32, 0.52] outer eye x, fraction of half-width
  double eye_offset_y = 0.28;  // [0.18, 0.38] eye line height, fraction of half-height
  double brow_depth = 0.10;    // [0.04, 0.18] brow ridge relief

  int grid_u = 40;  // front-surface resolution, >= 8
  int grid_v = 48;
};

/// Uniformly samples the documented parameter ranges.
SyntheticFaceSpec random_face_spec(uint64_t seed);

/// Deterministic mesh for the spec. Throws Error(invalid_input) for
/// parameters outside their ranges.
TriangleMesh generate_synthetic_face(const SyntheticFaceSpec& spec);

/// Half-extents of the canonical face footprint in world units; the face
/// fits inside [-x,x] x [-y,y] x [-z,z] for every legal spec.
Vec3 synthetic_face_half_extent();

}  // namespace boot3d
