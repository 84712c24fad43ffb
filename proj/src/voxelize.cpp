#include "boot3d/voxelize.hpp"

#include <algorithm>
#include <cmath>

#include "boot3d/error.hpp"

namespace boot3d {

namespace {

// Ray origins are offset from exact cell centers by these sub-cell fractions
// so that edge- and vertex-grazing hits are generically avoided; the 2-of-3
// axis majority absorbs whatever survives.
constexpr double kJitterU = 4.14213562373095e-4;  // (sqrt(2)-1) * 1e-3
constexpr double kJitterV = 7.32050807568877e-4;  // (sqrt(3)-1) * 1e-3

// Casts axis-parallel rays (axis = 0,1,2) through every jittered cell center
// of the (u,v) slab grid and records crossing parities per cell.
void vote_axis(const TriangleMesh& mesh, const Vec3i& dims, const Vec3& origin,
               const Vec3& spacing, int axis, std::vector<uint8_t>& votes) {
  const int ua = (axis + 1) % 3, va = (axis + 2) % 3;
  const int nu = dims[ua], nv = dims[va], nw = dims[axis];

  // Crossing positions along the ray, bucketed per (u,v) column.
  std::vector<std::vector<float>> columns(static_cast<size_t>(nu) * nv);

  const double u0 = origin[ua] + (0.5 + kJitterU) * spacing[ua];
  const double v0 = origin[va] + (0.5 + kJitterV) * spacing[va];

  for (const Vec3i& tri : mesh.triangles) {
    const Vec3& p0 = mesh.vertices[tri[0]];
    const Vec3& p1 = mesh.vertices[tri[1]];
    const Vec3& p2 = mesh.vertices[tri[2]];
    const Vec3 n = (p1 - p0).cross(p2 - p0);
    if (n[axis] == 0.0) continue;  // edge-on to the ray direction

    const double au = p0[ua], av = p0[va];
    const double bu = p1[ua], bv = p1[va];
    const double cu = p2[ua], cv = p2[va];

    const double lo_u = std::min({au, bu, cu}), hi_u = std::max({au, bu, cu});
    const double lo_v = std::min({av, bv, cv}), hi_v = std::max({av, bv, cv});
    int iu0 = static_cast<int>(std::ceil((lo_u - u0) / spacing[ua]));
    int iu1 = static_cast<int>(std::floor((hi_u - u0) / spacing[ua]));
    int iv0 = static_cast<int>(std::ceil((lo_v - v0) / spacing[va]));
    int iv1 = static_cast<int>(std::floor((hi_v - v0) / spacing[va]));
    iu0 = std::max(iu0, 0);
    iv0 = std::max(iv0, 0);
    iu1 = std::min(iu1, nu - 1);
    iv1 = std::min(iv1, nv - 1);

    const double area2 = (bu - au) * (cv - av) - (cu - au) * (bv - av);
    if (area2 == 0.0) continue;

    for (int iv = iv0; iv <= iv1; ++iv) {
      const double qv = v0 + iv * spacing[va];
      for (int iu = iu0; iu <= iu1; ++iu) {
        const double qu = u0 + iu * spacing[ua];
        const double w0 = (bu - qu) * (cv - qv) - (cu - qu) * (bv - qv);
        const double w1 = (cu - qu) * (av - qv) - (au - qu) * (cv - qv);
        const double w2 = (au - qu) * (bv - qv) - (bu - qu) * (av - qv);
        const bool inside = area2 > 0.0 ? (w0 > 0.0 && w1 > 0.0 && w2 > 0.0)
                                        : (w0 < 0.0 && w1 < 0.0 && w2 < 0.0);
        if (!inside) continue;
        // Ray/plane intersection along the axis.
        const double w = (n.dot(p0) - n[ua] * qu - n[va] * qv) / n[axis];
        columns[static_cast<size_t>(iv) * nu + iu].push_back(static_cast<float>(w));
      }
    }
  }

  Vec3i idx;
  for (int iv = 0; iv < nv; ++iv) {
    for (int iu = 0; iu < nu; ++iu) {
      auto& col = columns[static_cast<size_t>(iv) * nu + iu];
      if (col.empty()) continue;
      std::sort(col.begin(), col.end());
      idx[ua] = iu;
      idx[va] = iv;
      for (int iw = 0; iw < nw; ++iw) {
        const double cw = origin[axis] + (iw + 0.5) * spacing[axis];
        const size_t beyond =
            col.end() - std::upper_bound(col.begin(), col.end(), static_cast<float>(cw));
        if (beyond & 1) {
          idx[axis] = iw;
          const size_t cell = static_cast<size_t>(idx[0]) +
                              static_cast<size_t>(dims[0]) *
                                  (static_cast<size_t>(idx[1]) + static_cast<size_t>(dims[1]) * idx[2]);
          ++votes[cell];
        }
      }
    }
  }
}

}  // namespace

VoxelGrid voxelize(const TriangleMesh& mesh, const Vec3i& dims, const Aabb& bounds) {
  if (mesh.vertices.empty() || mesh.triangles.empty())
    throw_error(ErrorCode::invalid_input, "voxelize: empty mesh");
  validate_mesh(mesh);
  if ((dims.array() <= 0).any())
    throw_error(ErrorCode::invalid_input, "voxelize: dims must be positive");
  if (bounds.empty() || (bounds.extent().array() <= 0.0).any())
    throw_error(ErrorCode::invalid_input, "voxelize: bounds must have positive extent");

  const Vec3 origin = bounds.min;
  const Vec3 spacing = (bounds.extent().array() / dims.cast<double>().array()).matrix();

  const size_t count = static_cast<size_t>(dims[0]) * dims[1] * dims[2];
  std::vector<uint8_t> votes(count, 0);
  for (int axis = 0; axis < 3; ++axis)
    vote_axis(mesh, dims, origin, spacing, axis, votes);

  std::vector<float> values(count, 0.0f);
  size_t inside_cells = 0;
  for (size_t i = 0; i < count; ++i) {
    if (votes[i] >= 2) {
      values[i] = 1.0f;
      ++inside_cells;
    }
  }
  if (inside_cells == 0)
    throw_error(ErrorCode::invalid_input, "voxelize: mesh has no interior at this resolution");
  return VoxelGrid(dims, origin, spacing, std::move(values));
}

VoxelGrid voxelize_occupancy(const TriangleMesh& mesh, const Vec3i& dims, const Aabb& bounds,
                             int samples_per_axis) {
  if (samples_per_axis < 1)
    throw_error(ErrorCode::invalid_input, "voxelize_occupancy: samples_per_axis must be >= 1");
  if (samples_per_axis == 1) return voxelize(mesh, dims, bounds);

  const int s = samples_per_axis;
  const VoxelGrid fine = voxelize(mesh, dims * s, bounds);
  const double inv = 1.0 / (static_cast<double>(s) * s * s);

  std::vector<float> values(static_cast<size_t>(dims[0]) * dims[1] * dims[2], 0.0f);
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int i = 0; i < dims[0]; ++i) {
        double acc = 0.0;
        for (int dk = 0; dk < s; ++dk)
          for (int dj = 0; dj < s; ++dj)
            for (int di = 0; di < s; ++di)
              acc += fine.at(i * s + di, j * s + dj, k * s + dk);
        values[static_cast<size_t>(i) +
               static_cast<size_t>(dims[0]) *
                   (static_cast<size_t>(j) + static_cast<size_t>(dims[1]) * k)] =
            static_cast<float>(acc * inv);
      }
    }
  }
  const Vec3 spacing = (bounds.extent().array() / dims.cast<double>().array()).matrix();
  return VoxelGrid(dims, bounds.min, spacing, std::move(values));
}

}  // namespace boot3d
