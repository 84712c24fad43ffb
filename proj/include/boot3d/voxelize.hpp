#pragma once

#include "boot3d/mesh.hpp"
#include "boot3d/voxel_grid.hpp"

namespace boot3d {

/// Rasterizes a closed mesh into a binary occupancy grid over `bounds`:
/// a cell gets value 1 when its center is classified inside by crossing
/// parity along the +x, +y and +z axes with a 2-of-3 majority vote.
/// Throws Error(invalid_input) for empty meshes or when no cell lands
/// inside (open sheets have no interior).
VoxelGrid voxelize(const TriangleMesh& mesh, const Vec3i& dims, const Aabb& bounds);

/// Fractional-occupancy variant: each cell holds the inside fraction of
/// samples_per_axis^3 sub-points, so an iso-0.5 marching-cubes pass
/// recovers the surface with sub-cell accuracy instead of the half-cell
/// staircase a binary grid gives.
VoxelGrid voxelize_occupancy(const TriangleMesh& mesh, const Vec3i& dims, const Aabb& bounds,
                             int samples_per_axis = 3);

}  // namespace boot3d
