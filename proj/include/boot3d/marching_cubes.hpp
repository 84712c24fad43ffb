#pragma once

#include "boot3d/mesh.hpp"
#include "boot3d/voxel_grid.hpp"

namespace boot3d {

/// Extracts the iso-surface {x : occupancy(x) = iso} as a triangle mesh in
/// world coordinates. Vertices are interpolated linearly along cell edges
/// and welded, so interior surfaces come out watertight. Triangle winding
/// is such that normals point toward lower occupancy. Face-ambiguous cube
/// configurations are resolved by comparing iso against the cube's sampled
/// average, which keeps the output invariant under value complementation
/// (values -> 1-values, iso -> 1-iso, windings flipped).
///
/// An iso outside the grid's value range yields an empty mesh.
TriangleMesh marching_cubes(const VoxelGrid& grid, double iso);

}  // namespace boot3d
