#include "boot3d/marching_cubes.hpp"

#include <unordered_map>

#include "boot3d/error.hpp"
#include "mc_tables.hpp"

namespace boot3d {

namespace {

// Corner numbering (Bourke): 0..3 on the z slab, 4..7 on z+1.
constexpr int kCornerOffset[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};

// Cube edge -> (corner a, corner b).
constexpr int kEdgeCorner[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
    {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

struct EdgeKeyHash {
  size_t operator()(uint64_t k) const { return std::hash<uint64_t>{}(k); }
};

}  // namespace

TriangleMesh marching_cubes(const VoxelGrid& grid, double iso) {
  if (grid.cell_count() == 0)
    throw_error(ErrorCode::invalid_input, "marching_cubes: empty grid");
  if (!grid.all_finite())
    throw_error(ErrorCode::invalid_input, "marching_cubes: non-finite grid values");

  const Vec3i d = grid.dims();
  TriangleMesh mesh;
  if (d[0] < 2 || d[1] < 2 || d[2] < 2) return mesh;

  // Welded vertex per crossed lattice edge: key = lower corner index * 3 + axis.
  std::unordered_map<uint64_t, int, EdgeKeyHash> edge_vertex;
  const auto lattice = [&](int i, int j, int k) {
    return static_cast<uint64_t>(grid.index(i, j, k));
  };

  int corner_i[8], corner_j[8], corner_k[8];
  double corner_v[8];

  for (int k = 0; k + 1 < d[2]; ++k) {
    for (int j = 0; j + 1 < d[1]; ++j) {
      for (int i = 0; i + 1 < d[0]; ++i) {
        int cube = 0;
        double avg = 0.0;
        for (int c = 0; c < 8; ++c) {
          corner_i[c] = i + kCornerOffset[c][0];
          corner_j[c] = j + kCornerOffset[c][1];
          corner_k[c] = k + kCornerOffset[c][2];
          corner_v[c] = grid.at(corner_i[c], corner_j[c], corner_k[c]);
          avg += corner_v[c];
          if (corner_v[c] < iso) cube |= 1 << c;
        }
        if (detail::kEdgeTable[cube] == 0) continue;
        avg *= 0.125;

        // Ambiguous configurations pick the triangulation matching the side
        // the cube average falls on; complementing the field flips both the
        // case bits and this test, so the same geometry is produced.
        const signed char* row = detail::kTriTable[cube];
        if (detail::kCaseAmbiguous[cube] && avg < iso)
          row = detail::kTriTableAlt[cube];

        int edge_index[12];
        for (int e = 0; e < 12; ++e) {
          if (!(detail::kEdgeTable[cube] & (1 << e))) continue;
          const int a = kEdgeCorner[e][0], b = kEdgeCorner[e][1];
          // Canonical lattice edge: lower corner plus axis.
          int ai = corner_i[a], aj = corner_j[a], ak = corner_k[a];
          int bi = corner_i[b], bj = corner_j[b], bk = corner_k[b];
          int axis = (ai != bi) ? 0 : (aj != bj ? 1 : 2);
          bool swapped = (bi < ai) || (bj < aj) || (bk < ak);
          if (swapped) {
            std::swap(ai, bi);
            std::swap(aj, bj);
            std::swap(ak, bk);
          }
          const uint64_t key = lattice(ai, aj, ak) * 3 + axis;
          auto it = edge_vertex.find(key);
          if (it == edge_vertex.end()) {
            const double va = grid.at(ai, aj, ak);
            const double vb = grid.at(bi, bj, bk);
            const double t = (vb == va) ? 0.5 : (iso - va) / (vb - va);
            const Vec3 pa = grid.sample_position(ai, aj, ak);
            const Vec3 pb = grid.sample_position(bi, bj, bk);
            const int idx = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(pa + t * (pb - pa));
            it = edge_vertex.emplace(key, idx).first;
          }
          edge_index[e] = it->second;
        }

        for (int t = 0; row[t] != -1; t += 3) {
          const int v0 = edge_index[row[t]];
          const int v1 = edge_index[row[t + 1]];
          const int v2 = edge_index[row[t + 2]];
          if (v0 == v1 || v1 == v2 || v0 == v2) continue;  // collapsed at iso hit
          mesh.triangles.push_back(Vec3i(v0, v1, v2));
        }
      }
    }
  }
  return mesh;
}

}  // namespace boot3d
