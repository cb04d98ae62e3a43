#pragma once

#include <array>
#include <limits>
#include <vector>

#include "cutfem/geometry.hpp"

namespace cutfem {

// Interior facets store both incident elements with left < right;
// boundary facets have right == kNoElement.
inline constexpr int kNoElement = -1;

struct Facet {
  std::array<int, 2> vertices{-1, -1};
  int left = kNoElement;
  int right = kNoElement;
};

struct BackgroundMesh {
  BoundingBox bbox;
  int level = 0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles; // counter-clockwise
  std::vector<Facet> facets;
  std::vector<std::array<int, 3>> triangle_facets; // facet ids opposite each local vertex

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_facets() const { return static_cast<int>(facets.size()); }

  std::array<Vec2, 3> triangle_coords(int t) const {
    const auto& tri = triangles[t];
    return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
  }

  double element_diameter(int t) const;
  // Largest element diameter; this is the h used in all penalty scalings.
  double max_diameter() const;
};

// How a fine vertex relates to the coarser mesh: either it coincides with a
// coarse vertex or it is the midpoint of a coarse edge.
struct VertexParent {
  int a = -1;
  int b = -1; // b == -1 means the vertex is the coarse vertex a

  bool is_coarse_vertex() const { return b < 0; }
};

struct MeshHierarchy {
  std::vector<BackgroundMesh> meshes;
  // parent_maps[l][v] describes fine vertex v of meshes[l+1] in terms of meshes[l].
  std::vector<std::vector<VertexParent>> parent_maps;

  int num_levels() const { return static_cast<int>(meshes.size()); }
};

// Structured triangulation of bbox: n x n grid cells, each split along the
// same diagonal (lower-left to upper-right), giving 2*n^2 triangles.
BackgroundMesh build_structured_mesh(const BoundingBox& bbox, int n);

// One sweep of red refinement: every triangle is split into four congruent
// children through its edge midpoints. Coarse vertices keep their indices.
BackgroundMesh refine_uniform(const BackgroundMesh& coarse,
                              std::vector<VertexParent>* parent_map);

MeshHierarchy build_hierarchy(const BoundingBox& bbox, int n, int levels);

// Unit normal of facet f, oriented from facet.left into facet.right
// (outward for boundary facets).
Vec2 facet_normal(const BackgroundMesh& mesh, int f);

} // namespace cutfem
