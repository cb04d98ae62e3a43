#include "cutfem/mesh.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace cutfem {

double BackgroundMesh::element_diameter(int t) const {
  auto [a, b, c] = triangle_coords(t);
  return std::max({norm(b - a), norm(c - b), norm(a - c)});
}

double BackgroundMesh::max_diameter() const {
  double h = 0.0;
  for (int t = 0; t < num_triangles(); ++t) h = std::max(h, element_diameter(t));
  return h;
}

namespace {

// Enumerate facets from the triangle list. Interior facets get left/right by
// ascending element index so the derived normal orientation is deterministic.
void build_facets(BackgroundMesh& mesh) {
  std::map<std::pair<int, int>, int> edge_to_facet;
  mesh.facets.clear();
  mesh.triangle_facets.assign(mesh.triangles.size(), {-1, -1, -1});
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      // local facet e is opposite local vertex e
      int v0 = tri[(e + 1) % 3];
      int v1 = tri[(e + 2) % 3];
      auto key = std::minmax(v0, v1);
      auto it = edge_to_facet.find(key);
      if (it == edge_to_facet.end()) {
        Facet f;
        f.vertices = {key.first, key.second};
        f.left = t;
        int id = mesh.num_facets();
        mesh.facets.push_back(f);
        edge_to_facet.emplace(key, id);
        mesh.triangle_facets[t][e] = id;
      } else {
        Facet& f = mesh.facets[it->second];
        assert(f.right == kNoElement && "facet shared by more than two triangles");
        f.right = t; // t > f.left since triangles are visited in order
        mesh.triangle_facets[t][e] = it->second;
      }
    }
  }
}

} // namespace

BackgroundMesh build_structured_mesh(const BoundingBox& bbox, int n) {
  if (n < 1) throw Error("build_structured_mesh: need n >= 1");
  if (!(bbox.hi.x > bbox.lo.x && bbox.hi.y > bbox.lo.y))
    throw Error("build_structured_mesh: empty bounding box");

  BackgroundMesh mesh;
  mesh.bbox = bbox;
  mesh.level = 0;
  const double dx = (bbox.hi.x - bbox.lo.x) / n;
  const double dy = (bbox.hi.y - bbox.lo.y) / n;

  mesh.vertices.reserve(static_cast<size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({bbox.lo.x + i * dx, bbox.lo.y + j * dy});

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.triangles.reserve(static_cast<size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j);
      int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      // split along the v00-v11 diagonal, both children counter-clockwise
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  build_facets(mesh);
  return mesh;
}

BackgroundMesh refine_uniform(const BackgroundMesh& coarse,
                              std::vector<VertexParent>* parent_map) {
  BackgroundMesh fine;
  fine.bbox = coarse.bbox;
  fine.level = coarse.level + 1;
  fine.vertices = coarse.vertices;

  std::vector<VertexParent> parents(coarse.vertices.size());
  for (int v = 0; v < coarse.num_vertices(); ++v) parents[v] = {v, -1};

  std::map<std::pair<int, int>, int> midpoint;
  auto midpoint_id = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int id = fine.num_vertices();
    fine.vertices.push_back(0.5 * (coarse.vertices[a] + coarse.vertices[b]));
    parents.push_back({key.first, key.second});
    midpoint.emplace(key, id);
    return id;
  };

  fine.triangles.reserve(coarse.triangles.size() * 4);
  for (const auto& tri : coarse.triangles) {
    int m01 = midpoint_id(tri[0], tri[1]);
    int m12 = midpoint_id(tri[1], tri[2]);
    int m20 = midpoint_id(tri[2], tri[0]);
    fine.triangles.push_back({tri[0], m01, m20});
    fine.triangles.push_back({tri[1], m12, m01});
    fine.triangles.push_back({tri[2], m20, m12});
    fine.triangles.push_back({m01, m12, m20});
  }
  build_facets(fine);
  if (parent_map) *parent_map = std::move(parents);
  return fine;
}

MeshHierarchy build_hierarchy(const BoundingBox& bbox, int n, int levels) {
  if (levels < 1) throw Error("build_hierarchy: need at least one level");
  MeshHierarchy hierarchy;
  hierarchy.meshes.push_back(build_structured_mesh(bbox, n));
  for (int l = 1; l < levels; ++l) {
    std::vector<VertexParent> parents;
    hierarchy.meshes.push_back(refine_uniform(hierarchy.meshes[l - 1], &parents));
    hierarchy.parent_maps.push_back(std::move(parents));
  }
  return hierarchy;
}

Vec2 facet_normal(const BackgroundMesh& mesh, int f) {
  const Facet& facet = mesh.facets[f];
  Vec2 p0 = mesh.vertices[facet.vertices[0]];
  Vec2 p1 = mesh.vertices[facet.vertices[1]];
  Vec2 tangent = p1 - p0;
  double len = norm(tangent);
  assert(len > 0.0);
  Vec2 n{tangent.y / len, -tangent.x / len};
  // orient away from the left element
  const auto& tri = mesh.triangles[facet.left];
  Vec2 centroid = (1.0 / 3.0) * (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]);
  if (dot(n, 0.5 * (p0 + p1) - centroid) < 0.0) n = {-n.x, -n.y};
  return n;
}

} // namespace cutfem
