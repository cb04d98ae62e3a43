#include "cutfem/p1_space.hpp"

#include <cassert>

namespace cutfem {

P1Space build_p1_space(const BackgroundMesh& mesh, const CutTopology& topo) {
  P1Space space;
  space.mesh = &mesh;
  space.dof_of_vertex.assign(mesh.num_vertices(), -1);

  std::vector<bool> active(mesh.num_vertices(), false);
  std::vector<bool> on_cut(mesh.num_vertices(), false);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (!topo.is_active(t)) continue;
    for (int v : mesh.triangles[t]) {
      active[v] = true;
      if (topo.is_cut(t)) on_cut[v] = true;
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (!active[v]) continue;
    space.dof_of_vertex[v] = space.num_dofs();
    space.active_vertices.push_back(v);
    if (on_cut[v]) space.cut_dofs.push_back(space.dof_of_vertex[v]);
  }
  return space;
}

P1Element P1Element::from(const std::array<Vec2, 3>& v) {
  P1Element el;
  el.coords = v;
  double det = cross(v[1] - v[0], v[2] - v[0]);
  assert(det != 0.0);
  // gradient of the hat function at vertex i is the inward normal of the
  // opposite edge scaled by 1/height
  for (int i = 0; i < 3; ++i) {
    Vec2 a = v[(i + 1) % 3], b = v[(i + 2) % 3];
    el.grad[i] = {(a.y - b.y) / det, (b.x - a.x) / det};
  }
  return el;
}

std::array<double, 3> P1Element::values_at(Vec2 p) const {
  double det = cross(coords[1] - coords[0], coords[2] - coords[0]);
  double l1 = cross(p - coords[0], coords[2] - coords[0]) / det;
  double l2 = cross(coords[1] - coords[0], p - coords[0]) / det;
  return {1.0 - l1 - l2, l1, l2};
}

} // namespace cutfem
