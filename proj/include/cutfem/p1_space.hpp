#pragma once

#include <vector>

#include "cutfem/cut_topology.hpp"
#include "cutfem/mesh.hpp"

namespace cutfem {

// Continuous P1 space on the active mesh: one dof per vertex of any
// non-Outside element; fully exterior vertices carry no dof.
struct P1Space {
  const BackgroundMesh* mesh = nullptr;
  std::vector<int> active_vertices; // sorted vertex ids
  std::vector<int> dof_of_vertex;   // -1 for inactive vertices
  std::vector<int> cut_dofs;        // dofs sitting on a vertex of a cut element

  int num_dofs() const { return static_cast<int>(active_vertices.size()); }
};

P1Space build_p1_space(const BackgroundMesh& mesh, const CutTopology& topo);

// Values and gradients of the three local basis functions on a triangle.
struct P1Element {
  std::array<Vec2, 3> grad;
  std::array<Vec2, 3> coords;

  static P1Element from(const std::array<Vec2, 3>& v);
  std::array<double, 3> values_at(Vec2 p) const;
};

} // namespace cutfem
