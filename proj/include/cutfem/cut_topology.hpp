#pragma once

#include <array>
#include <vector>

#include "cutfem/level_set.hpp"
#include "cutfem/mesh.hpp"
#include "cutfem/quadrature.hpp"

namespace cutfem {

enum class ElementClass { Inside, Outside, Cut };

// Geometry of one cut element with respect to the piecewise-linear level set:
// interior sub-triangles (ccw) covering {phi_h < 0} and the straight
// interface segment with its outward unit normal.
struct CutData {
  std::vector<std::array<Vec2, 3>> interior; // one or two triangles
  Vec2 seg_a, seg_b;
  Vec2 normal;         // grad(phi_h)/|grad(phi_h)|, points into {phi_h > 0}
  bool neumann = false;
};

struct CutTopology {
  std::vector<double> vertex_phi; // snapped nodal values
  std::vector<ElementClass> classes;
  std::vector<int> cut_index; // element -> index into cut_data, or -1
  std::vector<CutData> cut_data;
  std::vector<int> ghost_facets;
  // cut elements no active facet chain links to an interior one (diagnostic)
  std::vector<int> isolated_cut_elements;
  double h = 0.0;        // penalty length scale: global max element diameter
  double snap_eps = 0.0; // magnitude assigned to snapped nodal values

  bool is_active(int t) const { return classes[t] != ElementClass::Outside; }
  bool is_cut(int t) const { return classes[t] == ElementClass::Cut; }
};

struct ClassifyOptions {
  // Heuristic resolution check: sample the exact level set at edge midpoints
  // and centroids and fail if an element would need more than one interface
  // segment (features smaller than the mesh can represent).
  bool check_resolution = true;
  // A midpoint sign flip only counts when the missed pocket is deeper than
  // this fraction of h; smooth curvature leaves O(h^2) slivers below it.
  double resolution_depth = 0.02;
  double snap_rel = 1e-12; // snap threshold relative to bbox diameter
};

// Thrown when the mesh cannot represent the interface (an element whose
// classification would need more than one segment). Refine and retry.
struct DegenerateGeometryError : Error {
  using Error::Error;
};

CutTopology classify_elements(const BackgroundMesh& mesh, const LevelSetSpec& ls,
                              const ClassifyOptions& options = {});

// Decomposition of a single triangle from its (snapped, nonzero) vertex
// values; requires mixed signs.
CutData cut_element_decomposition(const std::array<Vec2, 3>& coords,
                                  const std::array<double, 3>& phi);

// Quadrature over the interior part {phi_h < 0} of one element. Empty for
// Outside elements; weights sum to the interior measure.
std::vector<QuadPoint> volume_quadrature(const BackgroundMesh& mesh,
                                         const CutTopology& topo, int element,
                                         int degree);

struct InterfaceQuadPoint {
  Vec2 point;
  double weight = 0.0;
  Vec2 normal;
  bool neumann = false;
};

// Quadrature along the interface segment of one cut element; weights sum to
// the segment length. Empty for uncut elements.
std::vector<InterfaceQuadPoint> interface_quadrature(const CutTopology& topo,
                                                     int element, int degree);

double interior_measure(const BackgroundMesh& mesh, const CutTopology& topo);

} // namespace cutfem
