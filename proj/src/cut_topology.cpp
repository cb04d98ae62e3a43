#include "cutfem/cut_topology.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>

namespace cutfem {

namespace {

Vec2 edge_crossing(Vec2 p, Vec2 q, double fp, double fq) {
  assert(fp * fq < 0.0);
  double t = fp / (fp - fq);
  return p + t * (q - p);
}

} // namespace

CutData cut_element_decomposition(const std::array<Vec2, 3>& v,
                                  const std::array<double, 3>& phi) {
  int neg = (phi[0] < 0) + (phi[1] < 0) + (phi[2] < 0);
  if (neg == 0 || neg == 3)
    throw Error("cut_element_decomposition: element is not cut");
  assert(phi[0] != 0.0 && phi[1] != 0.0 && phi[2] != 0.0);

  // local index of the vertex whose sign differs from the other two
  int lone = -1;
  bool lone_negative = (neg == 1);
  for (int i = 0; i < 3; ++i) {
    bool is_neg = phi[i] < 0;
    if (is_neg == lone_negative) lone = i;
  }
  int a = lone, b = (lone + 1) % 3, c = (lone + 2) % 3;

  CutData cut;
  Vec2 p_ab = edge_crossing(v[a], v[b], phi[a], phi[b]);
  Vec2 p_ca = edge_crossing(v[c], v[a], phi[c], phi[a]);

  if (lone_negative) {
    cut.interior.push_back({v[a], p_ab, p_ca});
  } else {
    cut.interior.push_back({v[b], v[c], p_ca});
    cut.interior.push_back({v[b], p_ca, p_ab});
  }

  // constant gradient of the linear interpolant; nonzero since signs are mixed
  double det = cross(v[1] - v[0], v[2] - v[0]);
  double gx = ((phi[1] - phi[0]) * (v[2].y - v[0].y) -
               (phi[2] - phi[0]) * (v[1].y - v[0].y)) / det;
  double gy = ((phi[2] - phi[0]) * (v[1].x - v[0].x) -
               (phi[1] - phi[0]) * (v[2].x - v[0].x)) / det;
  double g = std::sqrt(gx * gx + gy * gy);
  assert(g > 0.0);
  cut.normal = {gx / g, gy / g};

  // order the segment endpoints along the tangent (normal rotated +90deg)
  Vec2 tangent{-cut.normal.y, cut.normal.x};
  if (dot(p_ca - p_ab, tangent) >= 0.0) {
    cut.seg_a = p_ab;
    cut.seg_b = p_ca;
  } else {
    cut.seg_a = p_ca;
    cut.seg_b = p_ab;
  }
  return cut;
}

CutTopology classify_elements(const BackgroundMesh& mesh, const LevelSetSpec& ls,
                              const ClassifyOptions& options) {
  CutTopology topo;
  topo.h = mesh.max_diameter();
  topo.snap_eps = options.snap_rel * mesh.bbox.diameter();

  auto snapped = [&](Vec2 p) {
    double f = ls(p);
    // vertices numerically on the interface count as interior
    return std::fabs(f) < topo.snap_eps ? -topo.snap_eps : f;
  };

  topo.vertex_phi.resize(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v)
    topo.vertex_phi[v] = snapped(mesh.vertices[v]);

  topo.classes.resize(mesh.num_triangles());
  topo.cut_index.assign(mesh.num_triangles(), -1);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    std::array<double, 3> phi{topo.vertex_phi[tri[0]], topo.vertex_phi[tri[1]],
                              topo.vertex_phi[tri[2]]};
    int neg = (phi[0] < 0) + (phi[1] < 0) + (phi[2] < 0);
    if (neg == 3) {
      topo.classes[t] = ElementClass::Inside;
    } else if (neg == 0) {
      topo.classes[t] = ElementClass::Outside;
    } else {
      topo.classes[t] = ElementClass::Cut;
      topo.cut_index[t] = static_cast<int>(topo.cut_data.size());
      CutData cut = cut_element_decomposition(mesh.triangle_coords(t), phi);
      if (ls.neumann) cut.neumann = ls.neumann(0.5 * (cut.seg_a + cut.seg_b));
      topo.cut_data.push_back(std::move(cut));
    }
  }

  if (options.check_resolution) {
    // an edge whose endpoints agree in sign but whose midpoint does not is
    // crossed at least twice; a sign flip at the centroid of an otherwise
    // one-signed element is an island. Both need more than one segment.
    std::vector<double> facet_mid(mesh.num_facets());
    for (int f = 0; f < mesh.num_facets(); ++f) {
      const auto& fc = mesh.facets[f];
      facet_mid[f] =
          snapped(0.5 * (mesh.vertices[fc.vertices[0]] + mesh.vertices[fc.vertices[1]]));
    }
    // Depth of the pocket behind a double-crossed edge, estimated as
    // |phi(m)| / |grad phi(m)|. Scale-invariant in phi, so a rescaled level
    // set rejects the same meshes.
    auto pocket_too_deep = [&](int f, double fm) {
      const auto& fc = mesh.facets[f];
      Vec2 m = 0.5 * (mesh.vertices[fc.vertices[0]] + mesh.vertices[fc.vertices[1]]);
      double d = 1e-5 * topo.h;
      double gx = (ls({m.x + d, m.y}) - ls({m.x - d, m.y})) / (2.0 * d);
      double gy = (ls({m.x, m.y + d}) - ls({m.x, m.y - d})) / (2.0 * d);
      return std::fabs(fm) > options.resolution_depth * topo.h * std::hypot(gx, gy);
    };
    int violations = 0, first = -1;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto& tri = mesh.triangles[t];
      bool bad = false;
      bool all_boundary_neg = true, all_boundary_pos = true;
      for (int e = 0; e < 3 && !bad; ++e) {
        double fp = topo.vertex_phi[tri[(e + 1) % 3]];
        double fq = topo.vertex_phi[tri[(e + 2) % 3]];
        double fm = facet_mid[mesh.triangle_facets[t][e]];
        if (fp * fq > 0.0 && fm * fp < 0.0 &&
            pocket_too_deep(mesh.triangle_facets[t][e], fm))
          bad = true;
        all_boundary_neg = all_boundary_neg && fp < 0 && fm < 0;
        all_boundary_pos = all_boundary_pos && fp > 0 && fm > 0;
      }
      if (!bad && (all_boundary_neg || all_boundary_pos)) {
        auto [a, b, c] = mesh.triangle_coords(t);
        double fc = snapped((1.0 / 3.0) * (a + b + c));
        if ((fc < 0) != all_boundary_neg) bad = true;
      }
      if (bad) {
        ++violations;
        if (first < 0) first = t;
      }
    }
    if (violations > 0) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "interface under-resolved on %d element(s) (first: %d) at h=%g; "
                    "refine the mesh",
                    violations, first, topo.h);
      throw DegenerateGeometryError(buf);
    }
  }

  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& fc = mesh.facets[f];
    if (fc.right == kNoElement) continue;
    if (!topo.is_active(fc.left) || !topo.is_active(fc.right)) continue;
    if (topo.is_cut(fc.left) || topo.is_cut(fc.right))
      topo.ghost_facets.push_back(f);
  }

  // A cut element is isolated when no chain of facet-adjacent active
  // elements links it to an interior one; the penalty cannot reach it.
  {
    std::vector<char> reached(mesh.num_triangles(), 0);
    std::vector<int> queue;
    for (int t = 0; t < mesh.num_triangles(); ++t)
      if (topo.classes[t] == ElementClass::Inside) {
        reached[t] = 1;
        queue.push_back(t);
      }
    while (!queue.empty()) {
      int t = queue.back();
      queue.pop_back();
      for (int e = 0; e < 3; ++e) {
        const Facet& fc = mesh.facets[mesh.triangle_facets[t][e]];
        int other = fc.left == t ? fc.right : fc.left;
        if (other != kNoElement && !reached[other] && topo.is_active(other)) {
          reached[other] = 1;
          queue.push_back(other);
        }
      }
    }
    for (int t = 0; t < mesh.num_triangles(); ++t)
      if (topo.is_cut(t) && !reached[t]) topo.isolated_cut_elements.push_back(t);
  }
  return topo;
}

std::vector<QuadPoint> volume_quadrature(const BackgroundMesh& mesh,
                                         const CutTopology& topo, int element,
                                         int degree) {
  switch (topo.classes[element]) {
    case ElementClass::Outside:
      return {};
    case ElementClass::Inside: {
      auto [a, b, c] = mesh.triangle_coords(element);
      return triangle_quadrature(a, b, c, degree);
    }
    case ElementClass::Cut: {
      const CutData& cut = topo.cut_data[topo.cut_index[element]];
      std::vector<QuadPoint> out;
      for (const auto& tri : cut.interior) {
        auto part = triangle_quadrature(tri[0], tri[1], tri[2], degree);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
  }
  return {};
}

std::vector<InterfaceQuadPoint> interface_quadrature(const CutTopology& topo,
                                                     int element, int degree) {
  if (!topo.is_cut(element)) return {};
  const CutData& cut = topo.cut_data[topo.cut_index[element]];
  double len = norm(cut.seg_b - cut.seg_a);
  std::vector<InterfaceQuadPoint> out;
  for (const auto& g : reference_segment_rule(degree)) {
    InterfaceQuadPoint q;
    q.point = cut.seg_a + g.t * (cut.seg_b - cut.seg_a);
    q.weight = g.weight * len;
    q.normal = cut.normal;
    q.neumann = cut.neumann;
    out.push_back(q);
  }
  return out;
}

double interior_measure(const BackgroundMesh& mesh, const CutTopology& topo) {
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (const auto& q : volume_quadrature(mesh, topo, t, 1))
      total += q.weight;
  return total;
}

} // namespace cutfem
