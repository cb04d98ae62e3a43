#include "cutfem/assembly.hpp"

#include <cassert>
#include <cmath>

namespace cutfem {

namespace {

double interior_part_measure(const BackgroundMesh& mesh, const CutTopology& topo,
                             int t) {
  switch (topo.classes[t]) {
    case ElementClass::Outside:
      return 0.0;
    case ElementClass::Inside: {
      auto [a, b, c] = mesh.triangle_coords(t);
      return triangle_area(a, b, c);
    }
    case ElementClass::Cut: {
      double m = 0.0;
      for (const auto& tri : topo.cut_data[topo.cut_index[t]].interior)
        m += triangle_area(tri[0], tri[1], tri[2]);
      return m;
    }
  }
  return 0.0;
}

} // namespace

SparseMatrix assemble_stiffness(const P1Space& space, const CutTopology& topo,
                                const AssemblyParams& params) {
  const BackgroundMesh& mesh = *space.mesh;
  const double h = topo.h;
  TripletBuilder builder(space.num_dofs(), space.num_dofs());

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (!topo.is_active(t)) continue;
    const auto& tri = mesh.triangles[t];
    P1Element el = P1Element::from(mesh.triangle_coords(t));
    std::array<int, 3> dof;
    for (int i = 0; i < 3; ++i) dof[i] = space.dof_of_vertex[tri[i]];

    double local[3][3] = {};
    double measure = interior_part_measure(mesh, topo, t);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        local[i][j] += measure * dot(el.grad[i], el.grad[j]);

    if (topo.is_cut(t)) {
      std::array<double, 3> dn;
      const CutData& cut = topo.cut_data[topo.cut_index[t]];
      for (int i = 0; i < 3; ++i) dn[i] = dot(cut.normal, el.grad[i]);
      for (const auto& q : interface_quadrature(topo, t, params.quad_degree)) {
        auto psi = el.values_at(q.point);
        for (int i = 0; i < 3; ++i) {
          for (int j = i; j < 3; ++j) {
            if (q.neumann) {
              local[i][j] += q.weight * params.gamma_n * h * dn[i] * dn[j];
            } else {
              local[i][j] += q.weight * (-dn[j] * psi[i] - dn[i] * psi[j] +
                                         params.gamma_d / h * psi[i] * psi[j]);
            }
          }
        }
      }
    }

    for (int i = 0; i < 3; ++i) {
      builder.add(dof[i], dof[i], local[i][i]);
      for (int j = i + 1; j < 3; ++j) {
        builder.add(dof[i], dof[j], local[i][j]);
        builder.add(dof[j], dof[i], local[i][j]);
      }
    }
  }

  // ghost penalty: gamma1 * h * (jump of normal gradient across the facet)^2
  for (int f : topo.ghost_facets) {
    const Facet& fc = mesh.facets[f];
    Vec2 nf = facet_normal(mesh, f);
    Vec2 p0 = mesh.vertices[fc.vertices[0]];
    Vec2 p1 = mesh.vertices[fc.vertices[1]];
    double len = norm(p1 - p0);

    // collect the up-to-four dofs of the two incident elements
    std::array<int, 4> dofs{-1, -1, -1, -1};
    std::array<double, 4> jump{};
    int count = 0;
    auto slot = [&](int vertex) {
      int d = space.dof_of_vertex[vertex];
      for (int k = 0; k < count; ++k)
        if (dofs[k] == d) return k;
      dofs[count] = d;
      return count++;
    };
    for (int side = 0; side < 2; ++side) {
      int t = side == 0 ? fc.left : fc.right;
      P1Element el = P1Element::from(mesh.triangle_coords(t));
      double sign = side == 0 ? 1.0 : -1.0;
      for (int i = 0; i < 3; ++i)
        jump[slot(mesh.triangles[t][i])] += sign * dot(nf, el.grad[i]);
    }
    double scale = params.gamma1 * h * len;
    for (int a = 0; a < count; ++a)
      for (int b = 0; b < count; ++b)
        builder.add(dofs[a], dofs[b], scale * jump[a] * jump[b]);
  }

  return builder.compress();
}

SparseMatrix assemble_mass(const P1Space& space, const CutTopology& topo,
                           const AssemblyParams& params) {
  const BackgroundMesh& mesh = *space.mesh;
  TripletBuilder builder(space.num_dofs(), space.num_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (!topo.is_active(t)) continue;
    const auto& tri = mesh.triangles[t];
    P1Element el = P1Element::from(mesh.triangle_coords(t));
    double local[3][3] = {};
    for (const auto& q : volume_quadrature(mesh, topo, t, params.quad_degree)) {
      auto psi = el.values_at(q.point);
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) local[i][j] += q.weight * psi[i] * psi[j];
    }
    for (int i = 0; i < 3; ++i) {
      int di = space.dof_of_vertex[tri[i]];
      builder.add(di, di, local[i][i]);
      for (int j = i + 1; j < 3; ++j) {
        int dj = space.dof_of_vertex[tri[j]];
        builder.add(di, dj, local[i][j]);
        builder.add(dj, di, local[i][j]);
      }
    }
  }
  return builder.compress();
}

std::vector<double> assemble_load(const P1Space& space, const CutTopology& topo,
                                  const AssemblyParams& params, const ScalarField& f,
                                  const ScalarField& g_d, const ScalarField& g_n) {
  const BackgroundMesh& mesh = *space.mesh;
  const double h = topo.h;
  std::vector<double> rhs(space.num_dofs(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (!topo.is_active(t)) continue;
    const auto& tri = mesh.triangles[t];
    P1Element el = P1Element::from(mesh.triangle_coords(t));
    std::array<int, 3> dof;
    for (int i = 0; i < 3; ++i) dof[i] = space.dof_of_vertex[tri[i]];

    if (f) {
      for (const auto& q : volume_quadrature(mesh, topo, t, params.quad_degree)) {
        double fv = f(q.point);
        auto psi = el.values_at(q.point);
        for (int i = 0; i < 3; ++i) rhs[dof[i]] += q.weight * fv * psi[i];
      }
    }
    if (topo.is_cut(t)) {
      const CutData& cut = topo.cut_data[topo.cut_index[t]];
      std::array<double, 3> dn;
      for (int i = 0; i < 3; ++i) dn[i] = dot(cut.normal, el.grad[i]);
      for (const auto& q : interface_quadrature(topo, t, params.quad_degree)) {
        auto psi = el.values_at(q.point);
        if (q.neumann) {
          if (!g_n) continue;
          double gv = g_n(q.point);
          for (int i = 0; i < 3; ++i)
            rhs[dof[i]] += q.weight * gv * (psi[i] + params.gamma_n * h * dn[i]);
        } else {
          if (!g_d) continue;
          double gv = g_d(q.point);
          for (int i = 0; i < 3; ++i)
            rhs[dof[i]] += q.weight * gv * (params.gamma_d / h * psi[i] - dn[i]);
        }
      }
    }
  }
  return rhs;
}

std::vector<double> assemble_target(const P1Space& space, const CutTopology& topo,
                                    const AssemblyParams& params,
                                    const ScalarField& y_d) {
  const BackgroundMesh& mesh = *space.mesh;
  std::vector<double> rhs(space.num_dofs(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (!topo.is_active(t)) continue;
    const auto& tri = mesh.triangles[t];
    P1Element el = P1Element::from(mesh.triangle_coords(t));
    for (const auto& q : volume_quadrature(mesh, topo, t, params.quad_degree)) {
      double yv = y_d(q.point);
      auto psi = el.values_at(q.point);
      for (int i = 0; i < 3; ++i)
        rhs[space.dof_of_vertex[tri[i]]] -= q.weight * yv * psi[i];
    }
  }
  return rhs;
}

double measure_error(const P1Space& space, const CutTopology& topo,
                     const AssemblyParams& params, std::span<const double> coeffs,
                     const ScalarField& exact, const VectorField& exact_grad,
                     NormKind norm) {
  const BackgroundMesh& mesh = *space.mesh;
  assert(static_cast<int>(coeffs.size()) == space.num_dofs());
  const bool needs_grad = norm != NormKind::L2;
  if (needs_grad && !exact_grad)
    throw Error("measure_error: gradient norms need the exact gradient");

  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (!topo.is_active(t)) continue;
    const auto& tri = mesh.triangles[t];
    P1Element el = P1Element::from(mesh.triangle_coords(t));
    std::array<double, 3> u;
    for (int i = 0; i < 3; ++i) u[i] = coeffs[space.dof_of_vertex[tri[i]]];
    Vec2 grad_h = u[0] * el.grad[0] + u[1] * el.grad[1] + u[2] * el.grad[2];

    for (const auto& q : volume_quadrature(mesh, topo, t, params.quad_degree)) {
      if (norm != NormKind::Star) {
        auto psi = el.values_at(q.point);
        double e = u[0] * psi[0] + u[1] * psi[1] + u[2] * psi[2] - exact(q.point);
        acc += q.weight * e * e;
      }
      if (needs_grad) {
        Vec2 ge = grad_h - exact_grad(q.point);
        acc += q.weight * dot(ge, ge);
      }
    }
    if (norm == NormKind::Star && topo.is_cut(t)) {
      for (const auto& q : interface_quadrature(topo, t, params.quad_degree)) {
        if (q.neumann) {
          Vec2 ge = grad_h - exact_grad(q.point);
          double dn = dot(q.normal, ge);
          acc += q.weight * topo.h * dn * dn;
        } else {
          auto psi = el.values_at(q.point);
          double e = u[0] * psi[0] + u[1] * psi[1] + u[2] * psi[2] - exact(q.point);
          acc += q.weight * params.gamma_d / topo.h * e * e;
        }
      }
    }
  }
  return std::sqrt(acc);
}

std::vector<double> interpolate(const P1Space& space, const ScalarField& f) {
  std::vector<double> coeffs(space.num_dofs());
  for (int d = 0; d < space.num_dofs(); ++d)
    coeffs[d] = f(space.mesh->vertices[space.active_vertices[d]]);
  return coeffs;
}

} // namespace cutfem
