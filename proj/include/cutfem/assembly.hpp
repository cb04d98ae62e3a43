#pragma once

#include <functional>

#include "cutfem/cut_topology.hpp"
#include "cutfem/p1_space.hpp"
#include "cutfem/sparse.hpp"

namespace cutfem {

using ScalarField = std::function<double(Vec2)>;
using VectorField = std::function<Vec2(Vec2)>;

struct AssemblyParams {
  double gamma_d = 10.0; // Dirichlet penalty, scaled by 1/h
  double gamma1 = 0.1;   // ghost penalty, scaled by h
  double gamma_n = 0.0;  // Neumann penalty, scaled by h
  int quad_degree = 4;
};

// Stiffness: interior gradient term, symmetric Nitsche terms on Dirichlet
// segments, penalty on Neumann segments, and the ghost-penalty jump term on
// facets touching cut elements. Symmetric by construction.
SparseMatrix assemble_stiffness(const P1Space& space, const CutTopology& topo,
                                const AssemblyParams& params);

// L2 product over the interior part of the active elements.
SparseMatrix assemble_mass(const P1Space& space, const CutTopology& topo,
                           const AssemblyParams& params);

// Volume source plus boundary data terms consistent with the stiffness form.
// Null g_d / g_n are treated as zero data.
std::vector<double> assemble_load(const P1Space& space, const CutTopology& topo,
                                  const AssemblyParams& params, const ScalarField& f,
                                  const ScalarField& g_d, const ScalarField& g_n);

// Right-hand side carrying the tracking target: b_i = -(y_d, psi_i).
std::vector<double> assemble_target(const P1Space& space, const CutTopology& topo,
                                    const AssemblyParams& params,
                                    const ScalarField& y_d);

enum class NormKind { L2, H1, Star };

// Error of the coefficient vector against an exact field, integrated over the
// interior {phi_h < 0} only. H1 is the full norm; Star adds the boundary
// terms gamma_d/h |e|^2 on Dirichlet and h |n.grad e|^2 on Neumann segments.
double measure_error(const P1Space& space, const CutTopology& topo,
                     const AssemblyParams& params, std::span<const double> coeffs,
                     const ScalarField& exact, const VectorField& exact_grad,
                     NormKind norm);

// Nodal interpolation of a smooth field into the active P1 space.
std::vector<double> interpolate(const P1Space& space, const ScalarField& f);

} // namespace cutfem
