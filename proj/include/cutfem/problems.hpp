#pragma once

#include <memory>

#include "cutfem/control.hpp"
#include "cutfem/level_set.hpp"

namespace cutfem {

// Data entering the control problem; null fields mean zero.
struct CaseData {
  ScalarField f;
  ScalarField g_d;
  ScalarField g_n;
  ScalarField y_d;
};

struct ExactTriple {
  ScalarField y, p, u;
  VectorField grad_y, grad_p, grad_u;
};

// Manufactured optimum on the unit circle inside [-1.5,1.5]^2:
//   y = sin(pi x1 / 2) sin(pi x2 / 2),  u = (|x|^2 - 1) sin(pi x1 / 2),
//   p = -alpha u, with f and y_d chosen so the optimality system holds.
ExactTriple circle_benchmark_exact(double alpha);
CaseData circle_benchmark_data(double alpha);
BoundingBox circle_benchmark_box();

// Hold-all box for the gasket geometry.
BoundingBox gasket_box();

// Simple data for runs without a manufactured solution:
// y_d = 1, f = 0, homogeneous boundary data.
CaseData constant_target_data();

// Owns the geometry, space and assembled operators for one mesh level. Not
// movable: problem stores pointers into topo and space.
struct ProblemInstance {
  const BackgroundMesh* mesh = nullptr;
  CutTopology topo;
  P1Space space;
  ControlProblem problem;

  ProblemInstance() = default;
  ProblemInstance(const ProblemInstance&) = delete;
  ProblemInstance& operator=(const ProblemInstance&) = delete;
};

std::unique_ptr<ProblemInstance> make_instance(
    const BackgroundMesh& mesh, const LevelSetSpec& ls,
    const AssemblyParams& params, double alpha, const CaseData& data,
    const ClassifyOptions& copts = {});

// Nested instances plus the transfer operators the multigrid preconditioner
// needs. prolongations[l] maps the level-l space into level l+1.
struct InstanceHierarchy {
  MeshHierarchy meshes;
  std::vector<std::unique_ptr<ProblemInstance>> instances;
  std::vector<SparseMatrix> prolongations;
  std::vector<std::vector<int>> cut_dofs;

  int num_levels() const { return static_cast<int>(instances.size()); }
};

// with_transfer=false skips the prolongations (they require nested active
// sets, which an interface grazing the grid can break between levels).
InstanceHierarchy make_hierarchy(const BoundingBox& box, int n0, int levels,
                                 const LevelSetSpec& ls,
                                 const AssemblyParams& params, double alpha,
                                 const CaseData& data,
                                 const ClassifyOptions& copts = {},
                                 bool with_transfer = true);

}  // namespace cutfem
