#pragma once

#include <memory>
#include <vector>

#include "cutfem/mesh.hpp"
#include "cutfem/p1_space.hpp"
#include "cutfem/solvers.hpp"
#include "cutfem/sparse.hpp"

namespace cutfem {

// Rows: fine dofs, columns: coarse dofs. A surviving coarse vertex keeps its
// value, an edge midpoint averages its two endpoints. Every fine active dof
// must have coarse-active parents; a violation of that nesting property is a
// structural error, not something to patch.
SparseMatrix prolongation(const P1Space& coarse, const P1Space& fine,
                          const std::vector<VertexParent>& parent_map);

// R^T K R
SparseMatrix galerkin_coarse(const SparseMatrix& k_fine, const SparseMatrix& r);

enum class SweepDirection { Forward, Backward };

// Gauss-Seidel with an extra pass over the dofs of cut elements. Forward runs
// (full sweep, cut sweep) per round; Backward mirrors it (cut sweep, full
// sweep, both in reverse order) so pre/post smoothing is symmetric.
void interface_corrected_gs_smooth(const SparseMatrix& a, std::span<double> x,
                                   std::span<const double> b,
                                   const std::vector<int>& cut_dofs, int sweeps,
                                   SweepDirection direction = SweepDirection::Forward);

// One V-cycle per application, smoothing as above, dense direct solve on the
// coarsest level. Coarse matrices are the Galerkin projections of the fine
// one. prolongations[l] maps level l to level l+1; cut_dofs has one entry per
// level, coarsest first.
class MultigridPreconditioner final : public Preconditioner {
public:
  MultigridPreconditioner(const SparseMatrix& k_fine,
                          std::vector<SparseMatrix> prolongations,
                          std::vector<std::vector<int>> cut_dofs, int smooth_sweeps = 1);
  ~MultigridPreconditioner() override;

  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "multigrid"; }

  int num_levels() const;
  const SparseMatrix& level_matrix(int level) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::unique_ptr<Preconditioner> make_multigrid(const SparseMatrix& k_fine,
                                               std::vector<SparseMatrix> prolongations,
                                               std::vector<std::vector<int>> cut_dofs,
                                               int smooth_sweeps = 1);

} // namespace cutfem
