#include "cutfem/multigrid.hpp"

#include <cassert>
#include <cstdio>

#include "cutfem/dense.hpp"

namespace cutfem {

SparseMatrix prolongation(const P1Space& coarse, const P1Space& fine,
                          const std::vector<VertexParent>& parent_map) {
  TripletBuilder builder(fine.num_dofs(), coarse.num_dofs());
  for (int d = 0; d < fine.num_dofs(); ++d) {
    int v = fine.active_vertices[d];
    const VertexParent& parent = parent_map[v];
    auto coarse_dof = [&](int cv) {
      int cd = coarse.dof_of_vertex[cv];
      if (cd < 0) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "prolongation: fine dof at vertex %d has inactive coarse "
                      "parent %d (nesting violated)",
                      v, cv);
        throw Error(buf);
      }
      return cd;
    };
    if (parent.is_coarse_vertex()) {
      builder.add(d, coarse_dof(parent.a), 1.0);
    } else {
      builder.add(d, coarse_dof(parent.a), 0.5);
      builder.add(d, coarse_dof(parent.b), 0.5);
    }
  }
  return builder.compress();
}

SparseMatrix galerkin_coarse(const SparseMatrix& k_fine, const SparseMatrix& r) {
  if (k_fine.cols != r.rows) throw Error("galerkin_coarse: shape mismatch");
  return multiply(transpose(r), multiply(k_fine, r));
}

namespace {

void gs_pass(const SparseMatrix& a, std::span<double> x, std::span<const double> b,
             const int* dofs, int count, bool reverse) {
  for (int k = 0; k < count; ++k) {
    int i = dofs ? dofs[reverse ? count - 1 - k : k] : (reverse ? count - 1 - k : k);
    double s = b[i];
    double d = 0.0;
    for (int idx = a.row_offsets[i]; idx < a.row_offsets[i + 1]; ++idx) {
      int j = a.col_indices[idx];
      if (j == i)
        d = a.values[idx];
      else
        s -= a.values[idx] * x[j];
    }
    assert(d != 0.0);
    x[i] = s / d;
  }
}

} // namespace

void interface_corrected_gs_smooth(const SparseMatrix& a, std::span<double> x,
                                   std::span<const double> b,
                                   const std::vector<int>& cut_dofs, int sweeps,
                                   SweepDirection direction) {
  const bool reverse = direction == SweepDirection::Backward;
  for (int s = 0; s < sweeps; ++s) {
    if (!reverse) {
      gs_pass(a, x, b, nullptr, a.rows, false);
      gs_pass(a, x, b, cut_dofs.data(), static_cast<int>(cut_dofs.size()), false);
    } else {
      gs_pass(a, x, b, cut_dofs.data(), static_cast<int>(cut_dofs.size()), true);
      gs_pass(a, x, b, nullptr, a.rows, true);
    }
  }
}

struct MultigridPreconditioner::Impl {
  // index 0 is the coarsest level
  std::vector<SparseMatrix> k;
  std::vector<SparseMatrix> r; // r[l] : level l -> level l+1
  std::vector<std::vector<int>> cut_dofs;
  std::unique_ptr<CholeskyFactor> coarse_solver;
  int sweeps = 1;

  void vcycle(int level, std::span<const double> b, std::span<double> x) const {
    if (level == 0) {
      coarse_solver->solve(b, x);
      return;
    }
    const SparseMatrix& a = k[level];
    std::fill(x.begin(), x.end(), 0.0);
    interface_corrected_gs_smooth(a, x, b, cut_dofs[level], sweeps,
                                  SweepDirection::Forward);

    std::vector<double> residual(a.rows);
    a.multiply(x, residual);
    for (int i = 0; i < a.rows; ++i) residual[i] = b[i] - residual[i];

    const SparseMatrix& rl = r[level - 1];
    std::vector<double> coarse_b(rl.cols), coarse_x(rl.cols);
    rl.multiply_transpose(residual, coarse_b);
    vcycle(level - 1, coarse_b, coarse_x);

    std::vector<double> correction(a.rows);
    rl.multiply(coarse_x, correction);
    for (int i = 0; i < a.rows; ++i) x[i] += correction[i];

    interface_corrected_gs_smooth(a, x, b, cut_dofs[level], sweeps,
                                  SweepDirection::Backward);
  }
};

MultigridPreconditioner::MultigridPreconditioner(
    const SparseMatrix& k_fine, std::vector<SparseMatrix> prolongations,
    std::vector<std::vector<int>> cut_dofs, int smooth_sweeps)
    : impl_(std::make_unique<Impl>()) {
  const int levels = static_cast<int>(prolongations.size()) + 1;
  if (static_cast<int>(cut_dofs.size()) != levels)
    throw Error("multigrid: need cut dofs for every level");
  impl_->r = std::move(prolongations);
  impl_->cut_dofs = std::move(cut_dofs);
  impl_->sweeps = smooth_sweeps;
  impl_->k.resize(levels);
  impl_->k[levels - 1] = k_fine;
  for (int l = levels - 1; l > 0; --l) {
    if (impl_->r[l - 1].rows != impl_->k[l].rows)
      throw Error("multigrid: prolongation shape does not match level matrix");
    impl_->k[l - 1] = galerkin_coarse(impl_->k[l], impl_->r[l - 1]);
  }
  impl_->coarse_solver =
      std::make_unique<CholeskyFactor>(DenseMatrix::from_sparse(impl_->k[0]));
}

MultigridPreconditioner::~MultigridPreconditioner() = default;

void MultigridPreconditioner::apply(std::span<const double> r,
                                    std::span<double> z) const {
  impl_->vcycle(num_levels() - 1, r, z);
}

int MultigridPreconditioner::num_levels() const {
  return static_cast<int>(impl_->k.size());
}

const SparseMatrix& MultigridPreconditioner::level_matrix(int level) const {
  return impl_->k.at(level);
}

std::unique_ptr<Preconditioner> make_multigrid(const SparseMatrix& k_fine,
                                               std::vector<SparseMatrix> prolongations,
                                               std::vector<std::vector<int>> cut_dofs,
                                               int smooth_sweeps) {
  return std::make_unique<MultigridPreconditioner>(
      k_fine, std::move(prolongations), std::move(cut_dofs), smooth_sweeps);
}

} // namespace cutfem
