#pragma once

#include <functional>
#include <memory>
#include <string>

#include "cutfem/sparse.hpp"

namespace cutfem {

struct SolveReport {
  int iterations = 0;
  double residual = 0.0; // final relative residual
  bool converged = false;
};

class Preconditioner {
public:
  virtual ~Preconditioner() = default;
  virtual void apply(std::span<const double> r, std::span<double> z) const = 0;
  virtual std::string name() const = 0;
};

std::unique_ptr<Preconditioner> make_identity();
std::unique_ptr<Preconditioner> make_jacobi(const SparseMatrix& a);
// (D+L) D^-1 (D+L^T) with L the strict lower triangle of a.
std::unique_ptr<Preconditioner> make_sgs(const SparseMatrix& a);

using IterationObserver = std::function<void(int, std::span<const double>)>;

// Preconditioned conjugate gradients on an SPD matrix. x holds the initial
// guess on entry. Convergence is ||b - Ax|| <= tol * ||b||; hitting the
// iteration cap is flagged, not fatal. NaN or an indefinite direction aborts.
SolveReport cg_solve(const SparseMatrix& a, std::span<const double> b,
                     std::span<double> x, const Preconditioner& precond,
                     double tol = 1e-8, int max_iterations = 10000,
                     const IterationObserver& observer = {});

} // namespace cutfem
