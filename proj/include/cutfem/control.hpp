#pragma once

#include <optional>

#include "cutfem/assembly.hpp"
#include "cutfem/dense.hpp"
#include "cutfem/multigrid.hpp"
#include "cutfem/solvers.hpp"

namespace cutfem {

// Discrete optimal control problem: minimize
//   1/2 ||y - y_d||^2 + alpha/2 ||u||^2   subject to   K y = M u + d,
// with the control living in the same P1 space as the state.
struct ControlProblem {
  const P1Space* space = nullptr;
  const CutTopology* topo = nullptr;
  AssemblyParams assembly;
  double alpha = 0.1;
  SparseMatrix k;
  SparseMatrix m;
  std::vector<double> d; // load from f and boundary data
  std::vector<double> b; // target term -(y_d, psi)
  ScalarField y_d;

  double cg_tol = 1e-8;
  int cg_max_iterations = 20000;

  int num_dofs() const { return k.rows; }
};

// Linear solver backend for the inner systems: either preconditioned CG or a
// dense Cholesky factorization (used on the coarsest multilevel grid and by
// tests that need machine-accurate solves).
class StateSolver {
public:
  StateSolver(const ControlProblem& problem, const Preconditioner* precond);
  static StateSolver direct(const ControlProblem& problem);

  SolveReport solve(const ControlProblem& problem, std::span<const double> rhs,
                    std::span<double> x) const;

private:
  StateSolver() = default;
  const Preconditioner* precond_ = nullptr;
  std::shared_ptr<CholeskyFactor> factor_;
};

SolveReport solve_state(const ControlProblem& problem, const StateSolver& solver,
                        std::span<const double> u, std::vector<double>& y);
SolveReport solve_adjoint(const ControlProblem& problem, const StateSolver& solver,
                          std::span<const double> y, std::vector<double>& p);

double cost(const ControlProblem& problem, std::span<const double> y,
            std::span<const double> u);

// g = alpha u + p, the L2-Riesz representative of the reduced derivative;
// directional derivatives pair through the mass matrix: dJ(u)[v] = g^T M v.
std::vector<double> reduced_gradient(const ControlProblem& problem,
                                     std::span<const double> u,
                                     std::span<const double> p);

struct OptimizeOptions {
  double tolerance = 1e-6; // relative cost decrease stopping rule
  int max_outer = 500;
  double fixed_step = 0.0; // > 0 disables the exact line search
};

struct OptimalTriple {
  std::vector<double> y, p, u;
  double cost = 0.0;
  int outer_iterations = 0;
  long inner_iterations = 0; // total CG iterations across all solves
  double optimality_residual = 0.0; // ||alpha u + p||_M / ||p||_M
  std::vector<double> cost_history;
};

// Gradient descent with exact line search (the objective is quadratic in u).
// Stops when the relative cost decrease drops below the tolerance, then
// enforces u = -p/alpha on the final iterate.
OptimalTriple optimize(const ControlProblem& problem, const StateSolver& solver,
                       const OptimizeOptions& options = {},
                       const std::vector<double>* u0 = nullptr);

struct MultilevelLevel {
  const ControlProblem* problem = nullptr;
  const SparseMatrix* prolongation = nullptr; // from previous level; null on level 0
};

// Coarsest level solves directly; finer levels run the descent with a
// multigrid-preconditioned inner solver, warm-started from the prolongated
// coarse control.
std::vector<OptimalTriple> multilevel_optimize(
    const std::vector<MultilevelLevel>& levels,
    const std::vector<std::vector<int>>& cut_dofs_per_level,
    const OptimizeOptions& options = {});

} // namespace cutfem
