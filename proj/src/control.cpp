#include "cutfem/control.hpp"

#include <cassert>
#include <cmath>

#include "cutfem/dense.hpp"

namespace cutfem {

namespace {

double dot_product(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double m_inner(const ControlProblem& problem, std::span<const double> a,
               std::span<const double> b) {
  std::vector<double> mb(problem.num_dofs());
  problem.m.multiply(b, mb);
  return dot_product(a, mb);
}

} // namespace

StateSolver::StateSolver(const ControlProblem& problem, const Preconditioner* precond)
    : precond_(precond) {
  (void)problem;
  if (!precond_) throw Error("StateSolver: null preconditioner");
}

StateSolver StateSolver::direct(const ControlProblem& problem) {
  StateSolver s;
  s.factor_ = std::make_shared<CholeskyFactor>(DenseMatrix::from_sparse(problem.k));
  return s;
}

SolveReport StateSolver::solve(const ControlProblem& problem,
                               std::span<const double> rhs,
                               std::span<double> x) const {
  if (factor_) {
    factor_->solve(rhs, x);
    SolveReport report;
    report.converged = true;
    return report;
  }
  return cg_solve(problem.k, rhs, x, *precond_, problem.cg_tol,
                  problem.cg_max_iterations);
}

SolveReport solve_state(const ControlProblem& problem, const StateSolver& solver,
                        std::span<const double> u, std::vector<double>& y) {
  const int n = problem.num_dofs();
  std::vector<double> rhs(n);
  problem.m.multiply(u, rhs);
  for (int i = 0; i < n; ++i) rhs[i] += problem.d[i];
  y.resize(n, 0.0);
  return solver.solve(problem, rhs, y);
}

SolveReport solve_adjoint(const ControlProblem& problem, const StateSolver& solver,
                          std::span<const double> y, std::vector<double>& p) {
  const int n = problem.num_dofs();
  std::vector<double> rhs(n);
  problem.m.multiply(y, rhs);
  for (int i = 0; i < n; ++i) rhs[i] += problem.b[i];
  p.resize(n, 0.0);
  return solver.solve(problem, rhs, p);
}

double cost(const ControlProblem& problem, std::span<const double> y,
            std::span<const double> u) {
  // misfit integrated with the same cut quadrature as the assembly
  const P1Space& space = *problem.space;
  const BackgroundMesh& mesh = *space.mesh;
  double misfit = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (!problem.topo->is_active(t)) continue;
    const auto& tri = mesh.triangles[t];
    P1Element el = P1Element::from(mesh.triangle_coords(t));
    std::array<double, 3> yv;
    for (int i = 0; i < 3; ++i) yv[i] = y[space.dof_of_vertex[tri[i]]];
    for (const auto& q :
         volume_quadrature(mesh, *problem.topo, t, problem.assembly.quad_degree)) {
      auto psi = el.values_at(q.point);
      double e = yv[0] * psi[0] + yv[1] * psi[1] + yv[2] * psi[2] - problem.y_d(q.point);
      misfit += q.weight * e * e;
    }
  }
  return 0.5 * misfit + 0.5 * problem.alpha * m_inner(problem, u, u);
}

std::vector<double> reduced_gradient(const ControlProblem& problem,
                                     std::span<const double> u,
                                     std::span<const double> p) {
  std::vector<double> g(problem.num_dofs());
  for (int i = 0; i < problem.num_dofs(); ++i)
    g[i] = problem.alpha * u[i] + p[i];
  return g;
}

OptimalTriple optimize(const ControlProblem& problem, const StateSolver& solver,
                       const OptimizeOptions& options, const std::vector<double>* u0) {
  const int n = problem.num_dofs();
  OptimalTriple triple;
  triple.u.assign(n, 1.0);
  if (u0) {
    assert(static_cast<int>(u0->size()) == n);
    triple.u = *u0;
  }

  std::vector<double> mg(n), s(n, 0.0);
  double previous_cost = 0.0;

  for (int k = 0; k < options.max_outer; ++k) {
    triple.inner_iterations += solve_state(problem, solver, triple.u, triple.y).iterations;
    triple.inner_iterations += solve_adjoint(problem, solver, triple.y, triple.p).iterations;
    triple.cost = cost(problem, triple.y, triple.u);
    triple.cost_history.push_back(triple.cost);
    triple.outer_iterations = k + 1;

    if (k > 0 && std::fabs(triple.cost - previous_cost) <=
                     options.tolerance * std::fabs(triple.cost))
      break;
    previous_cost = triple.cost;

    std::vector<double> g = reduced_gradient(problem, triple.u, triple.p);
    double step = options.fixed_step;
    if (step <= 0.0) {
      // tau = <g,g>_M / (<Sg,Sg>_M + alpha <g,g>_M), Sg the state response
      problem.m.multiply(g, mg);
      double gg = dot_product(g, mg);
      if (gg <= 0.0) break; // stationary
      triple.inner_iterations += solver.solve(problem, mg, s).iterations;
      double ss = m_inner(problem, s, s);
      step = gg / (ss + problem.alpha * gg);
    }
    for (int i = 0; i < n; ++i) triple.u[i] -= step * g[i];
  }

  // variational discretization: the control is the scaled adjoint, read off
  // the final iterate without another solve so alpha*u + p = 0 holds exactly
  for (int i = 0; i < n; ++i) triple.u[i] = -triple.p[i] / problem.alpha;
  triple.cost = cost(problem, triple.y, triple.u);

  std::vector<double> g = reduced_gradient(problem, triple.u, triple.p);
  double gnorm = std::sqrt(std::max(m_inner(problem, g, g), 0.0));
  double pnorm = std::sqrt(std::max(m_inner(problem, triple.p, triple.p), 0.0));
  triple.optimality_residual = pnorm > 0.0 ? gnorm / pnorm : gnorm;
  return triple;
}

std::vector<OptimalTriple> multilevel_optimize(
    const std::vector<MultilevelLevel>& levels,
    const std::vector<std::vector<int>>& cut_dofs_per_level,
    const OptimizeOptions& options) {
  if (levels.empty()) throw Error("multilevel_optimize: no levels");
  if (cut_dofs_per_level.size() != levels.size())
    throw Error("multilevel_optimize: cut dof list size mismatch");

  std::vector<OptimalTriple> results;
  std::vector<SparseMatrix> prolongations;
  for (size_t l = 0; l < levels.size(); ++l) {
    const ControlProblem& problem = *levels[l].problem;
    if (l == 0) {
      StateSolver direct = StateSolver::direct(problem);
      results.push_back(optimize(problem, direct, options));
      continue;
    }
    prolongations.push_back(*levels[l].prolongation);
    std::vector<std::vector<int>> cut_dofs(cut_dofs_per_level.begin(),
                                           cut_dofs_per_level.begin() + l + 1);
    auto mg = make_multigrid(problem.k, prolongations, cut_dofs);
    StateSolver solver(problem, mg.get());

    std::vector<double> warm(problem.num_dofs());
    levels[l].prolongation->multiply(results.back().u, warm);
    results.push_back(optimize(problem, solver, options, &warm));
  }
  return results;
}

} // namespace cutfem
