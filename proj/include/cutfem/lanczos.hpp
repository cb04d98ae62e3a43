#pragma once

#include <cstdint>

#include "cutfem/solvers.hpp"
#include "cutfem/sparse.hpp"

namespace cutfem {

struct ConditionEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  int steps = 0;
  bool stagnated = false; // extreme Ritz values moved < 0.1% over 20 steps
};

// Spectral condition number of P^-1 A for SPD A and P. Lanczos runs on the
// preconditioned operator, orthogonalizing in the A-inner product (so only
// P^-1 and A applications are needed); kappa is the ratio of the extreme Ritz
// values of the resulting tridiagonal matrix. Breakdowns restart from a fresh
// seeded random vector.
ConditionEstimate estimate_condition(const SparseMatrix& a,
                                     const Preconditioner& precond, int steps = 200,
                                     std::uint64_t seed = 0x9e3779b97f4a7c15ull);

} // namespace cutfem
