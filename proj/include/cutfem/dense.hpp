#pragma once

#include <span>
#include <vector>

#include "cutfem/sparse.hpp"

namespace cutfem {

struct DenseMatrix {
  int n = 0;
  std::vector<double> a; // row-major n*n

  explicit DenseMatrix(int n = 0) : n(n), a(static_cast<size_t>(n) * n, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

  static DenseMatrix from_sparse(const SparseMatrix& s);
};

// Cholesky factorization of a symmetric positive definite matrix; solve
// reuses the factor. Throws on a non-positive pivot.
class CholeskyFactor {
public:
  explicit CholeskyFactor(const DenseMatrix& m);
  void solve(std::span<const double> b, std::span<double> x) const;
  std::vector<double> solve(const std::vector<double>& b) const;

private:
  int n_;
  std::vector<double> l_; // lower triangle, row-major
};

} // namespace cutfem
