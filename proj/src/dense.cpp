#include "cutfem/dense.hpp"

#include <cassert>
#include <cmath>

namespace cutfem {

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& s) {
  if (s.rows != s.cols) throw Error("from_sparse: matrix not square");
  DenseMatrix m(s.rows);
  for (int i = 0; i < s.rows; ++i)
    for (int k = s.row_offsets[i]; k < s.row_offsets[i + 1]; ++k)
      m(i, s.col_indices[k]) += s.values[k];
  return m;
}

CholeskyFactor::CholeskyFactor(const DenseMatrix& m) : n_(m.n), l_(m.a) {
  for (int j = 0; j < n_; ++j) {
    double d = l_[static_cast<size_t>(j) * n_ + j];
    for (int k = 0; k < j; ++k) {
      double ljk = l_[static_cast<size_t>(j) * n_ + k];
      d -= ljk * ljk;
    }
    if (!(d > 0.0)) throw Error("cholesky: matrix not positive definite");
    double djj = std::sqrt(d);
    l_[static_cast<size_t>(j) * n_ + j] = djj;
    for (int i = j + 1; i < n_; ++i) {
      double s = l_[static_cast<size_t>(i) * n_ + j];
      for (int k = 0; k < j; ++k)
        s -= l_[static_cast<size_t>(i) * n_ + k] * l_[static_cast<size_t>(j) * n_ + k];
      l_[static_cast<size_t>(i) * n_ + j] = s / djj;
    }
  }
}

void CholeskyFactor::solve(std::span<const double> b, std::span<double> x) const {
  assert(static_cast<int>(b.size()) == n_ && static_cast<int>(x.size()) == n_);
  // forward substitution L y = b
  for (int i = 0; i < n_; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l_[static_cast<size_t>(i) * n_ + k] * x[k];
    x[i] = s / l_[static_cast<size_t>(i) * n_ + i];
  }
  // back substitution L^T x = y
  for (int i = n_ - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n_; ++k) s -= l_[static_cast<size_t>(k) * n_ + i] * x[k];
    x[i] = s / l_[static_cast<size_t>(i) * n_ + i];
  }
}

std::vector<double> CholeskyFactor::solve(const std::vector<double>& b) const {
  std::vector<double> x(b.size());
  solve(b, x);
  return x;
}

} // namespace cutfem
