#pragma once

#include <span>
#include <vector>

#include "cutfem/geometry.hpp"

namespace cutfem {

// Compressed sparse rows; column indices ascending within each row.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets; // size rows+1
  std::vector<int> col_indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(values.size()); }
  double at(int i, int j) const; // 0 if not stored

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;

  static SparseMatrix identity(int n);
};

// Accumulates (i,j,v) triplets; duplicates are summed on compress.
class TripletBuilder {
public:
  TripletBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}
  void add(int i, int j, double v);
  SparseMatrix compress() const;

private:
  int rows_, cols_;
  std::vector<int> is_, js_;
  std::vector<double> vs_;
};

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix transpose(const SparseMatrix& a);

double max_asymmetry(const SparseMatrix& a);

} // namespace cutfem
