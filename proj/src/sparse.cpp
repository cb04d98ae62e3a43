#include "cutfem/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace cutfem {

double SparseMatrix::at(int i, int j) const {
  for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
    if (col_indices[k] == j) return values[k];
  return 0.0;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  assert(static_cast<int>(x.size()) == cols && static_cast<int>(y.size()) == rows);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      s += values[k] * x[col_indices[k]];
    y[i] = s;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> x,
                                      std::span<double> y) const {
  assert(static_cast<int>(x.size()) == rows && static_cast<int>(y.size()) == cols);
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < rows; ++i)
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      y[col_indices[k]] += values[k] * x[i];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(rows, 0.0);
  for (int i = 0; i < rows; ++i) d[i] = at(i, i);
  return d;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m;
  m.rows = m.cols = n;
  m.row_offsets.resize(n + 1);
  std::iota(m.row_offsets.begin(), m.row_offsets.end(), 0);
  m.col_indices.resize(n);
  std::iota(m.col_indices.begin(), m.col_indices.end(), 0);
  m.values.assign(n, 1.0);
  return m;
}

void TripletBuilder::add(int i, int j, double v) {
  assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
  is_.push_back(i);
  js_.push_back(j);
  vs_.push_back(v);
}

SparseMatrix TripletBuilder::compress() const {
  std::vector<size_t> order(is_.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return is_[a] != is_[b] ? is_[a] < is_[b] : js_[a] < js_[b];
  });

  SparseMatrix m;
  m.rows = rows_;
  m.cols = cols_;
  m.row_offsets.assign(rows_ + 1, 0);
  // merge duplicates in sorted order
  int cur_i = -1, cur_j = -1;
  for (size_t k : order) {
    if (is_[k] == cur_i && js_[k] == cur_j) {
      m.values.back() += vs_[k];
    } else {
      cur_i = is_[k];
      cur_j = js_[k];
      m.col_indices.push_back(cur_j);
      m.values.push_back(vs_[k]);
      m.row_offsets[cur_i + 1] += 1;
    }
  }
  for (int i = 0; i < rows_; ++i) m.row_offsets[i + 1] += m.row_offsets[i];
  return m;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols != b.rows) throw Error("sparse multiply: shape mismatch");
  SparseMatrix c;
  c.rows = a.rows;
  c.cols = b.cols;
  c.row_offsets.assign(a.rows + 1, 0);

  std::vector<double> acc(b.cols, 0.0);
  std::vector<int> stamp(b.cols, -1);
  std::vector<int> touched;
  for (int i = 0; i < a.rows; ++i) {
    touched.clear();
    for (int ka = a.row_offsets[i]; ka < a.row_offsets[i + 1]; ++ka) {
      int j = a.col_indices[ka];
      double av = a.values[ka];
      for (int kb = b.row_offsets[j]; kb < b.row_offsets[j + 1]; ++kb) {
        int col = b.col_indices[kb];
        if (stamp[col] != i) {
          stamp[col] = i;
          acc[col] = 0.0;
          touched.push_back(col);
        }
        acc[col] += av * b.values[kb];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int col : touched) {
      c.col_indices.push_back(col);
      c.values.push_back(acc[col]);
    }
    c.row_offsets[i + 1] = static_cast<int>(c.col_indices.size());
  }
  return c;
}

SparseMatrix transpose(const SparseMatrix& a) {
  SparseMatrix t;
  t.rows = a.cols;
  t.cols = a.rows;
  t.row_offsets.assign(a.cols + 1, 0);
  for (int j : a.col_indices) t.row_offsets[j + 1] += 1;
  for (int i = 0; i < t.rows; ++i) t.row_offsets[i + 1] += t.row_offsets[i];
  t.col_indices.resize(a.nnz());
  t.values.resize(a.nnz());
  std::vector<int> next(t.row_offsets.begin(), t.row_offsets.end() - 1);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      int pos = next[a.col_indices[k]]++;
      t.col_indices[pos] = i;
      t.values[pos] = a.values[k];
    }
  }
  return t;
}

double max_asymmetry(const SparseMatrix& a) {
  double worst = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      worst = std::max(worst, std::fabs(a.values[k] - a.at(a.col_indices[k], i)));
  return worst;
}

} // namespace cutfem
