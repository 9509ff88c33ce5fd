#include "pstokes/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace pstokes {

double SparseMatrix::get(int i, int j) const {
  for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
    if (col_idx[k] == j) return values[k];
  return 0.0;
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_cols)
    throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  std::vector<double> y(n_rows, 0.0);
  for (int i = 0; i < n_rows; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
  return y;
}

std::vector<double> SparseMatrix::multiply_transpose(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_rows)
    throw std::invalid_argument("SparseMatrix::multiply_transpose: size mismatch");
  std::vector<double> y(n_cols, 0.0);
  for (int i = 0; i < n_rows; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) y[col_idx[k]] += values[k] * x[i];
  return y;
}

double SparseMatrix::symmetry_gap() const {
  double gap = 0.0;
  for (int i = 0; i < n_rows; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      gap = std::max(gap, std::abs(values[k] - get(col_idx[k], i)));
  return gap;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void SparseMatrix::write_matrix_market(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
  std::fprintf(f, "%d %d %d\n", n_rows, n_cols, n_nonzeros());
  for (int i = 0; i < n_rows; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      std::fprintf(f, "%d %d %.17g\n", i + 1, col_idx[k] + 1, values[k]);
  std::fclose(f);
}

SparseMatrix TripletBuffer::build() const {
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows_[a] != rows_[b] ? rows_[a] < rows_[b] : cols_[a] < cols_[b];
  });

  SparseMatrix m;
  m.n_rows = n_rows_;
  m.n_cols = n_cols_;
  m.row_ptr.assign(n_rows_ + 1, 0);
  std::size_t k = 0;
  for (int i = 0; i < n_rows_; ++i) {
    m.row_ptr[i] = static_cast<int>(m.col_idx.size());
    while (k < order.size() && rows_[order[k]] == i) {
      const int j = cols_[order[k]];
      double v = 0.0;
      while (k < order.size() && rows_[order[k]] == i && cols_[order[k]] == j)
        v += vals_[order[k++]];
      if (std::abs(v) > 1e-300) {
        m.col_idx.push_back(j);
        m.values.push_back(v);
      }
    }
  }
  m.row_ptr[n_rows_] = static_cast<int>(m.col_idx.size());
  return m;
}

}  // namespace pstokes
