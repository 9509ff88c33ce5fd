#pragma once

#include <string>
#include <vector>

namespace pstokes {

/// Row-compressed sparse matrix. Column indices are strictly increasing
/// within each row; entries with magnitude <= 1e-300 are dropped at build.
struct SparseMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> row_ptr;  // size n_rows + 1
  std::vector<int> col_idx;
  std::vector<double> values;

  int n_nonzeros() const { return static_cast<int>(values.size()); }
  double get(int i, int j) const;

  std::vector<double> multiply(const std::vector<double>& x) const;
  std::vector<double> multiply_transpose(const std::vector<double>& x) const;

  /// max_ij |A_ij - A_ji| over the stored pattern.
  double symmetry_gap() const;
  double max_abs() const;

  void write_matrix_market(const std::string& path) const;
};

/// Order-independent triplet accumulation; duplicates are summed.
class TripletBuffer {
 public:
  TripletBuffer(int n_rows, int n_cols) : n_rows_(n_rows), n_cols_(n_cols) {}
  void add(int i, int j, double v) {
    rows_.push_back(i);
    cols_.push_back(j);
    vals_.push_back(v);
  }
  SparseMatrix build() const;

 private:
  int n_rows_, n_cols_;
  std::vector<int> rows_, cols_;
  std::vector<double> vals_;
};

}  // namespace pstokes
