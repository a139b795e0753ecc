/// @file incidence.hpp
/// @brief Dense nonnegative integer matrix of edge multiplicities between
///        two consecutive levels of a Bratteli diagram.

#pragma once

#include "bratteli/types.hpp"

#include <initializer_list>
#include <vector>

namespace bratteli {

/// Entry (v, w) counts edges between vertex w of the lower level and vertex v
/// of the upper level. Rows index the upper level, columns the lower one.
class IncidenceMatrix {
 public:
  IncidenceMatrix() : rows_(0), cols_(0) {}
  IncidenceMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, Int(0)) {
    if (rows <= 0 || cols <= 0) throw Error("IncidenceMatrix: non-positive dimension");
  }
  IncidenceMatrix(std::initializer_list<std::initializer_list<long>> m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Int& at(int v, int w) const { return data_[static_cast<size_t>(v) * cols_ + w]; }
  Int& at(int v, int w) { return data_[static_cast<size_t>(v) * cols_ + w]; }

  bool operator==(const IncidenceMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  bool row_has_positive(int v) const;
  bool col_has_positive(int w) const;

  /// Matrix product: (*this) * rhs. Column count of *this must equal rhs rows.
  IncidenceMatrix multiply(const IncidenceMatrix& rhs) const;

  /// Applies the matrix to a lower-level vector: out_v = sum_w at(v,w) x_w.
  std::vector<Int> apply(const std::vector<Int>& x) const;

  /// Submatrix given sorted 0-based row and column index subsets.
  IncidenceMatrix submatrix(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const;

 private:
  int rows_, cols_;
  std::vector<Int> data_;
};

}  // namespace bratteli
