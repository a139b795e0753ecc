#include "bratteli/incidence.hpp"

namespace bratteli {

IncidenceMatrix::IncidenceMatrix(std::initializer_list<std::initializer_list<long>> m) {
  rows_ = static_cast<int>(m.size());
  if (rows_ == 0) throw Error("IncidenceMatrix: empty initializer");
  cols_ = static_cast<int>(m.begin()->size());
  if (cols_ == 0) throw Error("IncidenceMatrix: empty row");
  data_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != cols_) throw Error("IncidenceMatrix: ragged rows");
    for (long e : row) data_.emplace_back(e);
  }
}

bool IncidenceMatrix::row_has_positive(int v) const {
  for (int w = 0; w < cols_; ++w)
    if (at(v, w) > 0) return true;
  return false;
}

bool IncidenceMatrix::col_has_positive(int w) const {
  for (int v = 0; v < rows_; ++v)
    if (at(v, w) > 0) return true;
  return false;
}

IncidenceMatrix IncidenceMatrix::multiply(const IncidenceMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error("IncidenceMatrix::multiply: dimension mismatch");
  IncidenceMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out.at(i, j) += a * rhs.at(k, j);
    }
  return out;
}

std::vector<Int> IncidenceMatrix::apply(const std::vector<Int>& x) const {
  if (static_cast<int>(x.size()) != cols_) throw Error("IncidenceMatrix::apply: size mismatch");
  std::vector<Int> out(static_cast<size_t>(rows_), Int(0));
  for (int v = 0; v < rows_; ++v)
    for (int w = 0; w < cols_; ++w)
      if (at(v, w) != 0) out[v] += at(v, w) * x[w];
  return out;
}

IncidenceMatrix IncidenceMatrix::submatrix(const std::vector<int>& row_idx,
                                           const std::vector<int>& col_idx) const {
  IncidenceMatrix out(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
  for (size_t i = 0; i < row_idx.size(); ++i) {
    if (row_idx[i] < 0 || row_idx[i] >= rows_) throw Error("submatrix: row index out of range");
    for (size_t j = 0; j < col_idx.size(); ++j) {
      if (col_idx[j] < 0 || col_idx[j] >= cols_) throw Error("submatrix: column index out of range");
      out.at(static_cast<int>(i), static_cast<int>(j)) = at(row_idx[i], col_idx[j]);
    }
  }
  return out;
}

}  // namespace bratteli
