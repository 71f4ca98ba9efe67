#pragma once

// Principal angles between subspaces by the classical matrix route:
// orthonormalize both spanning matrices, take the SVD of Q_A^T Q_B, read the
// cosines off the singular values. Independent of the Clifford code path and
// used to cross-check it.

#include <cstddef>
#include <span>
#include <vector>

#include "clifangle/blade.hpp"

namespace clifangle::oracle {

// Dense rows x cols matrix stored column by column.
class ColumnMatrix {
 public:
  ColumnMatrix() = default;
  ColumnMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static ColumnMatrix identity(std::size_t size);
  static ColumnMatrix from_columns(std::span<const RealVector> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }

  std::span<const double> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }
  std::span<double> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }

  std::vector<RealVector> columns() const;
  ColumnMatrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

ColumnMatrix operator*(const ColumnMatrix& lhs, const ColumnMatrix& rhs);

// Orthonormal basis of the column span (modified Gram-Schmidt with a second
// pass). Throws RankDeficient when a column's residual drops below
// tol_rank times the largest column norm.
ColumnMatrix orthonormalize(const ColumnMatrix& m, double tol_rank = kDefaultRankTolerance);

struct SvdResult {
  ColumnMatrix u;
  std::vector<double> singular_values;  // descending, nonnegative
  ColumnMatrix v;
};

inline constexpr int kMaxJacobiSweeps = 30;

// One-sided Jacobi SVD of a small square matrix. Throws NumericalFailure if
// the sweep cap is hit before every column pair is orthogonal.
SvdResult svd_small(const ColumnMatrix& c);

struct PrincipalData {
  std::vector<double> angles;   // ascending
  std::vector<double> cosines;  // descending, in [0, 1]
  std::vector<RealVector> a_vectors;
  std::vector<RealVector> b_vectors;
};

// Throws DimensionMismatch for different n or r, RankDeficient for
// dependent spanning vectors.
PrincipalData principal_angles(const SpanningSet& a, const SpanningSet& b,
                               double tol_rank = kDefaultRankTolerance);

}  // namespace clifangle::oracle
