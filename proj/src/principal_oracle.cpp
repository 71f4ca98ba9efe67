#include "clifangle/principal_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "clifangle/errors.hpp"
#include "clifangle/simd/kernels.hpp"

namespace clifangle::oracle {
namespace {

constexpr double kJacobiTolerance = 1e-14;

double norm(std::span<const double> v) {
  return std::sqrt(simd::kernels().sum_squares(v.data(), v.size()));
}

// Replaces the columns flagged in `missing` with unit vectors
// orthogonal to every other column.
void complete_basis(ColumnMatrix& q, const std::vector<bool>& missing) {
  const auto& k = simd::kernels();
  const std::size_t rows = q.rows();
  std::size_t candidate = 0;
  for (std::size_t j = 0; j < q.cols(); ++j) {
    if (!missing[j]) continue;
    while (candidate < rows) {
      std::vector<double> w(rows, 0.0);
      w[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t other = 0; other < q.cols(); ++other) {
          if (other == j) continue;
          auto col = q.column(other);
          k.axpy(-k.dot(col.data(), w.data(), rows), col.data(), w.data(), rows);
        }
      const double len = norm(w);
      if (len > 0.5) {
        k.scale(1.0 / len, w.data(), rows);
        std::copy(w.begin(), w.end(), q.column(j).begin());
        break;
      }
    }
  }
}

}  // namespace

ColumnMatrix ColumnMatrix::identity(std::size_t size) {
  ColumnMatrix m(size, size);
  for (std::size_t i = 0; i < size; ++i) m(i, i) = 1.0;
  return m;
}

ColumnMatrix ColumnMatrix::from_columns(std::span<const RealVector> columns) {
  if (columns.empty()) return {};
  ColumnMatrix m(columns.front().size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != m.rows())
      throw Error(ErrorKind::DimensionMismatch, "columns must have equal length");
    std::copy(columns[j].begin(), columns[j].end(), m.column(j).begin());
  }
  return m;
}

std::vector<RealVector> ColumnMatrix::columns() const {
  std::vector<RealVector> out;
  out.reserve(cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    auto c = column(j);
    out.emplace_back(c.begin(), c.end());
  }
  return out;
}

ColumnMatrix ColumnMatrix::transpose() const {
  ColumnMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

ColumnMatrix operator*(const ColumnMatrix& lhs, const ColumnMatrix& rhs) {
  if (lhs.cols() != rhs.rows())
    throw Error(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
  const auto& k = simd::kernels();
  ColumnMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t j = 0; j < rhs.cols(); ++j)
    for (std::size_t l = 0; l < lhs.cols(); ++l)
      k.axpy(rhs(l, j), lhs.column(l).data(), out.column(j).data(), lhs.rows());
  return out;
}

ColumnMatrix orthonormalize(const ColumnMatrix& m, double tol_rank) {
  const auto& k = simd::kernels();
  const std::size_t rows = m.rows();
  double largest = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) largest = std::max(largest, norm(m.column(j)));

  ColumnMatrix q = m;
  for (std::size_t j = 0; j < q.cols(); ++j) {
    auto w = q.column(j);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < j; ++p) {
        auto qp = q.column(p);
        k.axpy(-k.dot(qp.data(), w.data(), rows), qp.data(), w.data(), rows);
      }
    const double residual = norm(w);
    if (largest == 0.0 || residual < tol_rank * largest)
      throw Error(ErrorKind::RankDeficient,
                  "column " + std::to_string(j + 1) + " is linearly dependent on the previous ones");
    k.scale(1.0 / residual, w.data(), rows);
  }
  return q;
}

SvdResult svd_small(const ColumnMatrix& c) {
  const auto& k = simd::kernels();
  const std::size_t rows = c.rows();
  const std::size_t cols = c.cols();
  ColumnMatrix w = c;
  ColumnMatrix v = ColumnMatrix::identity(cols);

  bool converged = cols < 2;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        auto wp = w.column(p);
        auto wq = w.column(q);
        const double alpha = k.sum_squares(wp.data(), rows);
        const double beta = k.sum_squares(wq.data(), rows);
        const double gamma = k.dot(wp.data(), wq.data(), rows);
        if (std::abs(gamma) <= kJacobiTolerance * std::sqrt(alpha * beta)) continue;
        converged = false;
        // Rotation that zeroes the (p, q) entry of W^T W.
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double cs = 1.0 / std::hypot(1.0, t);
        const double sn = cs * t;
        k.rotate(cs, sn, wp.data(), wq.data(), rows);
        k.rotate(cs, sn, v.column(p).data(), v.column(q).data(), cols);
      }
    }
  }
  if (!converged)
    throw Error(ErrorKind::NumericalFailure, "Jacobi SVD did not converge within " +
                                                 std::to_string(kMaxJacobiSweeps) + " sweeps");

  std::vector<double> sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) sigma[j] = norm(w.column(j));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SvdResult out{ColumnMatrix(rows, cols), {}, ColumnMatrix(cols, cols)};
  std::vector<bool> missing(cols, false);
  const double scale = sigma.empty() ? 0.0 : sigma[order.front()];
  for (std::size_t dst = 0; dst < cols; ++dst) {
    const std::size_t src = order[dst];
    out.singular_values.push_back(sigma[src]);
    std::copy(v.column(src).begin(), v.column(src).end(), out.v.column(dst).begin());
    if (sigma[src] > 1e-300 && sigma[src] > 1e-15 * scale) {
      auto u = out.u.column(dst);
      std::copy(w.column(src).begin(), w.column(src).end(), u.begin());
      k.scale(1.0 / sigma[src], u.data(), rows);
    } else {
      missing[dst] = true;
    }
  }
  complete_basis(out.u, missing);
  return out;
}

PrincipalData principal_angles(const SpanningSet& a, const SpanningSet& b, double tol_rank) {
  if (a.n != b.n)
    throw Error(ErrorKind::DimensionMismatch, "subspaces live in different ambient dimensions");
  if (a.rank() != b.rank())
    throw Error(ErrorKind::DimensionMismatch, "subspaces have different dimensions");
  validate(a);
  validate(b);

  const ColumnMatrix qa = orthonormalize(ColumnMatrix::from_columns(a.vectors), tol_rank);
  const ColumnMatrix qb = orthonormalize(ColumnMatrix::from_columns(b.vectors), tol_rank);
  const SvdResult svd = svd_small(qa.transpose() * qb);

  PrincipalData out;
  for (double s : svd.singular_values) {
    const double c = std::clamp(s, 0.0, 1.0);
    out.cosines.push_back(c);
    out.angles.push_back(std::acos(c));
  }
  out.a_vectors = (qa * svd.u).columns();
  out.b_vectors = (qb * svd.v).columns();
  return out;
}

}  // namespace clifangle::oracle
