#include <vector>

#include "clifangle/simd/kernels.hpp"

namespace clifangle::simd {
namespace {

bool admitted(ProductKind kind, unsigned i, unsigned j) {
  switch (kind) {
    case ProductKind::geometric:
      return true;
    case ProductKind::outer:
      return (i & j) == 0;
    case ProductKind::left_contraction:
      return (i & ~j) == 0;
  }
  return false;
}

void product(ProductKind kind, int n, const double* a, const double* b,
             double* out) {
  const unsigned size = 1u << n;
  // Zero coefficients contribute nothing; skipping them makes blade and
  // vector products cost O(nonzeros) instead of O(4^n).
  std::vector<unsigned> support;
  for (unsigned j = 0; j < size; ++j)
    if (b[j] != 0.0) support.push_back(j);
  for (unsigned i = 0; i < size; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (unsigned j : support) {
      if (!admitted(kind, i, j)) continue;
      out[i ^ j] += reorder_sign(i, j) * (ai * b[j]);
    }
  }
}

double dot(const double* x, const double* y, std::size_t len) {
  double acc = 0.0;
  for (std::size_t k = 0; k < len; ++k) acc += x[k] * y[k];
  return acc;
}

double sum_squares(const double* x, std::size_t len) { return dot(x, x, len); }

void axpy(double alpha, const double* x, double* y, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) y[k] += alpha * x[k];
}

void scale(double alpha, double* x, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) x[k] *= alpha;
}

void rotate(double c, double s, double* x, double* y, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) {
    const double xk = x[k];
    const double yk = y[k];
    x[k] = c * xk - s * yk;
    y[k] = s * xk + c * yk;
  }
}

}  // namespace

namespace detail {
const KernelTable& scalar_table() {
  static const KernelTable table{Backend::scalar, &product,    &dot,  &sum_squares,
                                 &axpy,           &scale,      &rotate};
  return table;
}
}  // namespace detail

}  // namespace clifangle::simd
