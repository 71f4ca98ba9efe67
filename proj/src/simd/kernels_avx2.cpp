// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has confirmed CPU support.

#include <immintrin.h>

#include <vector>

#include "clifangle/simd/kernels.hpp"

namespace clifangle::simd {
namespace {

// Bit b of the result is the parity of the number of set bits of i above b.
// The reordering sign of e_i e_j is then (-1)^popcount(mask & j).
unsigned sign_mask(unsigned i, int n) {
  unsigned mask = 0;
  unsigned parity = 0;
  for (int b = n - 1; b >= 0; --b) {
    if (parity) mask |= 1u << b;
    parity ^= (i >> b) & 1u;
  }
  return mask;
}

bool lane_admitted(ProductKind kind, unsigned low_i, unsigned lane) {
  switch (kind) {
    case ProductKind::geometric:
      return true;
    case ProductKind::outer:
      return (low_i & lane) == 0;
    case ProductKind::left_contraction:
      return (low_i & ~lane & 3u) == 0;
  }
  return false;
}

bool block_admitted(ProductKind kind, unsigned high_i, unsigned j0) {
  switch (kind) {
    case ProductKind::geometric:
      return true;
    case ProductKind::outer:
      return (high_i & j0) == 0;
    case ProductKind::left_contraction:
      return (high_i & ~j0) == 0;
  }
  return false;
}

// result[m] = v[m ^ sel]
__m256d xor_permute(__m256d v, unsigned sel) {
  switch (sel) {
    case 1:
      return _mm256_permute_pd(v, 0b0101);
    case 2:
      return _mm256_permute4x64_pd(v, _MM_SHUFFLE(1, 0, 3, 2));
    case 3:
      return _mm256_permute4x64_pd(v, _MM_SHUFFLE(0, 1, 2, 3));
    default:
      return v;
  }
}

void product(ProductKind kind, int n, const double* a, const double* b,
             double* out) {
  if (n < 2) {
    detail::scalar_table().product(kind, n, a, b, out);
    return;
  }
  const unsigned size = 1u << n;
  std::vector<unsigned> blocks;
  for (unsigned j0 = 0; j0 < size; j0 += 4)
    if (b[j0] != 0.0 || b[j0 + 1] != 0.0 || b[j0 + 2] != 0.0 || b[j0 + 3] != 0.0)
      blocks.push_back(j0);
  for (unsigned i = 0; i < size; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const unsigned mask = sign_mask(i, n);
    const unsigned low_i = i & 3u;
    const unsigned high_i = i & ~3u;

    alignas(32) double lane_factor[4];
    for (unsigned l = 0; l < 4; ++l) {
      const double sign = (__builtin_popcount(mask & l) & 1) ? -1.0 : 1.0;
      lane_factor[l] = lane_admitted(kind, low_i, l) ? sign : 0.0;
    }
    const __m256d factor = _mm256_load_pd(lane_factor);

    for (unsigned j0 : blocks) {
      if (!block_admitted(kind, high_i, j0)) continue;
      const double alpha = (__builtin_popcount(mask & j0) & 1) ? -ai : ai;
      __m256d v = _mm256_mul_pd(_mm256_loadu_pd(b + j0), factor);
      v = _mm256_mul_pd(v, _mm256_set1_pd(alpha));
      v = xor_permute(v, low_i);
      double* dst = out + (high_i ^ j0);
      _mm256_storeu_pd(dst, _mm256_add_pd(_mm256_loadu_pd(dst), v));
    }
  }
}

double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot(const double* x, const double* y, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= len; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4),
                           acc1);
  }
  for (; k + 4 <= len; k += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; k < len; ++k) acc += x[k] * y[k];
  return acc;
}

double sum_squares(const double* x, std::size_t len) { return dot(x, x, len); }

void axpy(double alpha, const double* x, double* y, std::size_t len) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + k));
    _mm256_storeu_pd(y + k, _mm256_add_pd(_mm256_loadu_pd(y + k), prod));
  }
  for (; k < len; ++k) y[k] += alpha * x[k];
}

void scale(double alpha, double* x, std::size_t len) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4)
    _mm256_storeu_pd(x + k, _mm256_mul_pd(va, _mm256_loadu_pd(x + k)));
  for (; k < len; ++k) x[k] *= alpha;
}

void rotate(double c, double s, double* x, double* y, std::size_t len) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    const __m256d xk = _mm256_loadu_pd(x + k);
    const __m256d yk = _mm256_loadu_pd(y + k);
    _mm256_storeu_pd(x + k, _mm256_sub_pd(_mm256_mul_pd(vc, xk), _mm256_mul_pd(vs, yk)));
    _mm256_storeu_pd(y + k, _mm256_add_pd(_mm256_mul_pd(vs, xk), _mm256_mul_pd(vc, yk)));
  }
  for (; k < len; ++k) {
    const double xk = x[k];
    const double yk = y[k];
    x[k] = c * xk - s * yk;
    y[k] = s * xk + c * yk;
  }
}

}  // namespace

namespace detail {
const KernelTable* avx2_table() {
  static const KernelTable table{Backend::avx2, &product, &dot,   &sum_squares,
                                 &axpy,         &scale,   &rotate};
  return &table;
}
}  // namespace detail

}  // namespace clifangle::simd
