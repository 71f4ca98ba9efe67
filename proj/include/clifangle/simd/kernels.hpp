#pragma once

// Low-level arithmetic kernels behind the multivector and matrix code.
//
// Every kernel has a portable scalar reference implementation. An AVX2 build
// of the same kernels is compiled into its own translation unit and picked at
// runtime when the CPU reports AVX2 and FMA. The product kernel is bit-exact
// across backends (same accumulation order, no fused multiply-add); the
// reductions (dot, sum_squares) differ only by summation order.

#include <cstddef>
#include <optional>
#include <string_view>

namespace clifangle::simd {

enum class Backend { scalar, avx2 };

enum class ProductKind {
  geometric,         // e_i e_j
  outer,             // e_i ^ e_j, zero when the factors share an index
  left_contraction,  // e_i _| e_j, zero unless i is a subset of j
};

struct KernelTable {
  Backend backend;

  // out[i ^ j] += sign(i, j) * a[i] * b[j] over all basis-blade bitmasks
  // i, j < 2^n admitted by `kind`. Accumulates into `out`.
  void (*product)(ProductKind kind, int n, const double* a, const double* b,
                  double* out);

  double (*dot)(const double* x, const double* y, std::size_t len);
  double (*sum_squares)(const double* x, std::size_t len);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t len);
  void (*scale)(double alpha, double* x, std::size_t len);
  // (x, y) <- (c x - s y, s x + c y)
  void (*rotate)(double c, double s, double* x, double* y, std::size_t len);
};

std::string_view to_string(Backend backend);
std::optional<Backend> parse_backend(std::string_view name);

// True when this binary contains the backend and the CPU can run it.
bool available(Backend backend);

// Kernel table for a specific backend; nullptr when unavailable.
const KernelTable* kernels_for(Backend backend);

// The active table. Defaults to the best available backend.
const KernelTable& kernels();

// Switch the active backend. Returns false (and changes nothing) when the
// backend is unavailable.
bool use_backend(Backend backend);

// Reordering sign of the basis-blade product e_i e_j in Cl(n,0): +1 or -1.
inline double reorder_sign(unsigned i, unsigned j) {
  unsigned swaps = 0;
  for (unsigned a = i >> 1; a != 0; a >>= 1) swaps += __builtin_popcount(a & j);
  return (swaps & 1u) ? -1.0 : 1.0;
}

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
}  // namespace detail

}  // namespace clifangle::simd
