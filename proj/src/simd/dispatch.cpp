#include <atomic>

#include "clifangle/simd/kernels.hpp"

namespace clifangle::simd {

#if !defined(CLIFANGLE_HAVE_AVX2)
namespace detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace detail
#endif

namespace {

bool cpu_has_avx2() {
#if defined(CLIFANGLE_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* best_table() {
  if (available(Backend::avx2)) return detail::avx2_table();
  return &detail::scalar_table();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{best_table()};
  return slot;
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

std::optional<Backend> parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  return std::nullopt;
}

bool available(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2: {
      static const bool ok = detail::avx2_table() != nullptr && cpu_has_avx2();
      return ok;
    }
  }
  return false;
}

const KernelTable* kernels_for(Backend backend) {
  if (!available(backend)) return nullptr;
  return backend == Backend::scalar ? &detail::scalar_table() : detail::avx2_table();
}

const KernelTable& kernels() { return *active_slot().load(std::memory_order_acquire); }

bool use_backend(Backend backend) {
  const KernelTable* table = kernels_for(backend);
  if (table == nullptr) return false;
  active_slot().store(table, std::memory_order_release);
  return true;
}

}  // namespace clifangle::simd
