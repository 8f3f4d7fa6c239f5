#include <cstdlib>
#include <string>

#include "deepselect/error.hpp"
#include "kernel_tables.hpp"

namespace deepselect::kernels {
namespace {

[[maybe_unused]] bool cpu_has_avx2() {
#if defined(DEEPSELECT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const KernelTable* best = avx2_table();
  if (const char* env = std::getenv("DEEPSELECT_SIMD")) {
    const std::string choice(env);
    if (choice == "scalar") return &detail::kScalarTable;
    if (choice == "avx2" && best == nullptr) return &detail::kScalarTable;
  }
  return best != nullptr ? best : &detail::kScalarTable;
}

const KernelTable*& current() {
  static const KernelTable* table = initial_table();
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return detail::kScalarTable; }

const KernelTable* avx2_table() {
#if defined(DEEPSELECT_HAVE_AVX2_KERNELS)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current(); }

void select(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      current() = &detail::kScalarTable;
      return;
    case Isa::avx2:
      if (avx2_table() == nullptr) throw ConfigError("AVX2 kernels are not available on this CPU");
      current() = avx2_table();
      return;
  }
}

}  // namespace deepselect::kernels
