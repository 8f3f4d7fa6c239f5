#pragma once

// Dense double-precision inner loops used by the fitness and clustering code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The active table is chosen once at startup from CPUID;
// DEEPSELECT_SIMD=scalar|avx2|auto overrides the choice. SIMD variants sum in
// a different order than the scalar loop, so results agree to rounding only.

#include <cstddef>
#include <string_view>

namespace deepselect::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the binary was built without AVX2 kernels or the CPU lacks
// AVX2/FMA.
const KernelTable* avx2_table();

// The table all library code calls through.
const KernelTable& active();

// Switches the active table. Throws ConfigError if the requested ISA is not
// available on this machine. Not thread-safe; call before spawning workers.
void select(Isa isa);

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline double squared_distance(const double* a, const double* b, std::size_t n) {
  return active().squared_distance(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline double sum(const double* a, std::size_t n) { return active().sum(a, n); }

}  // namespace deepselect::kernels
