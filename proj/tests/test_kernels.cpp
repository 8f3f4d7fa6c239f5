#include <doctest.h>

#include <cmath>
#include <vector>

#include "deepselect/fitness.hpp"
#include "deepselect/kernels.hpp"
#include "support.hpp"

using namespace deepselect;
using namespace deepselect::testing;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

double scale_of(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i]) + a[i] * a[i] + b[i] * b[i];
  return std::max(1.0, s);
}

struct IsaGuard {
  const kernels::KernelTable& saved = kernels::active();
  ~IsaGuard() { kernels::select(saved.isa); }
};

}  // namespace

TEST_CASE("scalar table is always available and selectable") {
  IsaGuard guard;
  kernels::select(kernels::Isa::scalar);
  CHECK(kernels::active().isa == kernels::Isa::scalar);
  CHECK(kernels::active().name == kernels::scalar_table().name);
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, 5, 6};
  CHECK(kernels::dot(a.data(), b.data(), 3) == 32.0);
  CHECK(kernels::squared_distance(a.data(), b.data(), 3) == 27.0);
  CHECK(kernels::sum(a.data(), 3) == 6.0);
  std::vector<double> y = b;
  kernels::axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{6, 9, 12});
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const kernels::KernelTable* avx2 = kernels::avx2_table();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this CPU; equivalence test skipped");
    return;
  }
  const kernels::KernelTable& scalar = kernels::scalar_table();
  Rng rng(11);
  for (std::size_t n = 0; n <= 67; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_vector(rng, n);
      const auto b = random_vector(rng, n);
      const double scale = scale_of(a, b);
      CHECK(std::abs(avx2->dot(a.data(), b.data(), n) - scalar.dot(a.data(), b.data(), n)) <= 1e-14 * scale);
      CHECK(std::abs(avx2->squared_distance(a.data(), b.data(), n) -
                     scalar.squared_distance(a.data(), b.data(), n)) <= 1e-14 * scale);
      CHECK(std::abs(avx2->sum(a.data(), n) - scalar.sum(a.data(), n)) <= 1e-14 * scale);
      auto y1 = b;
      auto y2 = b;
      const double alpha = rng.normal();
      avx2->axpy(alpha, a.data(), y1.data(), n);
      scalar.axpy(alpha, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (1.0 + std::abs(y2[i])));
    }
  }
}

TEST_CASE("AVX2 kernels handle unaligned views") {
  const kernels::KernelTable* avx2 = kernels::avx2_table();
  if (avx2 == nullptr) return;
  Rng rng(5);
  const auto a = random_vector(rng, 80);
  const auto b = random_vector(rng, 80);
  for (std::size_t offset = 0; offset < 4; ++offset) {
    const std::size_t n = 80 - offset - 3;
    const double expected = kernels::scalar_table().dot(a.data() + offset, b.data() + offset + 1, n);
    CHECK(avx2->dot(a.data() + offset, b.data() + offset + 1, n) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("log GD is ISA-independent within rounding") {
  if (kernels::avx2_table() == nullptr) return;
  IsaGuard guard;
  Rng rng(3);
  const auto features = random_features(rng, 200, 24);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng.uniform_index(40);
    const auto subset = rng.sample_without_replacement(200, k);
    kernels::select(kernels::Isa::scalar);
    const double scalar = log_geometric_diversity(features, subset);
    kernels::select(kernels::Isa::avx2);
    const double simd = log_geometric_diversity(features, subset);
    CHECK(close_relative(simd, scalar, 1e-9));
  }
}
