#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "schemabench/kernels/kernels.hpp"

namespace schemabench::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(SCHEMABENCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("SCHEMA_BENCH_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Isa::Scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

Isa detected_isa() noexcept {
  static const Isa isa = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) noexcept {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
  active().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
#if defined(SCHEMABENCH_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::dot(a, b);
#endif
  return scalar::dot(a, b);
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
#if defined(SCHEMABENCH_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::squared_distance(a, b);
#endif
  return scalar::squared_distance(a, b);
}

void pairwise_distances(std::span<const double> points, std::size_t n, std::size_t dim,
                        std::span<double> out) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    out[i * n + i] = 0.0;
    auto pi = points.subspan(i * dim, dim);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::sqrt(squared_distance(pi, points.subspan(j * dim, dim)));
      out[i * n + j] = d;
      out[j * n + i] = d;
    }
  }
}

}  // namespace schemabench::kernels
