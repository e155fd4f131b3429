#pragma once

// Inner-loop arithmetic shared by the embedding, clustering and evaluation code.
// Each kernel has a scalar reference and, where the build and CPU allow, an AVX2/FMA
// variant chosen once at runtime. Setting SCHEMA_BENCH_SIMD=scalar forces the reference path.

#include <span>
#include <string_view>

namespace schemabench::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best ISA this binary and CPU support.
Isa detected_isa() noexcept;
/// ISA currently used by the dispatching entry points.
Isa active_isa() noexcept;
/// Overrides dispatch (tests, benchmarking). Requesting an unsupported ISA falls back to scalar.
void set_active_isa(Isa isa) noexcept;

// Dispatching entry points. Spans must have equal length (checked by callers).
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;
/// Writes the dense n x n Euclidean distance matrix of `n` row-major points of width `dim`.
void pairwise_distances(std::span<const double> points, std::size_t n, std::size_t dim,
                        std::span<double> out) noexcept;

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;
}  // namespace scalar

#if defined(SCHEMABENCH_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;
}  // namespace avx2
#endif

}  // namespace schemabench::kernels
