#include <doctest.h>

#include <cmath>
#include <vector>

#include "schemabench/kernels/kernels.hpp"
#include "schemabench/util/rng.hpp"

using namespace schemabench;

namespace {

std::vector<double> random_vec(util::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform01() * 4.0 - 2.0;
  return v;
}

struct IsaGuard {
  kernels::Isa saved = kernels::active_isa();
  ~IsaGuard() { kernels::set_active_isa(saved); }
};

}  // namespace

TEST_CASE("scalar kernels on small inputs") {
  std::vector<double> a{1, 2, 3}, b{4, -5, 6};
  CHECK(kernels::scalar::dot(a, b) == doctest::Approx(12.0));
  CHECK(kernels::scalar::squared_distance(a, b) == doctest::Approx(9.0 + 49.0 + 9.0));
  CHECK(kernels::scalar::dot({}, {}) == 0.0);
}

TEST_CASE("dispatch matches the scalar reference for every length") {
  IsaGuard guard;
  util::Rng rng(7);
  for (kernels::Isa isa : {kernels::Isa::Scalar, kernels::detected_isa()}) {
    kernels::set_active_isa(isa);
    for (std::size_t n = 0; n < 70; ++n) {
      auto a = random_vec(rng, n), b = random_vec(rng, n);
      double ref_dot = kernels::scalar::dot(a, b);
      double ref_sq = kernels::scalar::squared_distance(a, b);
      CHECK(std::abs(kernels::dot(a, b) - ref_dot) <= 1e-12 * (1.0 + std::abs(ref_dot)));
      CHECK(std::abs(kernels::squared_distance(a, b) - ref_sq) <= 1e-12 * (1.0 + ref_sq));
    }
  }
}

#if defined(SCHEMABENCH_HAVE_AVX2)
TEST_CASE("avx2 variants agree with scalar when the CPU supports them") {
  if (kernels::detected_isa() != kernels::Isa::Avx2) return;
  util::Rng rng(11);
  for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 15u, 16u, 17u, 256u, 1537u}) {
    auto a = random_vec(rng, n), b = random_vec(rng, n);
    CHECK(kernels::avx2::dot(a, b) == doctest::Approx(kernels::scalar::dot(a, b)).epsilon(1e-12));
    CHECK(kernels::avx2::squared_distance(a, b) ==
          doctest::Approx(kernels::scalar::squared_distance(a, b)).epsilon(1e-12));
  }
}
#endif

TEST_CASE("pairwise distances are symmetric with a zero diagonal") {
  IsaGuard guard;
  util::Rng rng(3);
  const std::size_t n = 9, dim = 13;
  auto pts = random_vec(rng, n * dim);
  std::vector<double> out(n * n, -1.0);
  for (kernels::Isa isa : {kernels::Isa::Scalar, kernels::detected_isa()}) {
    kernels::set_active_isa(isa);
    kernels::pairwise_distances(pts, n, dim, out);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(out[i * n + i] == 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(out[i * n + j] == out[j * n + i]);
        std::span<const double> a(pts.data() + i * dim, dim), b(pts.data() + j * dim, dim);
        CHECK(out[i * n + j] == doctest::Approx(std::sqrt(kernels::scalar::squared_distance(a, b))));
      }
    }
  }
}

TEST_CASE("requesting scalar always sticks") {
  IsaGuard guard;
  kernels::set_active_isa(kernels::Isa::Scalar);
  CHECK(kernels::active_isa() == kernels::Isa::Scalar);
  CHECK(kernels::isa_name(kernels::Isa::Scalar) == "scalar");
  kernels::set_active_isa(kernels::Isa::Avx2);
  CHECK(kernels::active_isa() == kernels::detected_isa());
}
