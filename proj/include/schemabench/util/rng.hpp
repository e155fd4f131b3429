#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace schemabench::util {

/// FNV-1a 64, stable across processes and platforms.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream seed from a run seed and a (stage, key, index) path, so
/// parallel scheduling never changes which numbers an instance sees.
std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view stage, std::string_view key = {},
                          std::uint64_t index = 0);

/// Seeded generator with platform-independent integer draws (std distributions are
/// implementation-defined, which would break byte-stable datasets across toolchains).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, n); n > 0.
  std::size_t uniform_index(std::size_t n);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  /// `count` distinct indices from [0, n) in selection order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace schemabench::util
