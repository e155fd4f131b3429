#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace schemabench::embedding {

/// Unit-length embedding. Construct through `normalized`, which enforces finiteness
/// and L2 normalization.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  static EmbeddingVector normalized(std::vector<double> raw);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t dimension() const noexcept { return values_.size(); }

 private:
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  /// Raw (not necessarily normalized) vectors, one per text; at most batch_limit() texts.
  virtual std::vector<std::vector<double>> embed_raw(std::span<const std::string> texts) = 0;
  virtual std::size_t batch_limit() const = 0;
  virtual std::string name() const = 0;
};

/// Offline embedder: lowercased unigrams and bigrams hashed (FNV-1a) into `dimension`
/// count buckets. Same text gives the same vector in every process.
class HashEmbedder : public EmbeddingBackend {
 public:
  explicit HashEmbedder(std::size_t dimension = 256, std::size_t batch_limit = 128);

  std::vector<std::vector<double>> embed_raw(std::span<const std::string> texts) override;
  std::size_t batch_limit() const override { return batch_limit_; }
  std::string name() const override { return "hash-" + std::to_string(dimension_); }

  std::size_t calls() const noexcept { return calls_; }

 private:
  std::size_t dimension_;
  std::size_t batch_limit_;
  std::atomic<std::size_t> calls_{0};
};

struct RemoteEmbedderOptions {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "text-embedding-ada-002";
  std::size_t batch_limit = 128;
  std::chrono::seconds timeout{60};
};

/// OpenAI-compatible `/embeddings` endpoint.
class RemoteEmbedder : public EmbeddingBackend {
 public:
  explicit RemoteEmbedder(RemoteEmbedderOptions options);

  std::vector<std::vector<double>> embed_raw(std::span<const std::string> texts) override;
  std::size_t batch_limit() const override { return options_.batch_limit; }
  std::string name() const override { return "remote:" + options_.model; }

 private:
  RemoteEmbedderOptions options_;
};

std::vector<EmbeddingVector> embed_batch(EmbeddingBackend& backend, std::span<const std::string> texts);

/// Dot product of unit vectors clamped to [-1, 1]. Throws DimensionMismatch.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

/// Keys of the k corpus entries most similar to `query`, best first; ties keep corpus order.
std::vector<std::string> top_k_similar(const std::string& query,
                                       std::span<const std::pair<std::string, std::string>> corpus,
                                       std::size_t k, EmbeddingBackend& backend);

/// Ranking over precomputed vectors; returns corpus indices.
std::vector<std::size_t> top_k_indices(const EmbeddingVector& query,
                                       std::span<const EmbeddingVector> corpus, std::size_t k);

}  // namespace schemabench::embedding
