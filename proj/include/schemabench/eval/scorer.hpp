#pragma once

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "schemabench/embedding/embedding.hpp"

namespace schemabench::eval {

/// Similarity between aspect fingerprints. Implementations return a row-major
/// gen.size() x ref.size() grid; values are clamped to [0, 1] by the caller.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::vector<double> score(std::span<const std::string> gen, std::span<const std::string> ref) = 0;
  virtual std::string name() const = 0;
};

/// 1 for identical fingerprints, else 0.
class ExactMatchScorer : public Scorer {
 public:
  std::vector<double> score(std::span<const std::string> gen, std::span<const std::string> ref) override;
  std::string name() const override { return "exact"; }
};

/// Cosine of fingerprint embeddings (the default scorer).
class EmbeddingScorer : public Scorer {
 public:
  explicit EmbeddingScorer(embedding::EmbeddingBackend& backend) : backend_(backend) {}
  std::vector<double> score(std::span<const std::string> gen, std::span<const std::string> ref) override;
  std::string name() const override { return "embedding-cosine:" + backend_.name(); }

 private:
  embedding::EmbeddingBackend& backend_;
};

/// Token-level BERTScore served over HTTP. POSTs {"candidates": [...], "references": [...]}
/// (one entry per pair) and expects {"f1": [...]} back in the same order.
class HttpBertScoreScorer : public Scorer {
 public:
  explicit HttpBertScoreScorer(std::string url, std::chrono::seconds timeout = std::chrono::seconds{120});
  std::vector<double> score(std::span<const std::string> gen, std::span<const std::string> ref) override;
  std::string name() const override { return "bertscore-http:" + url_; }

 private:
  std::string url_;
  std::chrono::seconds timeout_;
};

}  // namespace schemabench::eval
