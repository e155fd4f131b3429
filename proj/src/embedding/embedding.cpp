#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "schemabench/embedding/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "schemabench/error.hpp"
#include "schemabench/kernels/kernels.hpp"
#include "schemabench/llm/openai_provider.hpp"
#include "schemabench/util/json.hpp"
#include "schemabench/util/rng.hpp"
#include "schemabench/util/text.hpp"

namespace schemabench::embedding {

EmbeddingVector EmbeddingVector::normalized(std::vector<double> raw) {
  if (raw.size() < 2) throw Error(Errc::BackendError, "embedding dimension must be at least 2");
  for (double v : raw) {
    if (!std::isfinite(v)) throw Error(Errc::BackendError, "embedding has non-finite component");
  }
  const double norm = std::sqrt(kernels::dot(raw, raw));
  if (norm == 0.0) throw Error(Errc::BackendError, "embedding has zero norm");
  for (double& v : raw) v /= norm;
  return EmbeddingVector(std::move(raw));
}

HashEmbedder::HashEmbedder(std::size_t dimension, std::size_t batch_limit)
    : dimension_(dimension), batch_limit_(batch_limit) {
  if (dimension_ < 2) throw Error(Errc::InvalidParameter, "hash embedder dimension must be >= 2");
  if (batch_limit_ == 0) throw Error(Errc::InvalidParameter, "batch limit must be positive");
}

std::vector<std::vector<double>> HashEmbedder::embed_raw(std::span<const std::string> texts) {
  ++calls_;
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> v(dimension_, 0.0);
    auto tokens = util::word_tokens(text);
    if (tokens.empty()) tokens.push_back(util::trim(text));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      v[util::fnv1a64("u:" + tokens[i]) % dimension_] += 1.0;
      if (i + 1 < tokens.size()) {
        v[util::fnv1a64("b:" + tokens[i] + " " + tokens[i + 1]) % dimension_] += 1.0;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderOptions options) : options_(std::move(options)) {
  if (options_.batch_limit == 0) throw Error(Errc::InvalidParameter, "batch limit must be positive");
}

std::vector<std::vector<double>> RemoteEmbedder::embed_raw(std::span<const std::string> texts) {
  const auto endpoint = llm::HttpEndpoint::parse(options_.base_url);
  httplib::Client client(endpoint.scheme_host_port);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);
  util::Json body = util::Json::object();
  body["model"] = options_.model;
  body["input"] = util::Json(std::vector<std::string>(texts.begin(), texts.end()));
  auto result = client.Post(endpoint.path_prefix + "/embeddings", headers, util::dump_compact(body),
                            "application/json");
  if (!result) throw Error(Errc::BackendError, "embedding request failed: " + httplib::to_string(result.error()));
  if (result->status != 200) {
    throw Error(Errc::BackendError, "embedding endpoint returned " + std::to_string(result->status) + ": " + result->body);
  }
  try {
    auto j = util::Json::parse(result->body);
    std::vector<std::vector<double>> out(texts.size());
    std::size_t position = 0;
    for (const auto& item : j.at("data")) {
      const std::size_t index = item.value("index", position);
      if (index >= out.size()) throw Error(Errc::BackendError, "embedding index out of range");
      out[index] = item.at("embedding").get<std::vector<double>>();
      ++position;
    }
    return out;
  } catch (const util::Json::exception& e) {
    throw Error(Errc::BackendError, std::string("malformed embedding response: ") + e.what());
  }
}

std::vector<EmbeddingVector> embed_batch(EmbeddingBackend& backend, std::span<const std::string> texts) {
  if (texts.empty()) throw Error(Errc::InvalidParameter, "embed_batch needs at least one text");
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (util::trim(texts[i]).empty()) throw Error(Errc::EmptyText, "text at index " + std::to_string(i));
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  const std::size_t limit = backend.batch_limit();
  for (std::size_t start = 0; start < texts.size(); start += limit) {
    const auto chunk = texts.subspan(start, std::min(limit, texts.size() - start));
    auto raw = backend.embed_raw(chunk);
    if (raw.size() != chunk.size()) {
      throw Error(Errc::BackendError, "backend returned " + std::to_string(raw.size()) + " vectors for " +
                                          std::to_string(chunk.size()) + " texts");
    }
    for (auto& r : raw) out.push_back(EmbeddingVector::normalized(std::move(r)));
  }
  const std::size_t dim = out.front().dimension();
  for (const auto& v : out) {
    if (v.dimension() != dim) throw Error(Errc::BackendError, "backend returned mixed dimensions");
  }
  return out;
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dimension() != v.dimension()) {
    throw Error(Errc::DimensionMismatch,
                std::to_string(u.dimension()) + " vs " + std::to_string(v.dimension()));
  }
  return std::clamp(kernels::dot(u.values(), v.values()), -1.0, 1.0);
}

std::vector<std::size_t> top_k_indices(const EmbeddingVector& query,
                                       std::span<const EmbeddingVector> corpus, std::size_t k) {
  if (k == 0) throw Error(Errc::InvalidParameter, "k must be at least 1");
  std::vector<double> scores(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) scores[i] = cosine(query, corpus[i]);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(k, order.size()));
  return order;
}

std::vector<std::string> top_k_similar(const std::string& query,
                                       std::span<const std::pair<std::string, std::string>> corpus,
                                       std::size_t k, EmbeddingBackend& backend) {
  if (corpus.empty()) throw Error(Errc::InvalidParameter, "retrieval corpus is empty");
  if (k == 0) throw Error(Errc::InvalidParameter, "k must be at least 1");
  std::vector<std::string> texts;
  texts.reserve(corpus.size() + 1);
  texts.push_back(query);
  for (const auto& [_, text] : corpus) texts.push_back(text);
  auto vectors = embed_batch(backend, texts);
  const auto ranked = top_k_indices(vectors.front(), std::span(vectors).subspan(1), k);
  std::vector<std::string> keys;
  keys.reserve(ranked.size());
  for (auto i : ranked) keys.push_back(corpus[i].first);
  return keys;
}

}  // namespace schemabench::embedding
