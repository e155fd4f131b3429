#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "schemabench/eval/scorer.hpp"

#include "schemabench/error.hpp"
#include "schemabench/llm/openai_provider.hpp"
#include "schemabench/util/json.hpp"

namespace schemabench::eval {

std::vector<double> ExactMatchScorer::score(std::span<const std::string> gen, std::span<const std::string> ref) {
  std::vector<double> out;
  out.reserve(gen.size() * ref.size());
  for (const auto& g : gen) {
    for (const auto& r : ref) out.push_back(g == r ? 1.0 : 0.0);
  }
  return out;
}

std::vector<double> EmbeddingScorer::score(std::span<const std::string> gen, std::span<const std::string> ref) {
  std::vector<std::string> texts(gen.begin(), gen.end());
  texts.insert(texts.end(), ref.begin(), ref.end());
  const auto vectors = embedding::embed_batch(backend_, texts);
  std::vector<double> out;
  out.reserve(gen.size() * ref.size());
  for (std::size_t i = 0; i < gen.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) out.push_back(embedding::cosine(vectors[i], vectors[gen.size() + j]));
  }
  return out;
}

HttpBertScoreScorer::HttpBertScoreScorer(std::string url, std::chrono::seconds timeout)
    : url_(std::move(url)), timeout_(timeout) {}

std::vector<double> HttpBertScoreScorer::score(std::span<const std::string> gen, std::span<const std::string> ref) {
  util::Json body = util::Json::object();
  body["candidates"] = util::Json::array();
  body["references"] = util::Json::array();
  for (const auto& g : gen) {
    for (const auto& r : ref) {
      body["candidates"].push_back(g);
      body["references"].push_back(r);
    }
  }
  const auto endpoint = llm::HttpEndpoint::parse(url_);
  httplib::Client client(endpoint.scheme_host_port);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  auto res = client.Post(endpoint.path_prefix.empty() ? "/" : endpoint.path_prefix, util::dump_compact(body),
                         "application/json");
  if (!res) throw Error(Errc::ScorerError, "request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw Error(Errc::ScorerError, "status " + std::to_string(res->status) + ": " + res->body);
  try {
    auto scores = util::Json::parse(res->body).at("f1").get<std::vector<double>>();
    if (scores.size() != gen.size() * ref.size()) throw Error(Errc::ScorerError, "wrong number of scores");
    return scores;
  } catch (const util::Json::exception& e) {
    throw Error(Errc::ScorerError, std::string("malformed response: ") + e.what());
  }
}

}  // namespace schemabench::eval
