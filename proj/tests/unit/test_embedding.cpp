#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <doctest.h>

#include <cmath>
#include <thread>

#include "schemabench/embedding/embedding.hpp"
#include "schemabench/error.hpp"
#include "schemabench/util/json.hpp"

using namespace schemabench;
using namespace schemabench::embedding;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::IoError;
}

// Returns fixed vectors and records chunk sizes.
class FakeBackend : public EmbeddingBackend {
 public:
  std::vector<std::vector<double>> replies;
  std::vector<std::size_t> chunks;
  std::size_t limit = 2;
  bool drop_one = false;

  std::vector<std::vector<double>> embed_raw(std::span<const std::string> texts) override {
    chunks.push_back(texts.size());
    std::vector<std::vector<double>> out;
    for (const auto& t : texts) out.push_back({static_cast<double>(t.size()), 1.0, 0.0});
    if (drop_one) out.pop_back();
    return out;
  }
  std::size_t batch_limit() const override { return limit; }
  std::string name() const override { return "fake"; }
};

double norm(const EmbeddingVector& v) {
  double s = 0;
  for (double x : v.values()) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("normalized rejects degenerate vectors") {
  CHECK(code_of([] { EmbeddingVector::normalized({0.0, 0.0}); }) == Errc::BackendError);
  CHECK(code_of([] { EmbeddingVector::normalized({1.0, NAN}); }) == Errc::BackendError);
  CHECK(code_of([] { EmbeddingVector::normalized({1.0}); }) == Errc::BackendError);
  auto v = EmbeddingVector::normalized({3.0, 4.0});
  CHECK(v.values()[0] == doctest::Approx(0.6));
  CHECK(v.values()[1] == doctest::Approx(0.8));
}

TEST_CASE("hash embedder is deterministic and unit length") {
  HashEmbedder a(64), b(64);
  std::vector<std::string> texts{"Dataset size", "dataset SIZE", "Number of parameters"};
  auto va = embed_batch(a, texts);
  auto vb = embed_batch(b, texts);
  REQUIRE(va.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(norm(va[i]) == doctest::Approx(1.0));
    CHECK(std::equal(va[i].values().begin(), va[i].values().end(), vb[i].values().begin()));
  }
  // Lowercasing makes the first two identical.
  CHECK(cosine(va[0], va[1]) == doctest::Approx(1.0));
  CHECK(cosine(va[0], va[2]) < 0.9);
  CHECK(a.name() == "hash-64");
  CHECK(a.calls() == 1);
}

TEST_CASE("hash embedder handles punctuation-only text") {
  HashEmbedder h(16);
  std::vector<std::string> texts{"#", "%"};
  auto v = embed_batch(h, texts);
  CHECK(v.size() == 2);
}

TEST_CASE("embed_batch input errors") {
  HashEmbedder h(16);
  CHECK(code_of([&] { embed_batch(h, std::vector<std::string>{}); }) == Errc::InvalidParameter);
  CHECK(code_of([&] { embed_batch(h, std::vector<std::string>{"ok", "  \n"}); }) == Errc::EmptyText);
  CHECK(code_of([] { HashEmbedder bad(1); }) == Errc::InvalidParameter);
  CHECK(code_of([] { HashEmbedder bad(16, 0); }) == Errc::InvalidParameter);
}

TEST_CASE("embed_batch splits by batch limit and keeps order") {
  FakeBackend f;
  f.limit = 2;
  std::vector<std::string> texts{"a", "bb", "ccc", "dddd", "eeeee"};
  auto v = embed_batch(f, texts);
  CHECK(f.chunks == std::vector<std::size_t>{2, 2, 1});
  REQUIRE(v.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    double len = static_cast<double>(i + 1);
    CHECK(v[i].values()[0] == doctest::Approx(len / std::sqrt(len * len + 1.0)));
  }
  f.drop_one = true;
  CHECK(code_of([&] { embed_batch(f, texts); }) == Errc::BackendError);
}

TEST_CASE("cosine checks dimensions and clamps") {
  auto a = EmbeddingVector::normalized({1.0, 0.0});
  auto b = EmbeddingVector::normalized({1.0, 0.0, 0.0});
  CHECK(code_of([&] { cosine(a, b); }) == Errc::DimensionMismatch);
  CHECK(cosine(a, a) <= 1.0);
  auto c = EmbeddingVector::normalized({-1.0, 0.0});
  CHECK(cosine(a, c) == doctest::Approx(-1.0));
}

TEST_CASE("top_k ranks by similarity with stable ties") {
  std::vector<EmbeddingVector> corpus{
      EmbeddingVector::normalized({0.0, 1.0}), EmbeddingVector::normalized({1.0, 0.1}),
      EmbeddingVector::normalized({1.0, 0.1}), EmbeddingVector::normalized({1.0, 1.0})};
  auto q = EmbeddingVector::normalized({1.0, 0.0});
  CHECK(top_k_indices(q, corpus, 3) == std::vector<std::size_t>{1, 2, 3});
  CHECK(top_k_indices(q, corpus, 10).size() == 4);
  CHECK(code_of([&] { top_k_indices(q, corpus, 0); }) == Errc::InvalidParameter);

  HashEmbedder h(512);
  std::vector<std::pair<std::string, std::string>> docs{
      {"x", "graph neural networks for molecules"},
      {"y", "image classification benchmarks"},
      {"z", "neural networks for molecules and proteins"}};
  auto keys = top_k_similar("graph neural networks for molecules", docs, 2, h);
  CHECK(keys == std::vector<std::string>{"x", "z"});
  CHECK(code_of([&] { top_k_similar("q", {}, 1, h); }) == Errc::InvalidParameter);
}

TEST_CASE("remote embedder talks to an OpenAI-style endpoint") {
  httplib::Server server;
  std::string seen_auth, seen_model;
  std::size_t seen_inputs = 0;
  server.Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    auto body = util::Json::parse(req.body);
    seen_model = body["model"].get<std::string>();
    seen_inputs = body["input"].size();
    util::Json data = util::Json::array();
    // Out of order on purpose; the index field decides placement.
    for (int i = static_cast<int>(seen_inputs) - 1; i >= 0; --i) {
      data.push_back({{"index", i}, {"embedding", {1.0 + i, 2.0}}});
    }
    res.set_content(util::dump_compact({{"data", data}}), "application/json");
  });
  server.Post("/bad/embeddings", [](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
    res.set_content("boom", "text/plain");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  RemoteEmbedderOptions opts;
  opts.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  opts.api_key = "k";
  opts.model = "m";
  RemoteEmbedder remote(opts);
  std::vector<std::string> texts{"a", "b", "c"};
  auto v = embed_batch(remote, texts);
  CHECK(seen_auth == "Bearer k");
  CHECK(seen_model == "m");
  CHECK(seen_inputs == 3);
  REQUIRE(v.size() == 3);
  CHECK(v[2].values()[0] == doctest::Approx(3.0 / std::sqrt(13.0)));

  opts.base_url = "http://127.0.0.1:" + std::to_string(port) + "/bad";
  RemoteEmbedder bad(opts);
  CHECK(code_of([&] { embed_batch(bad, texts); }) == Errc::BackendError);

  server.stop();
  t.join();
}
