#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "schemabench/error.hpp"
#include "schemabench/eval/metrics.hpp"
#include "schemabench/eval/report.hpp"
#include "schemabench/eval/scorer.hpp"
#include "support/test_support.hpp"

using namespace schemabench;
using namespace schemabench::eval;

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

SimilarityMatrix random_matrix(util::Rng& rng, std::size_t g, std::size_t r) {
  std::vector<double> s(g * r);
  // Quantized so exact-tie thresholds occur.
  for (auto& x : s) x = static_cast<double>(rng.uniform_index(101)) / 100.0;
  return SimilarityMatrix::from_scores(g, r, s);
}

// Enumerates every (i, j) pair independently of the library's loop structure.
Metrics brute_metrics(const SimilarityMatrix& m, double t) {
  std::set<std::size_t> gen_hit, ref_hit;
  for (std::size_t k = 0; k < m.scores.size(); ++k) {
    if (m.scores[k] > t) {
      gen_hit.insert(k / m.cols());
      ref_hit.insert(k % m.cols());
    }
  }
  Metrics x;
  x.precision = m.rows() ? static_cast<double>(gen_hit.size()) / m.rows() : 0.0;
  x.recall = static_cast<double>(ref_hit.size()) / m.cols();
  x.f1 = x.precision + x.recall > 0 ? 2 * x.precision * x.recall / (x.precision + x.recall) : 0.0;
  return x;
}

double brute_trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) s += 0.5 * (v[i] + v[i + 1]) * (t[i + 1] - t[i]);
  return s;
}

}  // namespace

TEST_CASE("metrics at threshold: documented examples") {
  auto m = SimilarityMatrix::from_scores(2, 2, {0.9, 0.1, 0.2, 0.8});
  auto a = metrics_at_threshold(m, 0.5);
  CHECK(a.precision == 1.0);
  CHECK(a.recall == 1.0);
  CHECK(a.f1 == 1.0);
  auto b = metrics_at_threshold(m, 0.85);
  CHECK(b.precision == 0.5);
  CHECK(b.recall == 0.5);
  CHECK(b.f1 == 0.5);
  auto empty = SimilarityMatrix::from_scores(0, 3, {});
  auto c = metrics_at_threshold(empty, 0.5);
  CHECK(c.precision == 0.0);
  CHECK(c.recall == 0.0);
  CHECK(c.f1 == 0.0);
  // Strict inequality: a score equal to t does not match.
  auto tie = SimilarityMatrix::from_scores(1, 1, {0.5});
  CHECK(metrics_at_threshold(tie, 0.5).precision == 0.0);
  CHECK(code_of([] { SimilarityMatrix::from_scores(2, 2, {1.0}); }) == Errc::LengthMismatch);
}

TEST_CASE("threshold grid") {
  auto g = threshold_grid();
  REQUIRE(g.size() == 61);
  CHECK(g.front() == 0.4);
  CHECK(g.back() == 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(code_of([] { threshold_grid({50, 50}); }) == Errc::InvalidParameter);
  CHECK(code_of([] { threshold_grid({0, 101}); }) == Errc::InvalidParameter);
}

TEST_CASE("sweep on constant matrices") {
  auto zeros = sweep(SimilarityMatrix::from_scores(2, 3, std::vector<double>(6, 0.0)));
  CHECK(zeros.auc_precision == 0.0);
  CHECK(zeros.auc_recall == 0.0);
  CHECK(zeros.auc_f1 == 0.0);
  auto ones = sweep(SimilarityMatrix::from_scores(2, 3, std::vector<double>(6, 1.0)));
  REQUIRE(ones.thresholds.size() == 61);
  for (std::size_t i = 0; i + 1 < 61; ++i) CHECK(ones.precision[i] == 1.0);
  CHECK(ones.precision.back() == 0.0);
  CHECK(ones.recall.back() == 0.0);
  CHECK(ones.auc_precision == doctest::Approx(0.595).epsilon(1e-12));
  CHECK(ones.auc_recall == doctest::Approx(0.595).epsilon(1e-12));
  CHECK(ones.auc_f1 == doctest::Approx(0.595).epsilon(1e-12));
}

TEST_CASE("trapezoid examples") {
  auto grid = threshold_grid();
  for (double c : {0.0, 0.25, 1.0 / 3.0, 0.7, 1.0}) {
    std::vector<double> v(grid.size(), c);
    CHECK(trapezoid_auc(grid, v) == c * (1.0 - 0.4));
  }
  std::vector<double> linear;
  for (double t : grid) linear.push_back((1.0 - t) / 0.6);
  CHECK(trapezoid_auc(grid, linear) == doctest::Approx(0.30).epsilon(1e-12));
  std::vector<double> t3{0.4, 0.7, 1.0}, v3{1, 1, 0};
  CHECK(trapezoid_auc(t3, v3) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(code_of([&] { trapezoid_auc(t3, std::vector<double>{1, 1}); }) == Errc::LengthMismatch);
  CHECK(code_of([] { trapezoid_auc(std::vector<double>{0.4}, std::vector<double>{1}); }) == Errc::LengthMismatch);
  CHECK(code_of([] { trapezoid_auc(std::vector<double>{0.5, 0.4}, std::vector<double>{1, 1}); }) ==
        Errc::InvalidParameter);
}

TEST_CASE("property: metrics match brute-force enumeration") {
  util::Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t g = rng.uniform_index(9), r = 1 + rng.uniform_index(8);
    auto m = random_matrix(rng, g, r);
    for (double t : {0.0, 0.3, 0.4, 0.55, 0.99, 1.0}) {
      auto x = metrics_at_threshold(m, t);
      auto y = brute_metrics(m, t);
      CHECK(x.precision == y.precision);
      CHECK(x.recall == y.recall);
      CHECK(x.f1 == doctest::Approx(y.f1));
    }
  }
}

TEST_CASE("property: monotone curves, bounded AUC, transpose swaps precision and recall") {
  util::Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t g = 1 + rng.uniform_index(8), r = 1 + rng.uniform_index(8);
    auto m = random_matrix(rng, g, r);
    auto c = sweep(m);
    for (std::size_t i = 1; i < c.thresholds.size(); ++i) {
      CHECK(c.precision[i] <= c.precision[i - 1]);
      CHECK(c.recall[i] <= c.recall[i - 1]);
    }
    for (double auc : {c.auc_precision, c.auc_recall, c.auc_f1}) {
      CHECK(auc >= 0.0);
      CHECK(auc <= 0.6 + 1e-12);
    }
    const bool all_zero = std::all_of(c.f1.begin(), c.f1.end(), [](double v) { return v == 0.0; });
    CHECK((c.auc_f1 == 0.0) == all_zero);
    CHECK(c.auc_recall == doctest::Approx(brute_trapezoid(c.thresholds, c.recall)).epsilon(1e-12));

    auto ct = sweep(m.transposed());
    CHECK(ct.precision == c.recall);
    CHECK(ct.recall == c.precision);
  }
}

TEST_CASE("aggregate corpus is a macro mean") {
  CHECK(code_of([] { aggregate_corpus({}); }) == Errc::EmptyCorpus);
  EvalCurve a, b;
  a.auc_f1 = 0.2;
  b.auc_f1 = 0.4;
  std::vector<EvalCurve> two{a, b};
  CHECK(aggregate_corpus(two).f1_auc == doctest::Approx(0.3));
  CHECK(aggregate_corpus(std::vector<EvalCurve>{a}).f1_auc == 0.2);

  util::Rng rng(5);
  std::vector<EvalCurve> curves;
  double sum_r = 0, sum_p = 0;
  for (int i = 0; i < 10; ++i) {
    curves.push_back(sweep(random_matrix(rng, 1 + rng.uniform_index(6), 1 + rng.uniform_index(6))));
    sum_r += brute_trapezoid(curves.back().thresholds, curves.back().recall);
    sum_p += brute_trapezoid(curves.back().thresholds, curves.back().precision);
  }
  auto means = aggregate_corpus(curves);
  CHECK(means.recall_auc == doctest::Approx(sum_r / 10).epsilon(1e-12));
  CHECK(means.precision_auc == doctest::Approx(sum_p / 10).epsilon(1e-12));
}

TEST_CASE("paired t-test documented examples") {
  std::vector<double> a{0.1, 0.2, 0.3};
  auto same = paired_ttest(a, a);
  CHECK(same.t == 0.0);
  CHECK(same.p == 1.0);
  CHECK_FALSE(same.significant);

  std::vector<double> d{1.0, 1.1, 0.9, 1.0, 1.0}, zero(5, 0.0);
  auto r = paired_ttest(d, zero);
  // mean 1, sd sqrt(0.02/4), t = 1 / (sd / sqrt(5))
  CHECK(r.t == doctest::Approx(1.0 / (std::sqrt(0.005) / std::sqrt(5.0))));
  // scipy.stats.ttest_rel on the same data: t = 31.6227766016838, p = 5.960208996599507e-06
  CHECK(r.t == doctest::Approx(31.6227766016838).epsilon(1e-12));
  CHECK(r.p == doctest::Approx(5.960208996599507e-06).epsilon(1e-9));
  CHECK(r.significant);
  CHECK(code_of([] { paired_ttest(std::vector<double>{1}, std::vector<double>{2}); }) == Errc::TooFewSamples);
  CHECK(code_of([] { paired_ttest(std::vector<double>{1, 2}, std::vector<double>{2}); }) == Errc::LengthMismatch);
}

TEST_CASE("paired t-test matches the scipy oracle and is antisymmetric") {
  std::ifstream in(testsupport::data_path("oracles/ttest_cases.json"));
  REQUIRE(in.good());
  auto cases = util::Json::parse(in);
  REQUIRE(cases.size() == 50);
  for (const auto& c : cases) {
    auto a = c["a"].get<std::vector<double>>();
    auto b = c["b"].get<std::vector<double>>();
    auto r = paired_ttest(a, b);
    CHECK(r.t == doctest::Approx(c["t"].get<double>()).epsilon(1e-9));
    CHECK(std::abs(r.p - c["p"].get<double>()) <= 1e-9 * std::max(1.0, c["p"].get<double>()) + 1e-15);
    CHECK(r.significant == (c["p"].get<double>() < 0.05));
    auto s = paired_ttest(b, a);
    CHECK(s.t == -r.t);
    CHECK(s.p == r.p);
  }
}

TEST_CASE("spearman") {
  std::vector<int> id{1, 2, 3, 4, 5}, rev{5, 4, 3, 2, 1}, swap{2, 1, 3, 4, 5};
  CHECK(spearman_rho(id, id) == 1.0);
  CHECK(spearman_rho(id, rev) == -1.0);
  CHECK(spearman_rho(id, swap) == doctest::Approx(0.9));
  CHECK(code_of([&] { spearman_rho(id, std::vector<int>{1, 1, 3, 4, 5}); }) == Errc::NotAPermutation);
  CHECK(code_of([&] { spearman_rho(id, std::vector<int>{0, 1, 2, 3, 4}); }) == Errc::NotAPermutation);
  CHECK(code_of([] { spearman_rho(std::vector<int>{1}, std::vector<int>{1}); }) == Errc::NotAPermutation);
}

TEST_CASE("similarity matrix with exact and embedding scorers") {
  auto ref = testsupport::schema_of({"Model", "Dataset", "Accuracy"});
  ExactMatchScorer exact;
  auto m = similarity_matrix(ref, ref, exact);
  REQUIRE(m.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(m.at(i, j) == (i == j ? 1.0 : 0.0));
  }
  CHECK(m.gen_names == ref.names());
  CHECK(similarity_matrix(core::AspectSchema{}, ref, exact).rows() == 0);
  CHECK(code_of([&] { similarity_matrix(ref, core::AspectSchema{}, exact); }) == Errc::InvalidParameter);

  auto gen = testsupport::schema_of({"Model size", "Training data"});
  embedding::HashEmbedder h(128);
  EmbeddingScorer scorer(h);
  auto e = similarity_matrix(gen, ref, scorer);
  REQUIRE(e.rows() == 2);
  REQUIRE(e.cols() == 3);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<std::string> texts{core::aspect_fingerprint(gen.aspects()[i]),
                                     core::aspect_fingerprint(ref.aspects()[j])};
      auto v = embedding::embed_batch(h, texts);
      CHECK(e.at(i, j) == doctest::Approx(std::clamp(embedding::cosine(v[0], v[1]), 0.0, 1.0)));
    }
  }
}

TEST_CASE("bertscore http scorer") {
  httplib::Server server;
  server.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
    auto body = util::Json::parse(req.body);
    util::Json f1 = util::Json::array();
    for (std::size_t i = 0; i < body["candidates"].size(); ++i) {
      f1.push_back(body["candidates"][i] == body["references"][i] ? 1.0 : 0.25);
    }
    res.set_content(util::dump_compact({{"f1", f1}}), "application/json");
  });
  server.Post("/short", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"f1": [1.0]})", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);

  auto ref = testsupport::schema_of({"A", "B"});
  HttpBertScoreScorer scorer(base + "/score");
  auto m = similarity_matrix(ref, ref, scorer);
  CHECK(m.scores == std::vector<double>{1.0, 0.25, 0.25, 1.0});
  HttpBertScoreScorer bad(base + "/short");
  CHECK(code_of([&] { similarity_matrix(ref, ref, bad); }) == Errc::ScorerError);
  server.stop();
  t.join();
}

TEST_CASE("report json, csv and significance inputs") {
  std::vector<InstanceEval> results;
  results.push_back({"x,1", sweep(SimilarityMatrix::from_scores(1, 1, {1.0}))});
  results.push_back({"y", sweep(SimilarityMatrix::from_scores(1, 2, {0.7, 0.0}))});
  auto j = evaluation_report_json(results, {false, "exact"});
  CHECK(j["instance_count"] == 2);
  CHECK(j["instances"][0]["thresholds"].size() == 61);
  CHECK(j["corpus"]["f1_auc"].get<double>() ==
        doctest::Approx((results[0].curve.auc_f1 + results[1].curve.auc_f1) / 2));
  auto jn = evaluation_report_json(results, {true, "exact"});
  CHECK(jn["auc_normalized"] == true);
  CHECK(jn["instances"][0]["recall_auc"].get<double>() == doctest::Approx(0.595 / 0.6));

  testsupport::TempDir dir;
  const auto csv = dir / "r.csv";
  {
    std::ofstream out(csv);
    out << evaluation_csv(results, {false, "exact"});
  }
  auto col = read_metric_column(csv, "recall_auc");
  REQUIRE(col.size() == 2);
  CHECK(col[0].first == "x,1");
  CHECK(col[0].second == results[0].curve.auc_recall);
  CHECK(col[1].second == results[1].curve.auc_recall);
  CHECK(code_of([&] { read_metric_column(csv, "nope"); }) == Errc::InvalidParameter);

  std::vector<std::pair<std::string, double>> a{{"p", 1}, {"q", 2}}, b{{"q", 20}, {"p", 10}};
  auto [xa, xb] = pair_by_instance(a, b);
  CHECK(xb == std::vector<double>{10, 20});
  std::vector<std::pair<std::string, double>> c{{"p", 1}, {"r", 2}};
  CHECK(code_of([&] { pair_by_instance(a, c); }) == Errc::InvalidParameter);

  auto s = significance_json("A", "B", "f1_auc", TTestResult{2.0, 0.04, true});
  CHECK(s["method_a"] == "A");
  CHECK(s["significant"] == true);
}

TEST_CASE("format_double round trips") {
  util::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    double v = rng.uniform01() * std::pow(10.0, static_cast<int>(rng.uniform_index(12)) - 6);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.0) == "0");
}
