#include "schemabench/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "schemabench/error.hpp"

namespace schemabench::eval {

namespace {

// Error-free transformations for a compensated dot product.
void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double z = s - a;
  e = (a - (s - z)) + (b - z);
}

void two_product(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

}  // namespace

SimilarityMatrix SimilarityMatrix::from_scores(std::size_t rows, std::size_t cols, std::vector<double> scores) {
  if (scores.size() != rows * cols) throw Error(Errc::LengthMismatch, "score count does not match shape");
  SimilarityMatrix m;
  for (std::size_t i = 0; i < rows; ++i) m.gen_names.push_back("g" + std::to_string(i));
  for (std::size_t j = 0; j < cols; ++j) m.ref_names.push_back("r" + std::to_string(j));
  m.scores = std::move(scores);
  return m;
}

SimilarityMatrix SimilarityMatrix::transposed() const {
  SimilarityMatrix t;
  t.gen_names = ref_names;
  t.ref_names = gen_names;
  t.scores.resize(scores.size());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) t.scores[j * rows() + i] = at(i, j);
  }
  return t;
}

SimilarityMatrix similarity_matrix(const core::AspectSchema& gen, const core::AspectSchema& ref, Scorer& scorer) {
  if (ref.empty()) throw Error(Errc::InvalidParameter, "reference schema has no aspects");
  SimilarityMatrix m;
  std::vector<std::string> gen_text;
  std::vector<std::string> ref_text;
  for (const auto& a : gen.aspects()) {
    m.gen_names.push_back(a.name);
    gen_text.push_back(core::aspect_fingerprint(a));
  }
  for (const auto& a : ref.aspects()) {
    m.ref_names.push_back(a.name);
    ref_text.push_back(core::aspect_fingerprint(a));
  }
  if (gen_text.empty()) return m;
  try {
    m.scores = scorer.score(gen_text, ref_text);
  } catch (const Error& e) {
    if (e.code() == Errc::ScorerError) throw;
    throw Error(Errc::ScorerError, scorer.name() + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(Errc::ScorerError, scorer.name() + ": " + e.what());
  }
  if (m.scores.size() != gen_text.size() * ref_text.size()) {
    throw Error(Errc::ScorerError, scorer.name() + " returned a grid of the wrong size");
  }
  for (double& s : m.scores) {
    if (!std::isfinite(s)) throw Error(Errc::ScorerError, scorer.name() + " returned a non-finite score");
    s = std::clamp(s, 0.0, 1.0);
  }
  return m;
}

Metrics metrics_at_threshold(const SimilarityMatrix& m, double t) {
  Metrics out;
  const std::size_t g = m.rows();
  const std::size_t r = m.cols();
  if (g == 0 || r == 0) return out;
  std::vector<char> recalled(r, 0);
  std::size_t matched = 0;
  for (std::size_t i = 0; i < g; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < r; ++j) {
      if (m.at(i, j) > t) {
        any = true;
        recalled[j] = 1;
      }
    }
    matched += any;
  }
  const auto hits = static_cast<std::size_t>(std::count(recalled.begin(), recalled.end(), 1));
  out.precision = static_cast<double>(matched) / static_cast<double>(g);
  out.recall = static_cast<double>(hits) / static_cast<double>(r);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

std::vector<double> threshold_grid(const SweepRange& range) {
  if (range.lower_percent < 0 || range.upper_percent > 100 || range.lower_percent >= range.upper_percent) {
    throw Error(Errc::InvalidParameter, "threshold range must satisfy 0 <= lower < upper <= 100");
  }
  std::vector<double> grid;
  for (int p = range.lower_percent; p <= range.upper_percent; ++p) grid.push_back(p / 100.0);
  return grid;
}

EvalCurve sweep(const SimilarityMatrix& m, const SweepRange& range) {
  EvalCurve c;
  c.thresholds = threshold_grid(range);
  for (double t : c.thresholds) {
    const auto x = metrics_at_threshold(m, t);
    c.precision.push_back(x.precision);
    c.recall.push_back(x.recall);
    c.f1.push_back(x.f1);
  }
  c.auc_precision = trapezoid_auc(c.thresholds, c.precision);
  c.auc_recall = trapezoid_auc(c.thresholds, c.recall);
  c.auc_f1 = trapezoid_auc(c.thresholds, c.f1);
  return c;
}

double trapezoid_auc(std::span<const double> thresholds, std::span<const double> values) {
  if (thresholds.size() != values.size()) throw Error(Errc::LengthMismatch, "thresholds and values differ in length");
  if (thresholds.size() < 2) throw Error(Errc::LengthMismatch, "need at least two points");
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
    const double width = thresholds[i + 1] - thresholds[i];
    if (!(width > 0.0)) throw Error(Errc::InvalidParameter, "thresholds must be strictly ascending");
    double p, pe, s, se;
    two_product(0.5 * (values[i] + values[i + 1]), width, p, pe);
    two_sum(sum, p, s, se);
    sum = s;
    comp += pe + se;
  }
  return sum + comp;
}

CorpusMeans aggregate_corpus(std::span<const EvalCurve> curves) {
  if (curves.empty()) throw Error(Errc::EmptyCorpus, "no curves to aggregate");
  CorpusMeans m;
  for (const auto& c : curves) {
    m.recall_auc += c.auc_recall;
    m.precision_auc += c.auc_precision;
    m.f1_auc += c.auc_f1;
  }
  const auto n = static_cast<double>(curves.size());
  m.recall_auc /= n;
  m.precision_auc /= n;
  m.f1_auc /= n;
  return m;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "paired samples differ in length");
  const std::size_t n = a.size();
  if (n < 2) throw Error(Errc::TooFewSamples, "paired t-test needs at least two pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) return {0.0, 1.0, false};

  const double nn = static_cast<double>(n);
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / nn;
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / (nn - 1.0) / nn);

  TTestResult r;
  if (se == 0.0) {
    r.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.p = 0.0;
  } else {
    r.t = mean / se;
    boost::math::students_t dist(nn - 1.0);
    r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t))));
  }
  r.significant = r.p < alpha;
  return r;
}

double spearman_rho(std::span<const int> rank_a, std::span<const int> rank_b) {
  if (rank_a.size() != rank_b.size()) throw Error(Errc::LengthMismatch, "rankings differ in length");
  const std::size_t n = rank_a.size();
  if (n < 2) throw Error(Errc::NotAPermutation, "rankings need at least two items");
  auto check = [n](std::span<const int> r) {
    std::vector<char> seen(n + 1, 0);
    for (int v : r) {
      if (v < 1 || static_cast<std::size_t>(v) > n || seen[v]) {
        throw Error(Errc::NotAPermutation, "ranking is not a permutation of 1.." + std::to_string(n));
      }
      seen[v] = 1;
    }
  };
  check(rank_a);
  check(rank_b);
  long long sum_sq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long long diff = rank_a[i] - rank_b[i];
    sum_sq += diff * diff;
  }
  const long long nl = static_cast<long long>(n);
  return 1.0 - static_cast<double>(6 * sum_sq) / static_cast<double>(nl * (nl * nl - 1));
}

}  // namespace schemabench::eval
