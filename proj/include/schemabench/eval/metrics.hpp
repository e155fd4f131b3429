#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "schemabench/core/schema.hpp"
#include "schemabench/eval/scorer.hpp"

namespace schemabench::eval {

/// G x R aspect similarity grid (row = generated aspect, column = reference aspect).
struct SimilarityMatrix {
  std::vector<std::string> gen_names;
  std::vector<std::string> ref_names;
  std::vector<double> scores;  // row-major, every entry in [0, 1]

  std::size_t rows() const noexcept { return gen_names.size(); }
  std::size_t cols() const noexcept { return ref_names.size(); }
  double at(std::size_t i, std::size_t j) const { return scores[i * cols() + j]; }

  /// Unnamed matrix (tests, property generators); throws LengthMismatch on a size mismatch.
  static SimilarityMatrix from_scores(std::size_t rows, std::size_t cols, std::vector<double> scores);
  SimilarityMatrix transposed() const;
};

SimilarityMatrix similarity_matrix(const core::AspectSchema& gen, const core::AspectSchema& ref, Scorer& scorer);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// A pair matches when its similarity strictly exceeds t; matching is many-to-many.
Metrics metrics_at_threshold(const SimilarityMatrix& m, double t);

struct SweepRange {
  int lower_percent = 40;
  int upper_percent = 100;
};

/// Thresholds lower/100, (lower+1)/100, ..., upper/100.
std::vector<double> threshold_grid(const SweepRange& range = {});

struct EvalCurve {
  std::vector<double> thresholds;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  double auc_precision = 0.0;
  double auc_recall = 0.0;
  double auc_f1 = 0.0;
};

EvalCurve sweep(const SimilarityMatrix& m, const SweepRange& range = {});

/// Unnormalized trapezoid integral. Products are accumulated with error-free
/// transformations so a constant curve integrates to exactly c * (t_last - t_first).
double trapezoid_auc(std::span<const double> thresholds, std::span<const double> values);

struct CorpusMeans {
  double recall_auc = 0.0;
  double precision_auc = 0.0;
  double f1_auc = 0.0;
};

/// Macro mean of per-instance AUCs. Throws EmptyCorpus.
CorpusMeans aggregate_corpus(std::span<const EvalCurve> curves);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  bool significant = false;
};

/// Paired two-tailed t-test on d_i = a_i - b_i with n - 1 degrees of freedom.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// Spearman correlation of two rankings, each a permutation of 1..n.
double spearman_rho(std::span<const int> rank_a, std::span<const int> rank_b);

}  // namespace schemabench::eval
