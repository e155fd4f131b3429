#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "schemabench/eval/metrics.hpp"
#include "schemabench/util/json.hpp"

namespace schemabench::eval {

struct InstanceEval {
  std::string instance_id;
  EvalCurve curve;
};

struct ReportOptions {
  bool normalize_auc = false;  // divide AUCs by the threshold range width
  std::string scorer;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

util::Json evaluation_report_json(const std::vector<InstanceEval>& results, const ReportOptions& options);
/// Columns: instance_id, recall_auc, precision_auc, f1_auc.
std::string evaluation_csv(const std::vector<InstanceEval>& results, const ReportOptions& options);

/// (instance_id, value) pairs of one metric column from an evaluation CSV, in file order.
std::vector<std::pair<std::string, double>> read_metric_column(const std::filesystem::path& csv, const std::string& metric);

/// Aligns run B to run A by instance_id; throws InvalidParameter when the id sets differ.
std::pair<std::vector<double>, std::vector<double>> pair_by_instance(
    const std::vector<std::pair<std::string, double>>& a, const std::vector<std::pair<std::string, double>>& b);

util::Json significance_json(const std::string& method_a, const std::string& method_b, const std::string& metric,
                             const TTestResult& result);

}  // namespace schemabench::eval
