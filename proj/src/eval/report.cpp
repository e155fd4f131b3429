#include "schemabench/eval/report.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "schemabench/error.hpp"
#include "schemabench/util/text.hpp"

namespace schemabench::eval {

namespace {

double range_width(const EvalCurve& c) {
  return c.thresholds.empty() ? 1.0 : c.thresholds.back() - c.thresholds.front();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(Errc::InvalidParameter, "cannot format number");
  return std::string(buf, end);
}

util::Json evaluation_report_json(const std::vector<InstanceEval>& results, const ReportOptions& options) {
  std::vector<EvalCurve> curves;
  util::Json instances = util::Json::array();
  for (const auto& r : results) {
    const double scale = options.normalize_auc ? range_width(r.curve) : 1.0;
    util::Json j = util::Json::object();
    j["instance_id"] = r.instance_id;
    j["thresholds"] = r.curve.thresholds;
    j["precision"] = r.curve.precision;
    j["recall"] = r.curve.recall;
    j["f1"] = r.curve.f1;
    j["recall_auc"] = r.curve.auc_recall / scale;
    j["precision_auc"] = r.curve.auc_precision / scale;
    j["f1_auc"] = r.curve.auc_f1 / scale;
    instances.push_back(std::move(j));
    curves.push_back(r.curve);
  }
  util::Json report = util::Json::object();
  report["scorer"] = options.scorer;
  report["auc_normalized"] = options.normalize_auc;
  report["instance_count"] = results.size();
  if (!curves.empty()) {
    const auto means = aggregate_corpus(curves);
    const double scale = options.normalize_auc ? range_width(curves.front()) : 1.0;
    report["corpus"] = {{"recall_auc", means.recall_auc / scale},
                        {"precision_auc", means.precision_auc / scale},
                        {"f1_auc", means.f1_auc / scale}};
  } else {
    report["corpus"] = nullptr;
  }
  report["instances"] = std::move(instances);
  return report;
}

std::string evaluation_csv(const std::vector<InstanceEval>& results, const ReportOptions& options) {
  std::ostringstream out;
  out << "instance_id,recall_auc,precision_auc,f1_auc\n";
  for (const auto& r : results) {
    const double scale = options.normalize_auc ? range_width(r.curve) : 1.0;
    out << csv_cell(r.instance_id) << ',' << format_double(r.curve.auc_recall / scale) << ','
        << format_double(r.curve.auc_precision / scale) << ',' << format_double(r.curve.auc_f1 / scale) << '\n';
  }
  return out.str();
}

std::vector<std::pair<std::string, double>> read_metric_column(const std::filesystem::path& csv,
                                                               const std::string& metric) {
  std::ifstream in(csv);
  if (!in) throw Error(Errc::IoError, "cannot open " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::IoError, csv.string() + " is empty");
  const auto header = split_csv_line(line);
  std::size_t id_col = header.size();
  std::size_t metric_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "instance_id") id_col = i;
    if (header[i] == metric) metric_col = i;
  }
  if (id_col == header.size()) throw Error(Errc::IoError, csv.string() + " has no instance_id column");
  if (metric_col == header.size()) throw Error(Errc::InvalidParameter, csv.string() + " has no column " + metric);
  std::vector<std::pair<std::string, double>> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(Errc::RecordParseError, csv.string() + ":" + std::to_string(line_no) + ": wrong cell count");
    }
    const auto& text = cells[metric_col];
    double v = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) {
      throw Error(Errc::RecordParseError, csv.string() + ":" + std::to_string(line_no) + ": not a number");
    }
    out.emplace_back(cells[id_col], v);
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> pair_by_instance(
    const std::vector<std::pair<std::string, double>>& a, const std::vector<std::pair<std::string, double>>& b) {
  std::map<std::string, double> lookup;
  for (const auto& [id, v] : b) {
    if (!lookup.emplace(id, v).second) throw Error(Errc::InvalidParameter, "duplicate instance id " + id);
  }
  if (lookup.size() != a.size()) throw Error(Errc::InvalidParameter, "runs cover different instances");
  std::pair<std::vector<double>, std::vector<double>> out;
  for (const auto& [id, v] : a) {
    auto it = lookup.find(id);
    if (it == lookup.end()) throw Error(Errc::InvalidParameter, "instance " + id + " missing from run B");
    out.first.push_back(v);
    out.second.push_back(it->second);
  }
  return out;
}

util::Json significance_json(const std::string& method_a, const std::string& method_b, const std::string& metric,
                             const TTestResult& result) {
  util::Json j = util::Json::object();
  j["method_a"] = method_a;
  j["method_b"] = method_b;
  j["metric"] = metric;
  j["t"] = result.t;
  j["p"] = result.p;
  j["significant"] = result.significant;
  return j;
}

}  // namespace schemabench::eval
