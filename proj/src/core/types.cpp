#include "schemabench/core/types.hpp"

#include <set>

#include "schemabench/error.hpp"

namespace schemabench::core {

using Json = nlohmann::ordered_json;

void validate_instance(const TableInstance& instance) {
  if (instance.instance_id.empty()) throw Error(Errc::InvalidRecord, "empty instance_id");
  if (instance.papers.empty()) {
    throw Error(Errc::InvalidRecord, instance.instance_id + ": table has no papers");
  }
  std::set<std::string> ids;
  for (const auto& p : instance.papers) {
    if (p.paper_id.empty()) throw Error(Errc::InvalidRecord, instance.instance_id + ": empty paper_id");
    if (!ids.insert(p.paper_id).second) {
      throw Error(Errc::InvalidRecord, instance.instance_id + ": duplicate paper_id " + p.paper_id);
    }
    if (p.title.empty()) {
      throw Error(Errc::InvalidRecord, instance.instance_id + ": paper " + p.paper_id + " has no title");
    }
  }
  if (instance.reference_schema) instance.reference_schema->validate(ValidationMode::Relaxed);
}

namespace {

std::string get_string(const Json& j, const char* key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(Errc::InvalidRecord, context + ": field '" + key + "' missing or not a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> get_optional_string(const Json& j, const char* key,
                                               const std::string& context) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(Errc::InvalidRecord, context + ": field '" + key + "' is not a string");
  }
  return it->get<std::string>();
}

}  // namespace

TableInstance instance_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidRecord, "record is not a JSON object");
  TableInstance inst;
  inst.instance_id = get_string(j, "instance_id", "record");
  const std::string& ctx = inst.instance_id;

  auto papers = j.find("papers");
  if (papers == j.end() || !papers->is_array()) {
    throw Error(Errc::InvalidRecord, ctx + ": 'papers' missing or not an array");
  }
  for (const auto& pj : *papers) {
    if (!pj.is_object()) throw Error(Errc::InvalidRecord, ctx + ": paper entry is not an object");
    PaperRecord p;
    p.paper_id = get_string(pj, "paper_id", ctx);
    p.title = get_string(pj, "title", ctx);
    p.abstract = get_optional_string(pj, "abstract", ctx).value_or("");
    p.full_text = get_optional_string(pj, "full_text", ctx);
    p.citation_key = get_optional_string(pj, "citation_key", ctx);
    inst.papers.push_back(std::move(p));
  }

  inst.caption = get_optional_string(j, "caption", ctx);
  if (auto it = j.find("in_text_refs"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw Error(Errc::InvalidRecord, ctx + ": 'in_text_refs' is not an array");
    std::vector<std::string> refs;
    for (const auto& r : *it) {
      if (!r.is_string()) throw Error(Errc::InvalidRecord, ctx + ": in-text reference is not a string");
      refs.push_back(r.get<std::string>());
    }
    inst.in_text_refs = std::move(refs);
  }
  inst.intent = get_optional_string(j, "intent", ctx);
  if (auto it = j.find("reference_schema"); it != j.end() && !it->is_null()) {
    try {
      inst.reference_schema = schema_from_json(*it, ValidationMode::Relaxed);
    } catch (const Error& e) {
      throw Error(e.code(), ctx + ": reference_schema: " + e.what());
    }
  }
  inst.table_values = get_optional_string(j, "table_values", ctx);
  validate_instance(inst);
  return inst;
}

Json instance_to_json(const TableInstance& inst) {
  Json j = Json::object();
  j["instance_id"] = inst.instance_id;
  Json papers = Json::array();
  for (const auto& p : inst.papers) {
    Json pj = Json::object();
    pj["paper_id"] = p.paper_id;
    pj["title"] = p.title;
    pj["abstract"] = p.abstract;
    if (p.full_text) pj["full_text"] = *p.full_text;
    if (p.citation_key) pj["citation_key"] = *p.citation_key;
    papers.push_back(std::move(pj));
  }
  j["papers"] = std::move(papers);
  if (inst.caption) j["caption"] = *inst.caption;
  if (inst.in_text_refs) j["in_text_refs"] = *inst.in_text_refs;
  if (inst.intent) j["intent"] = *inst.intent;
  if (inst.reference_schema) j["reference_schema"] = schema_to_json(*inst.reference_schema);
  if (inst.table_values) j["table_values"] = *inst.table_values;
  return j;
}

}  // namespace schemabench::core
