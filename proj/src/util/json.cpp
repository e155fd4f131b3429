#include "schemabench/util/json.hpp"

#include <set>

#include "schemabench/error.hpp"

namespace schemabench::util {

namespace {

struct Frame {
  bool is_object = false;
  std::string parent_key;
  std::set<std::string> keys;
};

}  // namespace

Json parse_ordered(std::string_view text, std::vector<DuplicateKey>* duplicates) {
  std::vector<Frame> stack;
  std::string last_key;
  auto callback = [&](int /*depth*/, Json::parse_event_t event, Json& parsed) {
    switch (event) {
      case Json::parse_event_t::object_start:
        stack.push_back(Frame{true, last_key, {}});
        break;
      case Json::parse_event_t::array_start:
        stack.push_back(Frame{false, last_key, {}});
        break;
      case Json::parse_event_t::object_end:
      case Json::parse_event_t::array_end:
        if (!stack.empty()) stack.pop_back();
        break;
      case Json::parse_event_t::key: {
        std::string key = parsed.get<std::string>();
        if (!stack.empty() && !stack.back().keys.insert(key).second && duplicates != nullptr) {
          duplicates->push_back(
              DuplicateKey{static_cast<int>(stack.size()), stack.back().parent_key, key});
        }
        last_key = std::move(key);
        break;
      }
      case Json::parse_event_t::value:
        break;
    }
    return true;
  };
  try {
    return Json::parse(text.begin(), text.end(), callback);
  } catch (const Json::exception& e) {
    throw Error(Errc::MalformedJson, e.what());
  }
}

std::string dump_compact(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string dump_indented(const Json& j, int indent) {
  return j.dump(indent, ' ', false, Json::error_handler_t::replace);
}

}  // namespace schemabench::util
