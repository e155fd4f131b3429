#include "schemabench/llm/mock_provider.hpp"

#include <fstream>
#include <sstream>

#include "schemabench/error.hpp"

namespace schemabench::llm {

using util::Json;

namespace {

void replace_all(std::string& text, const std::string& from, const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

MockReply reply_from_json(const Json& j) {
  MockReply reply;
  if (j.is_string()) {
    reply.text = j.get<std::string>();
    return reply;
  }
  if (!j.is_object()) throw Error(Errc::ConfigError, "mock reply must be a string or an object");
  if (auto it = j.find("json"); it != j.end()) {
    reply.text = util::dump_indented(*it, 2);
  } else {
    reply.text = j.value("text", "");
  }
  reply.status = j.value("status", 200);
  reply.transport_failure = j.contains("transport_error");
  reply.finish_reason = finish_reason_from_name(j.value("finish_reason", "stop"));
  return reply;
}

}  // namespace

MockProvider::MockProvider(Handler handler) : handler_(std::move(handler)) {}

MockProvider::MockProvider(const MockProvider& other) {
  std::lock_guard lock(other.mutex_);
  handler_ = other.handler_;
  rules_ = other.rules_;
  fallback_ = other.fallback_;
  echo_text_ = other.echo_text_;
  calls_ = other.calls_;
}

MockProvider MockProvider::echo(std::string canned_schema_text) {
  MockProvider p;
  p.echo_text_ = std::move(canned_schema_text);
  return p;
}

MockProvider MockProvider::from_script(const Json& script) {
  if (!script.is_object()) throw Error(Errc::ConfigError, "mock script must be a JSON object");
  const std::string mode = script.value("mode", "scripted");
  if (mode == "echo") {
    auto it = script.find("echo_schema");
    if (it == script.end()) throw Error(Errc::ConfigError, "echo mode requires 'echo_schema'");
    return echo(it->is_string() ? it->get<std::string>() : util::dump_indented(*it, 4));
  }
  if (mode != "scripted") throw Error(Errc::ConfigError, "unknown mock mode '" + mode + "'");
  MockProvider p;
  if (auto rules = script.find("rules"); rules != script.end()) {
    for (const auto& rule : *rules) {
      std::vector<MockReply> replies;
      for (const auto& r : rule.at("replies")) replies.push_back(reply_from_json(r));
      if (replies.empty()) throw Error(Errc::ConfigError, "mock rule without replies");
      p.add_rule(rule.at("match").get<std::string>(), std::move(replies), rule.value("regex", false));
    }
  }
  if (auto fb = script.find("default"); fb != script.end()) p.set_fallback(reply_from_json(*fb));
  return p;
}

MockProvider MockProvider::from_script_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open mock script " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return from_script(Json::parse(buffer.str()));
  } catch (const Json::exception& e) {
    throw Error(Errc::ConfigError, "mock script " + path.string() + ": " + e.what());
  }
}

MockProvider& MockProvider::add_rule(std::string pattern, std::vector<MockReply> replies, bool is_regex) {
  std::lock_guard lock(mutex_);
  rules_.push_back(Rule{std::move(pattern), is_regex, std::deque<MockReply>(replies.begin(), replies.end())});
  return *this;
}

MockProvider& MockProvider::set_fallback(MockReply reply) {
  std::lock_guard lock(mutex_);
  fallback_ = std::move(reply);
  return *this;
}

MockReply MockProvider::next_reply(const ChatRequest& request) {
  if (handler_) return handler_(request);
  if (echo_text_) return MockReply{200, false, *echo_text_, FinishReason::Stop};
  const std::string haystack = request.system_prompt + "\n" + request.user_prompt;
  for (auto& rule : rules_) {
    const bool matched = rule.is_regex ? std::regex_search(haystack, std::regex(rule.pattern))
                                       : haystack.find(rule.pattern) != std::string::npos;
    if (!matched) continue;
    MockReply reply = rule.replies.front();
    if (rule.replies.size() > 1) rule.replies.pop_front();
    return reply;
  }
  if (fallback_) return *fallback_;
  return MockReply{404, false, "no mock rule matched the prompt", FinishReason::Error};
}

ChatCompletion MockProvider::complete(const ChatRequest& request) {
  MockReply reply;
  {
    std::lock_guard lock(mutex_);
    calls_.push_back(request);
    reply = next_reply(request);
  }
  if (reply.transport_failure) throw AttemptFailure(0, "mock transport failure");
  if (reply.status != 200) throw AttemptFailure(reply.status, reply.text);
  replace_all(reply.text, "{{seed_tag}}", request.seed_tag.value_or(""));
  replace_all(reply.text, "{{model}}", request.model);
  ChatCompletion c;
  c.text = std::move(reply.text);
  c.model = request.model;
  c.finish_reason = reply.finish_reason;
  c.usage = Usage{static_cast<std::int64_t>(request.user_prompt.size() / 4),
                  static_cast<std::int64_t>(c.text.size() / 4)};
  return c;
}

std::size_t MockProvider::call_count() const {
  std::lock_guard lock(mutex_);
  return calls_.size();
}

std::vector<ChatRequest> MockProvider::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

void MockProvider::clear_calls() {
  std::lock_guard lock(mutex_);
  calls_.clear();
}

}  // namespace schemabench::llm
