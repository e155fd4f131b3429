#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "schemabench/llm/openai_provider.hpp"

#include "schemabench/error.hpp"

namespace schemabench::llm {

using util::Json;

HttpEndpoint HttpEndpoint::parse(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::ConfigError, "base URL needs a scheme: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  HttpEndpoint e;
  e.scheme_host_port = base_url.substr(0, path_start);
  e.path_prefix = path_start == std::string::npos ? "" : base_url.substr(path_start);
  while (!e.path_prefix.empty() && e.path_prefix.back() == '/') e.path_prefix.pop_back();
  return e;
}

OpenAiChatProvider::OpenAiChatProvider(OpenAiProviderOptions options)
    : options_(std::move(options)), endpoint_(HttpEndpoint::parse(options_.base_url)) {}

Json OpenAiChatProvider::request_body(const ChatRequest& r) {
  Json body = Json::object();
  body["model"] = r.model;
  body["messages"] = Json::array({Json{{"role", "system"}, {"content", r.system_prompt}},
                                  Json{{"role", "user"}, {"content", r.user_prompt}}});
  body["temperature"] = r.temperature;
  body["top_p"] = r.top_p;
  if (r.max_tokens) body["max_tokens"] = *r.max_tokens;
  return body;
}

ChatCompletion OpenAiChatProvider::parse_response(const std::string& body,
                                                  const std::string& fallback_model) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::exception& e) {
    throw AttemptFailure(502, std::string("unparseable provider response: ") + e.what());
  }
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty()) {
    throw AttemptFailure(502, "provider response without choices");
  }
  const Json& first = (*choices)[0];
  ChatCompletion c;
  if (auto msg = first.find("message"); msg != first.end() && msg->contains("content") &&
                                        (*msg)["content"].is_string()) {
    c.text = (*msg)["content"].get<std::string>();
  }
  c.finish_reason = finish_reason_from_name(
      first.contains("finish_reason") && first["finish_reason"].is_string()
          ? first["finish_reason"].get<std::string>()
          : "stop");
  c.model = j.value("model", fallback_model);
  if (auto usage = j.find("usage"); usage != j.end() && usage->is_object()) {
    c.usage = Usage{usage->value("prompt_tokens", std::int64_t{0}),
                    usage->value("completion_tokens", std::int64_t{0})};
  }
  return c;
}

ChatCompletion OpenAiChatProvider::complete(const ChatRequest& request) {
  httplib::Client client(endpoint_.scheme_host_port);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  client.set_write_timeout(options_.timeout);
  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);
  auto result = client.Post(endpoint_.path_prefix + "/chat/completions", headers,
                            util::dump_compact(request_body(request)), "application/json");
  if (!result) throw AttemptFailure(0, httplib::to_string(result.error()));
  if (result->status != 200) throw AttemptFailure(result->status, result->body);
  return parse_response(result->body, request.model);
}

}  // namespace schemabench::llm
