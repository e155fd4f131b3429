#pragma once

#include <string>
#include <utility>

#include "schemabench/error.hpp"
#include "schemabench/llm/gateway.hpp"

namespace schemabench::llm {

/// True for errors that mean "the reply did not have the requested shape".
bool is_reply_format_error(Errc code) noexcept;

/// The request sent after a malformed reply: format reminder appended, distinct seed tag.
ChatRequest reask_request(ChatRequest request);

std::string reply_excerpt(const std::string& text);

/// Completes `request` and parses the reply with `parse`. A reply-format failure triggers
/// exactly one re-ask; a second failure throws `failure` with the raw reply attached.
template <typename Parse>
auto complete_structured(Gateway& gateway, const ChatRequest& request, const std::string& stage, Errc failure,
                         const std::string& context, Parse&& parse) -> decltype(parse(std::string{})) {
  {
    auto first = gateway.complete(request, stage);
    try {
      return parse(first.text);
    } catch (const Error& e) {
      if (!is_reply_format_error(e.code())) throw;
    }
  }
  auto second = gateway.complete(reask_request(request), stage);
  try {
    return parse(second.text);
  } catch (const Error& e) {
    if (!is_reply_format_error(e.code())) throw;
    throw Error(failure, context + ": " + e.what() + "; raw reply: " + reply_excerpt(second.text));
  }
}

}  // namespace schemabench::llm
