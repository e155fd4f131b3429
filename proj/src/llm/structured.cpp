#include "schemabench/llm/structured.hpp"

#include "schemabench/prompts/render.hpp"
#include "schemabench/util/text.hpp"

namespace schemabench::llm {

bool is_reply_format_error(Errc code) noexcept {
  switch (code) {
    case Errc::NoJsonFound:
    case Errc::UnbalancedJson:
    case Errc::MalformedJson:
    case Errc::MissingField:
    case Errc::DuplicateAspect:
    case Errc::TooFewAspects:
    case Errc::ParseError:
      return true;
    default:
      return false;
  }
}

ChatRequest reask_request(ChatRequest request) {
  request.user_prompt += "\n\n";
  request.user_prompt += prompts::kFormatReminder;
  request.seed_tag = request.seed_tag.value_or("") + "#reask";
  return request;
}

std::string reply_excerpt(const std::string& text) {
  constexpr std::size_t kLimit = 2000;
  if (text.size() <= kLimit) return text;
  return util::truncate_utf8(text, kLimit) + "...";
}

}  // namespace schemabench::llm
