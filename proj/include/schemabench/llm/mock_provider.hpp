#pragma once

#include <deque>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "schemabench/llm/provider.hpp"

namespace schemabench::llm {

struct MockReply {
  int status = 200;                // non-200 raises AttemptFailure(status)
  bool transport_failure = false;  // raises AttemptFailure(0), e.g. a timeout
  std::string text;
  FinishReason finish_reason = FinishReason::Stop;
};

/// Deterministic offline provider. Two modes:
///  - scripted: the first rule whose pattern matches the prompt answers; each rule is a
///    FIFO of replies whose last entry repeats once the others are consumed;
///  - echo: every request receives the same canned schema text.
/// `{{seed_tag}}` and `{{model}}` in reply text are substituted from the request.
class MockProvider : public ChatProvider {
 public:
  using Handler = std::function<MockReply(const ChatRequest&)>;

  struct Rule {
    std::string pattern;
    bool is_regex = false;
    std::deque<MockReply> replies;
  };

  MockProvider() = default;
  explicit MockProvider(Handler handler);

  static MockProvider echo(std::string canned_schema_text);
  /// Loads a JSON script (see README for the format).
  static MockProvider from_script_file(const std::filesystem::path& path);
  static MockProvider from_script(const util::Json& script);

  MockProvider& add_rule(std::string pattern, std::vector<MockReply> replies, bool is_regex = false);
  MockProvider& set_fallback(MockReply reply);

  ChatCompletion complete(const ChatRequest& request) override;
  std::string name() const override { return "mock"; }

  std::size_t call_count() const;
  std::vector<ChatRequest> calls() const;
  void clear_calls();

  MockProvider(const MockProvider& other);
  MockProvider& operator=(const MockProvider&) = delete;

 private:
  MockReply next_reply(const ChatRequest& request);

  mutable std::mutex mutex_;
  Handler handler_;
  std::vector<Rule> rules_;
  std::optional<MockReply> fallback_;
  std::optional<std::string> echo_text_;
  std::vector<ChatRequest> calls_;
};

}  // namespace schemabench::llm
