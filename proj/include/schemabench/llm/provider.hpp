#pragma once

#include <stdexcept>
#include <string>

#include "schemabench/llm/chat.hpp"

namespace schemabench::llm {

/// Raised by providers for a single failed attempt. status == 0 means the request never
/// produced an HTTP response (connection failure, timeout).
class AttemptFailure : public std::runtime_error {
 public:
  AttemptFailure(int status, std::string body)
      : std::runtime_error("attempt failed with status " + std::to_string(status) + ": " + body),
        status_(status),
        body_(std::move(body)) {}

  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }

 private:
  int status_;
  std::string body_;
};

/// One chat-completion backend. Implementations perform exactly one attempt per call and
/// must be safe to call from several threads.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual ChatCompletion complete(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

}  // namespace schemabench::llm
