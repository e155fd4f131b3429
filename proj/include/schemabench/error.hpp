#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schemabench {

enum class Errc {
  // schema / core
  MalformedJson,
  MissingField,
  DuplicateAspect,
  TooFewAspects,
  InvalidRecord,
  // gateway
  AuthError,
  RateLimited,
  TransportError,
  ProviderError,
  CacheIoError,
  NoJsonFound,
  UnbalancedJson,
  InvalidRequest,
  // numerics
  DimensionMismatch,
  InvalidParameter,
  LengthMismatch,
  TooFewSamples,
  EmptyCorpus,
  NotAPermutation,
  EmptyText,
  BackendError,
  ScorerError,
  // pipelines
  ParseError,
  GenerationParseError,
  UpdateParseError,
  NoConceptsSurvive,
  MissingIntent,
  MissingCaption,
  MissingFullText,
  MissingReference,
  NoNonCollidingAspect,
  InsufficientRecords,
  IoError,
  RecordParseError,
  LeakageDetected,
  ConfigError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure surfaced by the library carries one of the codes above so
/// callers (and tests) can branch on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Provider failure carrying the HTTP status (0 when the failure happened below HTTP).
class ProviderFailure : public Error {
 public:
  ProviderFailure(Errc code, int status, std::string body, int attempts)
      : Error(code, "status " + std::to_string(status) + " after " + std::to_string(attempts) +
                        " attempt(s): " + body),
        status_(status),
        body_(std::move(body)),
        attempts_(attempts) {}

  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  std::string body_;
  int attempts_;
};

}  // namespace schemabench
