#include "schemabench/error.hpp"

namespace schemabench {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedJson: return "MalformedJson";
    case Errc::MissingField: return "MissingField";
    case Errc::DuplicateAspect: return "DuplicateAspect";
    case Errc::TooFewAspects: return "TooFewAspects";
    case Errc::InvalidRecord: return "InvalidRecord";
    case Errc::AuthError: return "AuthError";
    case Errc::RateLimited: return "RateLimited";
    case Errc::TransportError: return "TransportError";
    case Errc::ProviderError: return "ProviderError";
    case Errc::CacheIoError: return "CacheIoError";
    case Errc::NoJsonFound: return "NoJsonFound";
    case Errc::UnbalancedJson: return "UnbalancedJson";
    case Errc::InvalidRequest: return "InvalidRequest";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::NotAPermutation: return "NotAPermutation";
    case Errc::EmptyText: return "EmptyText";
    case Errc::BackendError: return "BackendError";
    case Errc::ScorerError: return "ScorerError";
    case Errc::ParseError: return "ParseError";
    case Errc::GenerationParseError: return "GenerationParseError";
    case Errc::UpdateParseError: return "UpdateParseError";
    case Errc::NoConceptsSurvive: return "NoConceptsSurvive";
    case Errc::MissingIntent: return "MissingIntent";
    case Errc::MissingCaption: return "MissingCaption";
    case Errc::MissingFullText: return "MissingFullText";
    case Errc::MissingReference: return "MissingReference";
    case Errc::NoNonCollidingAspect: return "NoNonCollidingAspect";
    case Errc::InsufficientRecords: return "InsufficientRecords";
    case Errc::IoError: return "IoError";
    case Errc::RecordParseError: return "RecordParseError";
    case Errc::LeakageDetected: return "LeakageDetected";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace schemabench
