#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace exrec {

enum class Errc {
  // embedding_store
  MalformedLine,
  DimensionMismatch,
  DuplicateToken,
  EmptyVocabulary,
  EmptyInput,
  AllZeroWeights,
  ZeroVector,
  // text_pipeline
  EmptyDocument,
  // interest_model
  NoUsablePhrases,
  UnknownLabel,
  DuplicateLabel,
  WeightOutOfRange,
  LabelNotEmbeddable,
  // corpus
  ParseError,
  DuplicateId,
  NoCandidates,
  RemoteUnavailable,
  RateLimited,
  // recommender
  NoEmbeddableInterests,
  NoEmbeddableKeyphrases,
  // whatif
  ScenarioEmpty,
  // level_composer / service
  InvalidCombination,
  InvalidArgument,
  NotFound,
  Io,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DuplicateToken: return "DuplicateToken";
    case Errc::EmptyVocabulary: return "EmptyVocabulary";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::AllZeroWeights: return "AllZeroWeights";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::NoUsablePhrases: return "NoUsablePhrases";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::WeightOutOfRange: return "WeightOutOfRange";
    case Errc::LabelNotEmbeddable: return "LabelNotEmbeddable";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::NoCandidates: return "NoCandidates";
    case Errc::RemoteUnavailable: return "RemoteUnavailable";
    case Errc::RateLimited: return "RateLimited";
    case Errc::NoEmbeddableInterests: return "NoEmbeddableInterests";
    case Errc::NoEmbeddableKeyphrases: return "NoEmbeddableKeyphrases";
    case Errc::ScenarioEmpty: return "ScenarioEmpty";
    case Errc::InvalidCombination: return "InvalidCombination";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotFound: return "NotFound";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure
/// class; `what()` carries the human-readable detail (line number, token,
/// label, ...).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// True for failures caused by bad input values rather than I/O or remote
/// services. The CLI maps these to exit code 2 and the HTTP layer to 400.
inline bool is_validation_error(Errc code) noexcept {
  switch (code) {
    case Errc::Io:
    case Errc::ParseError:
    case Errc::RemoteUnavailable:
    case Errc::RateLimited:
    case Errc::NotFound:
      return false;
    default:
      return true;
  }
}

}  // namespace exrec
