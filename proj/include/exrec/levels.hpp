#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "exrec/error.hpp"
#include "exrec/explanation.hpp"
#include "exrec/whatif.hpp"

namespace exrec {

enum class IntelligibilityType { What, WhatIf, WhyAbstract, WhyDetailed, How };
enum class Completeness { Low, Medium, High };
enum class Soundness { Low, Medium, High };
enum class ExplanationLevel { Basic, Intermediate, Advanced };

inline constexpr std::array<IntelligibilityType, 5> kAllTypes = {
    IntelligibilityType::What, IntelligibilityType::WhatIf, IntelligibilityType::WhyAbstract,
    IntelligibilityType::WhyDetailed, IntelligibilityType::How};
inline constexpr std::array<ExplanationLevel, 3> kAllLevels = {
    ExplanationLevel::Basic, ExplanationLevel::Intermediate, ExplanationLevel::Advanced};

constexpr std::string_view type_name(IntelligibilityType t) noexcept {
  switch (t) {
    case IntelligibilityType::What: return "what";
    case IntelligibilityType::WhatIf: return "what_if";
    case IntelligibilityType::WhyAbstract: return "why_abstract";
    case IntelligibilityType::WhyDetailed: return "why_detailed";
    case IntelligibilityType::How: return "how";
  }
  return "";
}

constexpr std::string_view level_name(ExplanationLevel l) noexcept {
  switch (l) {
    case ExplanationLevel::Basic: return "basic";
    case ExplanationLevel::Intermediate: return "intermediate";
    case ExplanationLevel::Advanced: return "advanced";
  }
  return "";
}

/// "low" | "medium" | "high"
template <typename E>
constexpr std::string_view grade_name(E e) noexcept {
  switch (static_cast<int>(e)) {
    case 0: return "low";
    case 1: return "medium";
    default: return "high";
  }
}

/// Short codes LC/MC/HC and LS/MS/HS.
constexpr std::string_view code(Completeness c) noexcept {
  return c == Completeness::Low ? "LC" : c == Completeness::Medium ? "MC" : "HC";
}
constexpr std::string_view code(Soundness s) noexcept {
  return s == Soundness::Low ? "LS" : s == Soundness::Medium ? "MS" : "HS";
}

inline std::optional<ExplanationLevel> parse_level(std::string_view s) {
  for (auto l : kAllLevels) {
    if (level_name(l) == s) return l;
  }
  return std::nullopt;
}

template <typename E>
std::optional<E> parse_grade(std::string_view s) {
  for (int i = 0; i < 3; ++i) {
    if (grade_name(static_cast<E>(i)) == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

inline std::optional<IntelligibilityType> parse_type(std::string_view s) {
  for (auto t : kAllTypes) {
    if (type_name(t) == s) return t;
  }
  return std::nullopt;
}

// --- combination lattice ------------------------------------------------------

enum class RejectionReason { Oversimplification, OverComplexity, SoundnessWithoutCompleteness };

constexpr std::string_view reason_name(RejectionReason r) noexcept {
  switch (r) {
    case RejectionReason::Oversimplification: return "Oversimplification";
    case RejectionReason::OverComplexity: return "OverComplexity";
    case RejectionReason::SoundnessWithoutCompleteness: return "SoundnessWithoutCompleteness";
  }
  return "";
}

constexpr std::string_view reason_message(RejectionReason r) noexcept {
  switch (r) {
    case RejectionReason::Oversimplification:
      return "low completeness is ineffective and oversimplifies the system";
    case RejectionReason::OverComplexity:
      return "high soundness without high completeness causes over-complexity";
    case RejectionReason::SoundnessWithoutCompleteness:
      return "high completeness is only paired with high soundness";
  }
  return "";
}

struct CombinationVerdict {
  bool valid = false;
  std::optional<RejectionReason> reason;
  std::optional<ExplanationLevel> level;  // set when valid

  friend bool operator==(const CombinationVerdict&, const CombinationVerdict&) = default;
};

/// Valid combinations: MC-LS (basic), MC-MS (intermediate), HC-HS (advanced).
constexpr CombinationVerdict validate_combination(Completeness c, Soundness s) noexcept {
  if (c == Completeness::Low) return {false, RejectionReason::Oversimplification, std::nullopt};
  if (c == Completeness::Medium) {
    if (s == Soundness::Low) return {true, std::nullopt, ExplanationLevel::Basic};
    if (s == Soundness::Medium) return {true, std::nullopt, ExplanationLevel::Intermediate};
    return {false, RejectionReason::OverComplexity, std::nullopt};
  }
  if (s == Soundness::High) return {true, std::nullopt, ExplanationLevel::Advanced};
  return {false, RejectionReason::SoundnessWithoutCompleteness, std::nullopt};
}

constexpr Completeness completeness_of(ExplanationLevel l) noexcept {
  return l == ExplanationLevel::Advanced ? Completeness::High : Completeness::Medium;
}

constexpr Soundness soundness_of(ExplanationLevel l) noexcept {
  switch (l) {
    case ExplanationLevel::Basic: return Soundness::Low;
    case ExplanationLevel::Intermediate: return Soundness::Medium;
    case ExplanationLevel::Advanced: return Soundness::High;
  }
  return Soundness::Low;
}

/// Resolves a (completeness, soundness) request; invalid pairs are client
/// errors carrying the rejection reason.
inline ExplanationLevel level_for(Completeness c, Soundness s) {
  const auto verdict = validate_combination(c, s);
  if (!verdict.valid) {
    throw Error(Errc::InvalidCombination,
                std::string(code(c)) + std::string(code(s)) + " rejected (" + std::string(reason_name(*verdict.reason)) +
                    "): " + std::string(reason_message(*verdict.reason)));
  }
  return *verdict.level;
}

inline std::set<IntelligibilityType> types_for_level(ExplanationLevel level) {
  std::set<IntelligibilityType> types = {IntelligibilityType::What, IntelligibilityType::WhatIf,
                                         IntelligibilityType::WhyAbstract};
  if (level != ExplanationLevel::Basic) types.insert(IntelligibilityType::WhyDetailed);
  if (level == ExplanationLevel::Advanced) types.insert(IntelligibilityType::How);
  return types;
}

// --- bundle assembly ------------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

struct ExplanationBundle {
  ExplanationLevel level = ExplanationLevel::Basic;
  std::string publication_id;
  std::optional<WhatPayload> what;
  std::optional<WhatIfDiff> what_if;  // null with what_if_on_demand set when no diff was supplied
  bool what_if_on_demand = false;
  std::optional<WhyAbstractPayload> why_abstract;
  std::optional<WhyDetailedPayload> why_detailed;
  std::optional<HowTrace> how;

  /// Types whose payload (or on-demand marker) is present.
  std::set<IntelligibilityType> types() const {
    std::set<IntelligibilityType> out;
    if (what) out.insert(IntelligibilityType::What);
    if (what_if || what_if_on_demand) out.insert(IntelligibilityType::WhatIf);
    if (why_abstract) out.insert(IntelligibilityType::WhyAbstract);
    if (why_detailed) out.insert(IntelligibilityType::WhyDetailed);
    if (how) out.insert(IntelligibilityType::How);
    return out;
  }

  friend bool operator==(const ExplanationBundle&, const ExplanationBundle&) = default;
};

struct AssemblyOptions {
  double highlight_threshold = kDefaultHighlightThreshold;
  bool full_vectors = false;
};

/// Builds exactly the payloads of the level's intelligibility types.
inline ExplanationBundle assemble(ExplanationLevel level, const InterestModel& model,
                                  const ScoredRecommendation& rec, const EmbeddingStore& store,
                                  const WhatIfDiff* diff = nullptr, const AssemblyOptions& opts = {}) {
  ExplanationBundle bundle;
  bundle.level = level;
  bundle.publication_id = rec.publication.id;
  for (auto type : types_for_level(level)) {
    switch (type) {
      case IntelligibilityType::What:
        bundle.what = build_what(model);
        break;
      case IntelligibilityType::WhatIf:
        if (diff) {
          bundle.what_if = *diff;
        } else {
          bundle.what_if_on_demand = true;
        }
        break;
      case IntelligibilityType::WhyAbstract:
        bundle.why_abstract = build_why_abstract(rec, model, opts.highlight_threshold);
        break;
      case IntelligibilityType::WhyDetailed:
        bundle.why_detailed = build_why_detailed(rec, model);
        break;
      case IntelligibilityType::How:
        bundle.how = build_how_trace(model, rec, store, opts.full_vectors);
        break;
    }
  }
  return bundle;
}

}  // namespace exrec
