#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exrec/detail/utf8.hpp"
#include "exrec/embedding_store.hpp"
#include "exrec/interest_model.hpp"
#include "exrec/recommender.hpp"

namespace exrec {

inline constexpr double kDefaultHighlightThreshold = 0.40;
inline constexpr std::size_t kTraceHeadComponents = 5;

inline constexpr std::array<std::string_view, 3> kHowStageNames = {
    "get user interests and publication keyphrases",
    "generate embeddings",
    "compute similarity",
};

// --- What -------------------------------------------------------------------

struct WhatPayload {
  std::vector<Interest> interests;  // active set, canonical order

  friend bool operator==(const WhatPayload&, const WhatPayload&) = default;
};

inline WhatPayload build_what(const InterestModel& model) {
  return {std::vector<Interest>(model.active().begin(), model.active().end())};
}

// --- Why (abstract) -----------------------------------------------------------

struct BandSegment {
  std::string interest;
  int color_index = 0;
  double score = 0.0;
  int percent = 0;

  friend bool operator==(const BandSegment&, const BandSegment&) = default;
};

/// [start, end) in Unicode code points of the abstract.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct HighlightedKeyword {
  std::string keyphrase;
  std::string interest;  // most similar interest
  int color_index = 0;
  double similarity = 0.0;
  std::vector<CharSpan> spans;  // empty when the phrase only occurs in the title

  friend bool operator==(const HighlightedKeyword&, const HighlightedKeyword&) = default;
};

struct WhyAbstractPayload {
  int display_percent = 0;
  std::vector<BandSegment> band;
  std::vector<HighlightedKeyword> highlighted_keywords;

  friend bool operator==(const WhyAbstractPayload&, const WhyAbstractPayload&) = default;
};

/// Case-insensitive occurrences of a space-joined token phrase in `text`.
/// A space in the phrase matches any run of non-alphanumeric, non-clause
/// characters; matches must sit on word boundaries.
inline std::vector<CharSpan> find_phrase_spans(std::string_view text, std::string_view phrase) {
  std::vector<char32_t> hay;
  for (std::size_t i = 0; i < text.size();) {
    const auto d = detail::decode_utf8(text, i);
    hay.push_back(detail::to_lower_cp(d.cp));
    i += d.length;
  }
  std::vector<char32_t> needle;
  for (std::size_t i = 0; i < phrase.size();) {
    const auto d = detail::decode_utf8(phrase, i);
    needle.push_back(detail::to_lower_cp(d.cp));
    i += d.length;
  }
  std::vector<CharSpan> spans;
  if (needle.empty()) return spans;

  auto is_gap = [](char32_t c) { return !detail::is_alnum_cp(c) && !detail::is_clause_delimiter(c); };
  std::size_t start = 0;
  while (start < hay.size()) {
    if (start > 0 && detail::is_alnum_cp(hay[start - 1])) {
      ++start;
      continue;
    }
    std::size_t h = start;
    std::size_t n = 0;
    bool ok = true;
    while (n < needle.size()) {
      if (needle[n] == U' ') {
        if (h >= hay.size() || !is_gap(hay[h])) { ok = false; break; }
        while (h < hay.size() && is_gap(hay[h])) ++h;
        ++n;
      } else {
        if (h >= hay.size() || hay[h] != needle[n]) { ok = false; break; }
        ++h;
        ++n;
      }
    }
    if (ok && (h == hay.size() || !detail::is_alnum_cp(hay[h]))) {
      spans.push_back({start, h});
      start = h;
    } else {
      ++start;
    }
  }
  return spans;
}

/// Band in active order; a keyphrase is highlighted when the similarity to
/// its best interest is at least `highlight_threshold`.
inline WhyAbstractPayload build_why_abstract(const ScoredRecommendation& rec, const InterestModel& model,
                                             double highlight_threshold = kDefaultHighlightThreshold) {
  WhyAbstractPayload out;
  out.display_percent = rec.display_percent;
  for (const auto& interest : model.active()) {
    const auto it = rec.per_interest.find(interest.label);
    const double s = it == rec.per_interest.end() ? 0.0 : it->second;
    out.band.push_back({interest.label, interest.color_index.value_or(0), s, to_percent(s)});
  }
  for (const auto& kp : rec.publication.keyphrases) {
    const auto best = rec.best_interest_per_keyword.find(kp.text);
    if (best == rec.best_interest_per_keyword.end()) continue;
    const double sim = rec.per_keyword.at(kp.text).at(best->second);
    if (sim < highlight_threshold) continue;
    const auto* interest = model.find(best->second);
    out.highlighted_keywords.push_back({kp.text, best->second,
                                        interest ? interest->color_index.value_or(0) : 0, sim,
                                        find_phrase_spans(rec.publication.abstract, kp.text)});
  }
  return out;
}

// --- Why (detailed) ----------------------------------------------------------

struct TagCloudEntry {
  std::string keyphrase;
  double size = 0.0;  // salience / max salience
  double salience = 0.0;

  friend bool operator==(const TagCloudEntry&, const TagCloudEntry&) = default;
};

struct KeywordBar {
  std::string interest;
  int color_index = 0;
  double similarity = 0.0;
  int percent = 0;

  friend bool operator==(const KeywordBar&, const KeywordBar&) = default;
};

struct WhyDetailedPayload {
  std::vector<TagCloudEntry> tagcloud;                    // publication keyphrase order
  std::map<std::string, std::vector<KeywordBar>> bars;    // one bar per active interest

  friend bool operator==(const WhyDetailedPayload&, const WhyDetailedPayload&) = default;
};

inline WhyDetailedPayload build_why_detailed(const ScoredRecommendation& rec, const InterestModel& model) {
  WhyDetailedPayload out;
  double max_salience = 0.0;
  for (const auto& kp : rec.publication.keyphrases) {
    if (rec.per_keyword.contains(kp.text)) max_salience = std::max(max_salience, kp.salience);
  }
  for (const auto& kp : rec.publication.keyphrases) {
    const auto row = rec.per_keyword.find(kp.text);
    if (row == rec.per_keyword.end()) continue;
    out.tagcloud.push_back({kp.text, max_salience > 0.0 ? kp.salience / max_salience : 0.0, kp.salience});
    auto& bars = out.bars[kp.text];
    for (const auto& interest : model.active()) {
      const auto it = row->second.find(interest.label);
      const double s = it == row->second.end() ? 0.0 : it->second;
      bars.push_back({interest.label, interest.color_index.value_or(0), s, to_percent(s)});
    }
  }
  return out;
}

// --- How ---------------------------------------------------------------------

/// A vector as shown in the trace: its first components and norm, plus the
/// full values when requested.
struct TracedVector {
  std::string label;
  std::vector<double> head;
  double norm = 0.0;
  std::optional<std::vector<double>> values;

  friend bool operator==(const TracedVector&, const TracedVector&) = default;
};

inline TracedVector trace_vector(std::string label, const EmbeddingVector& v, bool full) {
  const auto values = v.values();
  TracedVector out;
  out.label = std::move(label);
  out.head.assign(values.begin(), values.begin() + std::min(values.size(), kTraceHeadComponents));
  out.norm = v.norm();
  if (full) out.values = std::vector<double>(values.begin(), values.end());
  return out;
}

struct TracedKeyphrase {
  std::string text;
  double salience = 0.0;

  friend bool operator==(const TracedKeyphrase&, const TracedKeyphrase&) = default;
};

struct HowStage1 {
  std::vector<Interest> interests;
  std::vector<TracedKeyphrase> keyphrases;

  friend bool operator==(const HowStage1&, const HowStage1&) = default;
};

struct HowStage2 {
  std::vector<TracedVector> interest_embeddings;
  std::vector<TracedVector> keyphrase_embeddings;
  TracedVector model_embedding;        // always carries full values
  TracedVector publication_embedding;  // always carries full values

  friend bool operator==(const HowStage2&, const HowStage2&) = default;
};

struct HowStage3 {
  double dot = 0.0;
  double model_norm = 0.0;
  double publication_norm = 0.0;
  double cosine = 0.0;  // before clamping negatives to zero
  double score = 0.0;
  int display_percent = 0;

  friend bool operator==(const HowStage3&, const HowStage3&) = default;
};

struct HowTrace {
  std::string publication_id;
  std::vector<std::string> stage_names;
  HowStage1 stage1;
  HowStage2 stage2;
  HowStage3 stage3;

  friend bool operator==(const HowTrace&, const HowTrace&) = default;
};

/// Records the pipeline values behind one recommendation. The aggregates are
/// produced by the same functions the recommender scores with.
inline HowTrace build_how_trace(const InterestModel& model, const ScoredRecommendation& rec,
                                const EmbeddingStore& store, bool full_vectors = false) {
  HowTrace trace;
  trace.publication_id = rec.publication.id;
  trace.stage_names.assign(kHowStageNames.begin(), kHowStageNames.end());

  for (const auto& interest : model.active()) trace.stage1.interests.push_back(interest);
  for (const auto& kp : rec.publication.keyphrases) trace.stage1.keyphrases.push_back({kp.text, kp.salience});

  for (const auto& interest : model.active()) {
    if (auto v = store.phrase_embedding(interest.label)) {
      trace.stage2.interest_embeddings.push_back(trace_vector(interest.label, *v, full_vectors));
    }
  }
  for (const auto& kp : rec.publication.keyphrases) {
    if (auto v = store.phrase_embedding(kp.text)) {
      trace.stage2.keyphrase_embeddings.push_back(trace_vector(kp.text, *v, full_vectors));
    }
  }
  const auto user_vector = model_embedding(model, store);
  const auto pub_vector = publication_embedding(rec.publication, store);
  trace.stage2.model_embedding = trace_vector("interest model", user_vector, true);
  trace.stage2.publication_embedding = trace_vector("publication", pub_vector, true);

  auto& s3 = trace.stage3;
  s3.dot = dot(user_vector, pub_vector);
  s3.model_norm = user_vector.norm();
  s3.publication_norm = pub_vector.norm();
  s3.cosine = cosine_similarity(user_vector, pub_vector);
  s3.score = std::max(0.0, s3.cosine);
  s3.display_percent = to_percent(s3.score);
  return trace;
}

}  // namespace exrec
