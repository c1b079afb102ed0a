#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exrec/interest_model.hpp"
#include "exrec/recommender.hpp"

namespace exrec {

enum class RecommendationStatus { UnchangedRecommended, NewlyRecommended, NoLongerRecommended, UnchangedAbsent };

constexpr std::string_view status_name(RecommendationStatus s) noexcept {
  switch (s) {
    case RecommendationStatus::UnchangedRecommended: return "unchanged_recommended";
    case RecommendationStatus::NewlyRecommended: return "newly_recommended";
    case RecommendationStatus::NoLongerRecommended: return "no_longer_recommended";
    case RecommendationStatus::UnchangedAbsent: return "unchanged_absent";
  }
  return "unknown";
}

struct WhatIfScenario {
  InterestModel base_model;
  std::vector<InterestEdit> edits;
};

struct PublicationStatus {
  std::string publication_id;
  RecommendationStatus status = RecommendationStatus::UnchangedAbsent;
  std::optional<double> old_score;  // absent when the publication could not be scored
  std::optional<double> new_score;

  friend bool operator==(const PublicationStatus&, const PublicationStatus&) = default;
};

struct WhatIfDiff {
  std::vector<PublicationStatus> statuses;  // ordered by publication id
  RecommendationSet new_recommendations;

  friend bool operator==(const WhatIfDiff&, const WhatIfDiff&) = default;
};

/// Rescores the same candidate pool under the edited model and classifies
/// each publication by its membership in the baseline and edited
/// recommendation sets. Neither the base model nor the candidates change.
inline WhatIfDiff run_scenario(const WhatIfScenario& scenario, std::span<const Publication> candidates,
                               const EmbeddingStore& store, std::size_t k = kDefaultTopK,
                               double threshold = kDefaultThreshold) {
  validate_selection(k, threshold);
  const auto edited = edit_interests(scenario.base_model, scenario.edits, store);
  if (edited.interests().empty()) throw Error(Errc::ScenarioEmpty, "the edits remove every interest");

  auto old_pool = score_all(scenario.base_model, candidates, store);
  auto new_pool = score_all(edited, candidates, store);

  std::map<std::string, PublicationStatus> rows;
  for (const auto& pub : candidates) rows[pub.id].publication_id = pub.id;
  for (const auto& rec : old_pool.scored) rows[rec.publication.id].old_score = rec.overall_score;
  for (const auto& rec : new_pool.scored) rows[rec.publication.id].new_score = rec.overall_score;

  const auto baseline = select_top(std::move(old_pool), k, threshold);
  WhatIfDiff diff;
  diff.new_recommendations = select_top(std::move(new_pool), k, threshold);

  std::set<std::string> before;
  std::set<std::string> after;
  for (const auto& rec : baseline.items) before.insert(rec.publication.id);
  for (const auto& rec : diff.new_recommendations.items) after.insert(rec.publication.id);

  for (auto& [id, row] : rows) {
    const bool was = before.contains(id);
    const bool is = after.contains(id);
    row.status = was ? (is ? RecommendationStatus::UnchangedRecommended : RecommendationStatus::NoLongerRecommended)
                     : (is ? RecommendationStatus::NewlyRecommended : RecommendationStatus::UnchangedAbsent);
    diff.statuses.push_back(std::move(row));
  }
  return diff;
}

}  // namespace exrec
