#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "exrec/corpus.hpp"
#include "exrec/embedding_store.hpp"
#include "exrec/error.hpp"
#include "exrec/interest_model.hpp"

namespace exrec {

inline constexpr double kDefaultThreshold = 0.40;
inline constexpr std::size_t kDefaultTopK = 10;

/// round-half-up(100 · score)
inline int to_percent(double score) { return static_cast<int>(std::floor(100.0 * score + 0.5)); }

struct ScoredRecommendation {
  Publication publication;
  double overall_score = 0.0;
  int display_percent = 0;
  std::map<std::string, double> per_interest;
  std::map<std::string, std::map<std::string, double>> per_keyword;
  std::map<std::string, std::string> best_interest_per_keyword;

  friend bool operator==(const ScoredRecommendation&, const ScoredRecommendation&) = default;
};

struct RecommendationSet {
  std::vector<ScoredRecommendation> items;  // overall_score descending, then id
  double threshold = kDefaultThreshold;
  std::size_t k = kDefaultTopK;
  std::vector<std::string> skipped;  // candidates without an embeddable keyphrase

  friend bool operator==(const RecommendationSet&, const RecommendationSet&) = default;
};

/// Weighted average of the active interests' phrase embeddings.
inline EmbeddingVector model_embedding(const InterestModel& model, const EmbeddingStore& store) {
  std::vector<EmbeddingVector> vectors;
  std::vector<double> weights;
  for (const auto& interest : model.active()) {
    if (auto v = store.phrase_embedding(interest.label)) {
      vectors.push_back(std::move(*v));
      weights.push_back(interest.weight);
    }
  }
  if (vectors.empty()) throw Error(Errc::NoEmbeddableInterests, "user " + model.user_id());
  return weighted_average(vectors, weights);
}

/// Salience-weighted average of the publication's keyphrase embeddings.
inline EmbeddingVector publication_embedding(const Publication& pub, const EmbeddingStore& store) {
  std::vector<EmbeddingVector> vectors;
  std::vector<double> weights;
  for (const auto& kp : pub.keyphrases) {
    if (auto v = store.phrase_embedding(kp.text)) {
      vectors.push_back(std::move(*v));
      weights.push_back(kp.salience);
    }
  }
  if (vectors.empty()) throw Error(Errc::NoEmbeddableKeyphrases, "publication " + pub.id);
  return weighted_average(vectors, weights);
}

/// Model-side embeddings computed once and reused across candidates.
class ScoringContext {
 public:
  ScoringContext(const InterestModel& model, const EmbeddingStore& store)
      : store_(&store), model_vector_(model_embedding(model, store)) {
    for (const auto& interest : model.active()) {
      interests_.push_back({interest.label, store.phrase_embedding(interest.label)});
    }
  }

  const EmbeddingVector& model_vector() const noexcept { return model_vector_; }

  ScoredRecommendation score(const Publication& pub) const {
    const auto pub_vector = publication_embedding(pub, *store_);
    ScoredRecommendation rec;
    rec.publication = pub;
    rec.overall_score = std::max(0.0, cosine_similarity(model_vector_, pub_vector));
    rec.display_percent = to_percent(rec.overall_score);
    for (const auto& [label, vec] : interests_) {
      rec.per_interest[label] = vec ? std::max(0.0, cosine_similarity(*vec, pub_vector)) : 0.0;
    }
    for (const auto& kp : pub.keyphrases) {
      const auto kp_vector = store_->phrase_embedding(kp.text);
      if (!kp_vector) continue;
      auto& row = rec.per_keyword[kp.text];
      // Active order is weight-descending then label-ascending, so keeping
      // the first strict maximum applies the attribution tie rule.
      std::optional<std::pair<std::string, double>> best;
      for (const auto& [label, vec] : interests_) {
        const double sim = vec ? std::max(0.0, cosine_similarity(*kp_vector, *vec)) : 0.0;
        row[label] = sim;
        if (!best || sim > best->second) best = std::make_pair(label, sim);
      }
      if (best) rec.best_interest_per_keyword[kp.text] = best->first;
    }
    return rec;
  }

 private:
  const EmbeddingStore* store_;
  EmbeddingVector model_vector_;
  std::vector<std::pair<std::string, std::optional<EmbeddingVector>>> interests_;
};

inline ScoredRecommendation score(const InterestModel& model, const Publication& pub,
                                  const EmbeddingStore& store) {
  return ScoringContext(model, store).score(pub);
}

struct ScoredPool {
  std::vector<ScoredRecommendation> scored;  // candidate order
  std::vector<std::string> skipped;
};

/// Scores every candidate. Work is split across threads; each result lands
/// in its candidate's slot so the output is independent of scheduling.
inline ScoredPool score_all(const InterestModel& model, std::span<const Publication> candidates,
                            const EmbeddingStore& store, unsigned threads = 0) {
  const ScoringContext ctx(model, store);
  std::vector<std::optional<ScoredRecommendation>> slots(candidates.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        slots[i] = ctx.score(candidates[i]);
      } catch (const Error& e) {
        if (e.code() != Errc::NoEmbeddableKeyphrases) throw;
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t chunks = std::min<std::size_t>(threads, (candidates.size() + 31) / 32);
  if (chunks <= 1) {
    work(0, candidates.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(chunks);
    const std::size_t per = (candidates.size() + chunks - 1) / chunks;
    for (std::size_t c = 0; c < chunks; ++c) {
      pool.emplace_back([&, c] {
        try {
          work(c * per, std::min(candidates.size(), (c + 1) * per));
        } catch (...) {
          failures[c] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  ScoredPool out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      out.scored.push_back(std::move(*slots[i]));
    } else {
      out.skipped.push_back(candidates[i].id);
    }
  }
  return out;
}

inline void validate_selection(std::size_t k, double threshold) {
  if (k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(Errc::InvalidArgument, "threshold must be in [0, 1]");
  }
}

/// Keeps scores strictly above `threshold`, sorts by score descending then
/// id, truncates to `k`.
inline RecommendationSet select_top(ScoredPool pool, std::size_t k, double threshold) {
  validate_selection(k, threshold);
  RecommendationSet set;
  set.k = k;
  set.threshold = threshold;
  set.skipped = std::move(pool.skipped);
  for (auto& rec : pool.scored) {
    if (rec.overall_score > threshold) set.items.push_back(std::move(rec));
  }
  std::sort(set.items.begin(), set.items.end(), [](const auto& a, const auto& b) {
    if (a.overall_score != b.overall_score) return a.overall_score > b.overall_score;
    return a.publication.id < b.publication.id;
  });
  if (set.items.size() > k) set.items.resize(k);
  return set;
}

inline RecommendationSet recommend(const InterestModel& model, std::span<const Publication> candidates,
                                   const EmbeddingStore& store, std::size_t k = kDefaultTopK,
                                   double threshold = kDefaultThreshold) {
  validate_selection(k, threshold);
  if (candidates.empty()) throw Error(Errc::InvalidArgument, "no candidates to score");
  return select_top(score_all(model, candidates, store), k, threshold);
}

}  // namespace exrec
