#pragma once

// The shared core behind both the HTTP service and the batch CLI: loads the
// embedding table, stopwords and corpus once, and turns profiles, models and
// scenarios into JSON responses.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "exrec/corpus.hpp"
#include "exrec/embedding_store.hpp"
#include "exrec/interest_model.hpp"
#include "exrec/json_io.hpp"
#include "exrec/levels.hpp"
#include "exrec/recommender.hpp"
#include "exrec/remote_catalog.hpp"
#include "exrec/whatif.hpp"

namespace exrec {

struct ServiceConfig {
  std::string embedding_path;
  std::string corpus_path;
  std::string stopword_path;  // empty: built-in list
  std::string data_dir = "exrec-data";
  double threshold = kDefaultThreshold;
  std::size_t top_k = kDefaultTopK;
  std::size_t top_interests = kDefaultActiveInterests;
  std::size_t inferred_interests = 20;  // interests kept by inference
  double highlight_threshold = kDefaultHighlightThreshold;
  std::size_t candidate_limit = 100;
  std::size_t keyphrases_per_publication = 10;
  double title_boost = 1.5;
  int port = 8080;
  std::string host = "127.0.0.1";
  RemoteCatalogConfig remote_catalog;

  /// Range checks only; file readability is checked when the engine loads.
  void validate() const {
    auto unit = [](double v, const char* name) {
      if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::InvalidArgument, std::string(name) + " must be in [0, 1]");
    };
    unit(threshold, "threshold");
    unit(highlight_threshold, "highlight_threshold");
    auto positive = [](std::size_t v, const char* name) {
      if (v < 1) throw Error(Errc::InvalidArgument, std::string(name) + " must be >= 1");
    };
    positive(top_k, "top_k");
    positive(top_interests, "top_interests");
    positive(inferred_interests, "inferred_interests");
    positive(candidate_limit, "candidate_limit");
    positive(keyphrases_per_publication, "keyphrases_per_publication");
    if (!(title_boost > 0.0)) throw Error(Errc::InvalidArgument, "title_boost must be positive");
    if (port < 0 || port > 65535) throw Error(Errc::InvalidArgument, "port out of range");
    if (embedding_path.empty()) throw Error(Errc::InvalidArgument, "embedding_path is required");
    if (corpus_path.empty() && !remote_catalog.enabled) {
      throw Error(Errc::InvalidArgument, "corpus_path is required unless the remote catalog is enabled");
    }
  }
};

/// Overlays the keys present in `j` onto `cfg`.
inline void apply_config_json(ServiceConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "config must be a JSON object");
  auto set = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  try {
    set("embedding_path", cfg.embedding_path);
    set("corpus_path", cfg.corpus_path);
    set("stopword_path", cfg.stopword_path);
    set("data_dir", cfg.data_dir);
    set("threshold", cfg.threshold);
    set("top_k", cfg.top_k);
    set("top_interests", cfg.top_interests);
    set("inferred_interests", cfg.inferred_interests);
    set("highlight_threshold", cfg.highlight_threshold);
    set("candidate_limit", cfg.candidate_limit);
    set("keyphrases_per_publication", cfg.keyphrases_per_publication);
    set("title_boost", cfg.title_boost);
    set("port", cfg.port);
    set("host", cfg.host);
    if (j.contains("remote_catalog")) {
      const auto& r = j.at("remote_catalog");
      auto& rc = cfg.remote_catalog;
      if (r.contains("enabled")) r.at("enabled").get_to(rc.enabled);
      if (r.contains("base_url")) r.at("base_url").get_to(rc.base_url);
      if (r.contains("search_path")) r.at("search_path").get_to(rc.search_path);
      if (r.contains("per_query_limit")) r.at("per_query_limit").get_to(rc.per_query_limit);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("bad config value: ") + e.what());
  }
}

inline ServiceConfig load_config_file(const std::string& path, ServiceConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
  apply_config_json(base, j);
  return base;
}

/// Reads EXREC_<KEY> variables (e.g. EXREC_THRESHOLD, EXREC_TOP_K,
/// EXREC_REMOTE_CATALOG_ENABLED). `getenv` is injectable for tests.
template <typename Getenv = decltype(&std::getenv)>
void apply_env_overrides(ServiceConfig& cfg, Getenv getenv = &std::getenv) {
  nlohmann::json j = nlohmann::json::object();
  auto str = [&](const char* var, const char* key) {
    if (const char* v = getenv(var)) j[key] = std::string(v);
  };
  auto num = [&](const char* var, const char* key) {
    if (const char* v = getenv(var)) {
      try {
        j[key] = nlohmann::json::parse(v);
      } catch (const nlohmann::json::parse_error&) {
        throw Error(Errc::InvalidArgument, std::string(var) + " is not a number");
      }
    }
  };
  str("EXREC_EMBEDDING_PATH", "embedding_path");
  str("EXREC_CORPUS_PATH", "corpus_path");
  str("EXREC_STOPWORD_PATH", "stopword_path");
  str("EXREC_DATA_DIR", "data_dir");
  str("EXREC_HOST", "host");
  num("EXREC_THRESHOLD", "threshold");
  num("EXREC_TOP_K", "top_k");
  num("EXREC_TOP_INTERESTS", "top_interests");
  num("EXREC_HIGHLIGHT_THRESHOLD", "highlight_threshold");
  num("EXREC_CANDIDATE_LIMIT", "candidate_limit");
  num("EXREC_PORT", "port");
  if (const char* v = getenv("EXREC_REMOTE_CATALOG_ENABLED")) {
    j["remote_catalog"]["enabled"] = std::string(v) == "1" || std::string(v) == "true";
  }
  if (const char* v = getenv("EXREC_REMOTE_CATALOG_URL")) j["remote_catalog"]["base_url"] = std::string(v);
  apply_config_json(cfg, j);
}

/// Options controlling one recommendations response.
struct ResponseOptions {
  ExplanationLevel level = ExplanationLevel::Basic;
  bool full_vectors = false;
};

class Engine {
 public:
  explicit Engine(ServiceConfig config) : config_(std::move(config)) {
    config_.validate();
    store_ = EmbeddingStore::load(config_.embedding_path);
    ingest_.stopwords = config_.stopword_path.empty() ? StopwordSet() : StopwordSet::load(config_.stopword_path);
    ingest_.extraction.max_phrases = config_.keyphrases_per_publication;
    ingest_.extraction.title_boost = config_.title_boost;
    if (!config_.corpus_path.empty()) {
      auto loaded = load_corpus(config_.corpus_path, ingest_);
      corpus_ = std::move(loaded.publications);
      rejected_records_ = loaded.rejected;
    }
  }

  const ServiceConfig& config() const noexcept { return config_; }
  const EmbeddingStore& store() const noexcept { return store_; }
  const IngestOptions& ingest() const noexcept { return ingest_; }
  const std::vector<Publication>& corpus() const noexcept { return corpus_; }
  std::size_t rejected_records() const noexcept { return rejected_records_; }

  /// Profile JSON: {"user_id", "publications": [...], optional
  /// "manual_interests": [{"label","weight"}]}. Manual interests bypass
  /// inference.
  InterestModel model_from_profile(const nlohmann::json& profile) const {
    if (!profile.is_object() || !profile.contains("user_id") || !profile.at("user_id").is_string()) {
      throw Error(Errc::InvalidArgument, "profile requires a string 'user_id'");
    }
    const auto user_id = profile.at("user_id").get<std::string>();
    if (user_id.empty() || user_id.find_first_of("/\\.") != std::string::npos) {
      throw Error(Errc::InvalidArgument, "user_id must be non-empty and contain no '/', '\\' or '.'");
    }
    if (profile.contains("manual_interests") && !profile.at("manual_interests").empty()) {
      std::vector<Interest> interests;
      try {
        for (const auto& row : profile.at("manual_interests")) {
          interests.push_back({row.at("label").get<std::string>(), row.at("weight").get<double>(), std::nullopt});
        }
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("bad manual_interests: ") + e.what());
      }
      for (const auto& i : interests) {
        if (!store_.phrase_embedding(normalize_label(i.label))) throw Error(Errc::LabelNotEmbeddable, i.label);
      }
      return InterestModel::create(user_id, std::move(interests), config_.top_interests);
    }
    std::vector<Publication> pubs;
    if (profile.contains("publications")) {
      try {
        for (const auto& row : profile.at("publications")) {
          pubs.push_back(make_publication(row.value("id", std::string()), row.value("title", std::string()),
                                          row.value("abstract", std::string()), ingest_));
        }
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("bad publications: ") + e.what());
      }
    }
    return infer_interests(user_id, pubs, store_, config_.inferred_interests, config_.top_interests);
  }

  /// Candidate pool for a model: corpus scan or remote catalog.
  std::vector<Publication> candidates_for(const InterestModel& model) const {
    std::vector<std::string> labels;
    for (const auto& i : model.active()) labels.push_back(i.label);
    if (config_.remote_catalog.enabled) {
      RemoteCatalogClient client(config_.remote_catalog);
      return to_publications(client.fetch(labels, config_.candidate_limit), ingest_);
    }
    return fetch_from_corpus(labels, corpus_, config_.candidate_limit, ingest_.stopwords);
  }

  RecommendationSet recommend_for(const InterestModel& model, const std::vector<Publication>& candidates) const {
    return recommend(model, candidates, store_, config_.top_k, config_.threshold);
  }

  AssemblyOptions assembly(bool full_vectors) const {
    return {config_.highlight_threshold, full_vectors};
  }

  /// Recommendations with one explanation bundle per item.
  nlohmann::json recommendations_response(const InterestModel& model, const ResponseOptions& opts) const {
    const auto candidates = candidates_for(model);
    const auto set = recommend_for(model, candidates);
    nlohmann::json items = nlohmann::json::array();
    std::size_t rank = 0;
    for (const auto& rec : set.items) {
      const auto bundle = assemble(opts.level, model, rec, store_, nullptr, assembly(opts.full_vectors));
      items.push_back({{"rank", ++rank},
                       {"publication", {{"id", rec.publication.id},
                                        {"title", rec.publication.title},
                                        {"abstract", rec.publication.abstract}}},
                       {"overall_score", rec.overall_score},
                       {"display_percent", rec.display_percent},
                       {"explanation", bundle}});
    }
    return {{"schema_version", kSchemaVersion},
            {"user_id", model.user_id()},
            {"level", level_name(opts.level)},
            {"threshold", set.threshold},
            {"k", set.k},
            {"candidates", candidates.size()},
            {"items", items},
            {"skipped", set.skipped}};
  }

  /// Scores for one candidate publication, below-threshold ones included.
  ScoredRecommendation score_candidate(const InterestModel& model, const std::string& publication_id) const {
    for (const auto& pub : candidates_for(model)) {
      if (pub.id == publication_id) return score(model, pub, store_);
    }
    throw Error(Errc::NotFound, "publication '" + publication_id + "' is not a candidate for this user");
  }

  WhatIfDiff whatif(const InterestModel& model, std::vector<InterestEdit> edits) const {
    const auto candidates = candidates_for(model);
    return run_scenario({model, std::move(edits)}, candidates, store_, config_.top_k, config_.threshold);
  }

  /// Every scored candidate in score order, regardless of threshold.
  nlohmann::json all_scores(const InterestModel& model) const {
    const auto candidates = candidates_for(model);
    auto pool = score_all(model, candidates, store_);
    std::sort(pool.scored.begin(), pool.scored.end(), [](const auto& a, const auto& b) {
      if (a.overall_score != b.overall_score) return a.overall_score > b.overall_score;
      return a.publication.id < b.publication.id;
    });
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& rec : pool.scored) {
      rows.push_back({{"publication_id", rec.publication.id},
                      {"overall_score", rec.overall_score},
                      {"display_percent", rec.display_percent},
                      {"above_threshold", rec.overall_score > config_.threshold}});
    }
    return {{"user_id", model.user_id()}, {"threshold", config_.threshold}, {"scores", rows}, {"skipped", pool.skipped}};
  }

 private:
  ServiceConfig config_;
  EmbeddingStore store_;
  IngestOptions ingest_;
  std::vector<Publication> corpus_;
  std::size_t rejected_records_ = 0;
};

}  // namespace exrec
