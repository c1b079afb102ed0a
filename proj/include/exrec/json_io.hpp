#pragma once

// JSON mapping for every value type that crosses a file or HTTP boundary.
// Payloads carry "schema_version": 1. Optional members are omitted when
// absent.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "exrec/corpus.hpp"
#include "exrec/explanation.hpp"
#include "exrec/interest_model.hpp"
#include "exrec/levels.hpp"
#include "exrec/recommender.hpp"
#include "exrec/whatif.hpp"

namespace exrec {

using nlohmann::json;

namespace detail {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) {
    v = j.at(key).get<T>();
  } else {
    v.reset();
  }
}

inline void check_schema(const json& j, const char* what) {
  if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion) {
    throw Error(Errc::ParseError, std::string(what) + ": unsupported schema_version");
  }
}

}  // namespace detail

// --- text / corpus -------------------------------------------------------------

inline void to_json(json& j, const PhraseSpan& s) {
  j = json{{"field", s.field == Field::Title ? "title" : "abstract"}, {"position", s.position}, {"length", s.length}};
}
inline void from_json(const json& j, PhraseSpan& s) {
  const auto field = j.at("field").get<std::string>();
  if (field != "title" && field != "abstract") throw Error(Errc::ParseError, "bad span field '" + field + "'");
  s.field = field == "title" ? Field::Title : Field::Abstract;
  j.at("position").get_to(s.position);
  j.at("length").get_to(s.length);
}

inline void to_json(json& j, const Keyphrase& k) {
  j = json{{"text", k.text}, {"salience", k.salience}, {"occurrences", k.occurrences}};
}
inline void from_json(const json& j, Keyphrase& k) {
  j.at("text").get_to(k.text);
  j.at("salience").get_to(k.salience);
  j.at("occurrences").get_to(k.occurrences);
}

inline void to_json(json& j, const Publication& p) {
  j = json{{"id", p.id}, {"title", p.title}, {"abstract", p.abstract}, {"keyphrases", p.keyphrases}};
}
inline void from_json(const json& j, Publication& p) {
  j.at("id").get_to(p.id);
  j.at("title").get_to(p.title);
  p.abstract = j.value("abstract", std::string());
  p.keyphrases = j.value("keyphrases", std::vector<Keyphrase>{});
}

// --- interests -------------------------------------------------------------------

inline void to_json(json& j, const Interest& i) {
  j = json{{"label", i.label}, {"weight", i.weight}};
  detail::put_optional(j, "color_index", i.color_index);
}
inline void from_json(const json& j, Interest& i) {
  j.at("label").get_to(i.label);
  j.at("weight").get_to(i.weight);
  detail::get_optional(j, "color_index", i.color_index);
}

inline void to_json(json& j, const InterestModel& m) {
  j = json{{"user_id", m.user_id()}, {"active_limit", m.active_limit()}, {"interests", m.interests()}};
}
inline void from_json(const json& j, InterestModel& m) {
  m = InterestModel::create(j.at("user_id").get<std::string>(), j.at("interests").get<std::vector<Interest>>(),
                            j.value("active_limit", kDefaultActiveInterests));
}

inline void to_json(json& j, const InterestEdit& e) {
  switch (e.op) {
    case EditOp::Add: j = json{{"op", "add"}, {"label", e.label}, {"weight", e.weight}}; break;
    case EditOp::Remove: j = json{{"op", "remove"}, {"label", e.label}}; break;
    case EditOp::Reweight: j = json{{"op", "reweight"}, {"label", e.label}, {"weight", e.weight}}; break;
  }
}
inline void from_json(const json& j, InterestEdit& e) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "edit must be an object");
  const auto op = j.value("op", std::string());
  if (!j.contains("label") || !j.at("label").is_string()) {
    throw Error(Errc::InvalidArgument, "edit requires a string 'label'");
  }
  e.label = j.at("label").get<std::string>();
  if (op == "remove") {
    e.op = EditOp::Remove;
    e.weight = 0.0;
    return;
  }
  if (op == "add") {
    e.op = EditOp::Add;
  } else if (op == "reweight") {
    e.op = EditOp::Reweight;
  } else {
    throw Error(Errc::InvalidArgument, "unknown edit op '" + op + "'");
  }
  if (!j.contains("weight") || !j.at("weight").is_number()) {
    throw Error(Errc::InvalidArgument, "edit '" + op + "' requires a numeric 'weight'");
  }
  e.weight = j.at("weight").get<double>();
}

/// Parses {"edits": [...]}.
inline std::vector<InterestEdit> parse_edits(const json& j) {
  if (!j.is_object() || !j.contains("edits") || !j.at("edits").is_array()) {
    throw Error(Errc::InvalidArgument, "expected an object with an 'edits' array");
  }
  return j.at("edits").get<std::vector<InterestEdit>>();
}

// --- recommendations -------------------------------------------------------------

inline void to_json(json& j, const ScoredRecommendation& r) {
  j = json{{"publication", r.publication},
           {"overall_score", r.overall_score},
           {"display_percent", r.display_percent},
           {"per_interest", r.per_interest},
           {"per_keyword", r.per_keyword},
           {"best_interest_per_keyword", r.best_interest_per_keyword}};
}
inline void from_json(const json& j, ScoredRecommendation& r) {
  j.at("publication").get_to(r.publication);
  j.at("overall_score").get_to(r.overall_score);
  j.at("display_percent").get_to(r.display_percent);
  j.at("per_interest").get_to(r.per_interest);
  j.at("per_keyword").get_to(r.per_keyword);
  j.at("best_interest_per_keyword").get_to(r.best_interest_per_keyword);
}

inline void to_json(json& j, const RecommendationSet& s) {
  j = json{{"threshold", s.threshold}, {"k", s.k}, {"items", s.items}, {"skipped", s.skipped}};
}
inline void from_json(const json& j, RecommendationSet& s) {
  j.at("threshold").get_to(s.threshold);
  j.at("k").get_to(s.k);
  j.at("items").get_to(s.items);
  s.skipped = j.value("skipped", std::vector<std::string>{});
}

// --- payloads --------------------------------------------------------------------

inline void to_json(json& j, const WhatPayload& p) {
  j = json{{"schema_version", kSchemaVersion}, {"interests", p.interests}};
}
inline void from_json(const json& j, WhatPayload& p) {
  detail::check_schema(j, "what");
  j.at("interests").get_to(p.interests);
}

inline void to_json(json& j, const BandSegment& b) {
  j = json{{"interest", b.interest}, {"color_index", b.color_index}, {"score", b.score}, {"percent", b.percent}};
}
inline void from_json(const json& j, BandSegment& b) {
  j.at("interest").get_to(b.interest);
  j.at("color_index").get_to(b.color_index);
  j.at("score").get_to(b.score);
  j.at("percent").get_to(b.percent);
}

inline void to_json(json& j, const CharSpan& s) { j = json::array({s.start, s.end}); }
inline void from_json(const json& j, CharSpan& s) {
  s.start = j.at(0).get<std::size_t>();
  s.end = j.at(1).get<std::size_t>();
}

inline void to_json(json& j, const HighlightedKeyword& h) {
  j = json{{"keyphrase", h.keyphrase}, {"interest", h.interest}, {"color_index", h.color_index},
           {"similarity", h.similarity}, {"spans", h.spans}};
}
inline void from_json(const json& j, HighlightedKeyword& h) {
  j.at("keyphrase").get_to(h.keyphrase);
  j.at("interest").get_to(h.interest);
  j.at("color_index").get_to(h.color_index);
  j.at("similarity").get_to(h.similarity);
  j.at("spans").get_to(h.spans);
}

inline void to_json(json& j, const WhyAbstractPayload& p) {
  j = json{{"schema_version", kSchemaVersion},
           {"display_percent", p.display_percent},
           {"band", p.band},
           {"highlighted_keywords", p.highlighted_keywords}};
}
inline void from_json(const json& j, WhyAbstractPayload& p) {
  detail::check_schema(j, "why_abstract");
  j.at("display_percent").get_to(p.display_percent);
  j.at("band").get_to(p.band);
  j.at("highlighted_keywords").get_to(p.highlighted_keywords);
}

inline void to_json(json& j, const TagCloudEntry& t) {
  j = json{{"keyphrase", t.keyphrase}, {"size", t.size}, {"salience", t.salience}};
}
inline void from_json(const json& j, TagCloudEntry& t) {
  j.at("keyphrase").get_to(t.keyphrase);
  j.at("size").get_to(t.size);
  j.at("salience").get_to(t.salience);
}

inline void to_json(json& j, const KeywordBar& b) {
  j = json{{"interest", b.interest}, {"color_index", b.color_index}, {"similarity", b.similarity}, {"percent", b.percent}};
}
inline void from_json(const json& j, KeywordBar& b) {
  j.at("interest").get_to(b.interest);
  j.at("color_index").get_to(b.color_index);
  j.at("similarity").get_to(b.similarity);
  j.at("percent").get_to(b.percent);
}

inline void to_json(json& j, const WhyDetailedPayload& p) {
  j = json{{"schema_version", kSchemaVersion}, {"tagcloud", p.tagcloud}, {"bars", p.bars}};
}
inline void from_json(const json& j, WhyDetailedPayload& p) {
  detail::check_schema(j, "why_detailed");
  j.at("tagcloud").get_to(p.tagcloud);
  j.at("bars").get_to(p.bars);
}

inline void to_json(json& j, const TracedVector& v) {
  j = json{{"label", v.label}, {"head", v.head}, {"norm", v.norm}};
  detail::put_optional(j, "values", v.values);
}
inline void from_json(const json& j, TracedVector& v) {
  j.at("label").get_to(v.label);
  j.at("head").get_to(v.head);
  j.at("norm").get_to(v.norm);
  detail::get_optional(j, "values", v.values);
}

inline void to_json(json& j, const TracedKeyphrase& k) { j = json{{"text", k.text}, {"salience", k.salience}}; }
inline void from_json(const json& j, TracedKeyphrase& k) {
  j.at("text").get_to(k.text);
  j.at("salience").get_to(k.salience);
}

inline void to_json(json& j, const HowTrace& t) {
  j = json{{"schema_version", kSchemaVersion},
           {"publication_id", t.publication_id},
           {"stage_names", t.stage_names},
           {"stage1", {{"interests", t.stage1.interests}, {"keyphrases", t.stage1.keyphrases}}},
           {"stage2",
            {{"interest_embeddings", t.stage2.interest_embeddings},
             {"keyphrase_embeddings", t.stage2.keyphrase_embeddings},
             {"model_embedding", t.stage2.model_embedding},
             {"publication_embedding", t.stage2.publication_embedding}}},
           {"stage3",
            {{"dot", t.stage3.dot},
             {"model_norm", t.stage3.model_norm},
             {"publication_norm", t.stage3.publication_norm},
             {"cosine", t.stage3.cosine},
             {"score", t.stage3.score},
             {"display_percent", t.stage3.display_percent}}}};
}
inline void from_json(const json& j, HowTrace& t) {
  detail::check_schema(j, "how");
  j.at("publication_id").get_to(t.publication_id);
  j.at("stage_names").get_to(t.stage_names);
  const auto& s1 = j.at("stage1");
  s1.at("interests").get_to(t.stage1.interests);
  s1.at("keyphrases").get_to(t.stage1.keyphrases);
  const auto& s2 = j.at("stage2");
  s2.at("interest_embeddings").get_to(t.stage2.interest_embeddings);
  s2.at("keyphrase_embeddings").get_to(t.stage2.keyphrase_embeddings);
  s2.at("model_embedding").get_to(t.stage2.model_embedding);
  s2.at("publication_embedding").get_to(t.stage2.publication_embedding);
  const auto& s3 = j.at("stage3");
  s3.at("dot").get_to(t.stage3.dot);
  s3.at("model_norm").get_to(t.stage3.model_norm);
  s3.at("publication_norm").get_to(t.stage3.publication_norm);
  s3.at("cosine").get_to(t.stage3.cosine);
  s3.at("score").get_to(t.stage3.score);
  s3.at("display_percent").get_to(t.stage3.display_percent);
}

inline void to_json(json& j, const PublicationStatus& s) {
  j = json{{"publication_id", s.publication_id}, {"status", status_name(s.status)}};
  j["old_score"] = s.old_score ? json(*s.old_score) : json(nullptr);
  j["new_score"] = s.new_score ? json(*s.new_score) : json(nullptr);
}
inline void from_json(const json& j, PublicationStatus& s) {
  j.at("publication_id").get_to(s.publication_id);
  const auto name = j.at("status").get<std::string>();
  bool known = false;
  for (auto st : {RecommendationStatus::UnchangedRecommended, RecommendationStatus::NewlyRecommended,
                  RecommendationStatus::NoLongerRecommended, RecommendationStatus::UnchangedAbsent}) {
    if (status_name(st) == name) {
      s.status = st;
      known = true;
    }
  }
  if (!known) throw Error(Errc::ParseError, "unknown status '" + name + "'");
  detail::get_optional(j, "old_score", s.old_score);
  detail::get_optional(j, "new_score", s.new_score);
}

inline void to_json(json& j, const WhatIfDiff& d) {
  j = json{{"schema_version", kSchemaVersion}, {"statuses", d.statuses}, {"new_recommendations", d.new_recommendations}};
}
inline void from_json(const json& j, WhatIfDiff& d) {
  detail::check_schema(j, "what_if");
  j.at("statuses").get_to(d.statuses);
  j.at("new_recommendations").get_to(d.new_recommendations);
}

inline void to_json(json& j, const ExplanationBundle& b) {
  j = json{{"schema_version", kSchemaVersion},
           {"level", level_name(b.level)},
           {"completeness", code(completeness_of(b.level))},
           {"soundness", code(soundness_of(b.level))},
           {"publication_id", b.publication_id}};
  detail::put_optional(j, "what", b.what);
  if (b.what_if) {
    j["what_if"] = *b.what_if;
  } else if (b.what_if_on_demand) {
    j["what_if"] = json{{"on_demand", true}};
  }
  detail::put_optional(j, "why_abstract", b.why_abstract);
  detail::put_optional(j, "why_detailed", b.why_detailed);
  detail::put_optional(j, "how", b.how);
}
inline void from_json(const json& j, ExplanationBundle& b) {
  detail::check_schema(j, "bundle");
  const auto level = parse_level(j.at("level").get<std::string>());
  if (!level) throw Error(Errc::ParseError, "unknown level");
  b.level = *level;
  j.at("publication_id").get_to(b.publication_id);
  detail::get_optional(j, "what", b.what);
  b.what_if.reset();
  b.what_if_on_demand = false;
  if (j.contains("what_if")) {
    const auto& w = j.at("what_if");
    if (w.value("on_demand", false)) {
      b.what_if_on_demand = true;
    } else {
      b.what_if = w.get<WhatIfDiff>();
    }
  }
  detail::get_optional(j, "why_abstract", b.why_abstract);
  detail::get_optional(j, "why_detailed", b.why_detailed);
  detail::get_optional(j, "how", b.how);
}

/// The level table and the validity of all nine combinations.
inline json levels_table() {
  json levels = json::array();
  for (auto level : kAllLevels) {
    json types = json::array();
    for (auto t : types_for_level(level)) types.push_back(type_name(t));
    levels.push_back({{"level", level_name(level)},
                      {"completeness", grade_name(completeness_of(level))},
                      {"soundness", grade_name(soundness_of(level))},
                      {"code", std::string(code(completeness_of(level))) + std::string(code(soundness_of(level)))},
                      {"types", types}});
  }
  json combos = json::array();
  for (int c = 0; c < 3; ++c) {
    for (int s = 0; s < 3; ++s) {
      const auto comp = static_cast<Completeness>(c);
      const auto sound = static_cast<Soundness>(s);
      const auto v = validate_combination(comp, sound);
      json row = {{"completeness", grade_name(comp)},
                  {"soundness", grade_name(sound)},
                  {"code", std::string(code(comp)) + std::string(code(sound))},
                  {"valid", v.valid}};
      if (v.level) row["level"] = level_name(*v.level);
      if (v.reason) {
        row["reason"] = reason_name(*v.reason);
        row["message"] = reason_message(*v.reason);
      }
      combos.push_back(std::move(row));
    }
  }
  return json{{"schema_version", kSchemaVersion}, {"levels", levels}, {"combinations", combos}};
}

}  // namespace exrec
