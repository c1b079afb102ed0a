#pragma once

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "exrec/detail/utf8.hpp"
#include "exrec/error.hpp"
#include "exrec/text_pipeline.hpp"

namespace exrec {

struct Publication {
  std::string id;
  std::string title;
  std::string abstract;
  std::vector<Keyphrase> keyphrases;  // filled on ingest

  friend bool operator==(const Publication&, const Publication&) = default;
};

/// Keyphrase extraction settings shared by every ingest path.
struct IngestOptions {
  StopwordSet stopwords;
  ExtractionOptions extraction;
};

/// Builds a publication and attaches its keyphrases. A document without
/// candidate phrases gets an empty keyphrase list.
inline Publication make_publication(std::string id, std::string title, std::string abstract,
                                    const IngestOptions& ingest) {
  Publication pub{std::move(id), std::move(title), std::move(abstract), {}};
  try {
    pub.keyphrases = extract_keyphrases(pub.title, pub.abstract, ingest.stopwords, ingest.extraction);
  } catch (const Error& e) {
    if (e.code() != Errc::EmptyDocument) throw;
  }
  return pub;
}

struct CorpusLoad {
  std::vector<Publication> publications;  // file order
  std::size_t rejected = 0;               // records dropped for an empty title
};

/// Parses a corpus JSON array of {"id","title","abstract"} records.
/// `source` names the input in error messages.
inline CorpusLoad parse_corpus(const std::string& text, const IngestOptions& ingest,
                               const std::string& source = "<memory>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, source + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(Errc::ParseError, source + ": top level must be an array");

  CorpusLoad out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    const auto where = source + " record " + std::to_string(i);
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string()) {
      throw Error(Errc::ParseError, where + ": missing string field 'id'");
    }
    auto str_field = [&](const char* key) -> std::string {
      if (!rec.contains(key) || rec[key].is_null()) return {};
      if (!rec[key].is_string()) throw Error(Errc::ParseError, where + ": '" + key + "' must be a string");
      return rec[key].get<std::string>();
    };
    std::string id = rec["id"].get<std::string>();
    std::string title = str_field("title");
    std::string abstract = str_field("abstract");
    if (id.empty()) throw Error(Errc::ParseError, where + ": empty id");
    if (!seen.insert(id).second) throw Error(Errc::DuplicateId, id);
    if (title.find_first_not_of(" \t\r\n") == std::string::npos) {
      ++out.rejected;
      continue;
    }
    out.publications.push_back(make_publication(std::move(id), std::move(title), std::move(abstract), ingest));
  }
  return out;
}

inline CorpusLoad load_corpus(const std::string& path, const IngestOptions& ingest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open corpus file '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_corpus(text, ingest, path);
}

/// Case-folded search terms for an interest label: its non-stopword tokens,
/// or all tokens when every token is a stopword.
inline std::vector<std::string> interest_terms(std::string_view label, const StopwordSet& stopwords) {
  std::vector<std::string> all;
  std::vector<std::string> content;
  for (auto& t : tokenize(label)) {
    if (!stopwords.contains(t.text)) content.push_back(t.text);
    all.push_back(std::move(t.text));
  }
  return content.empty() ? all : content;
}

/// Corpus-mode candidate fetch: publications whose case-folded title or
/// abstract contains any interest term as a substring, ordered by id and
/// capped at `limit`.
inline std::vector<Publication> fetch_from_corpus(std::span<const std::string> interest_labels,
                                                  std::span<const Publication> corpus,
                                                  std::size_t limit, const StopwordSet& stopwords) {
  if (interest_labels.empty()) throw Error(Errc::InvalidArgument, "no interests to fetch for");
  if (limit < 1) throw Error(Errc::InvalidArgument, "limit must be >= 1");
  std::vector<std::string> terms;
  for (const auto& label : interest_labels) {
    for (auto& t : interest_terms(label, stopwords)) terms.push_back(std::move(t));
  }
  std::vector<const Publication*> hits;
  for (const auto& pub : corpus) {
    const auto haystack = detail::to_lower(pub.title) + "\n" + detail::to_lower(pub.abstract);
    const bool match = std::any_of(terms.begin(), terms.end(), [&](const std::string& term) {
      return haystack.find(term) != std::string::npos;
    });
    if (match) hits.push_back(&pub);
  }
  if (hits.empty()) throw Error(Errc::NoCandidates, "no publication mentions any interest");
  std::sort(hits.begin(), hits.end(), [](const Publication* a, const Publication* b) { return a->id < b->id; });
  if (hits.size() > limit) hits.resize(limit);
  std::vector<Publication> out;
  out.reserve(hits.size());
  for (const auto* p : hits) out.push_back(*p);
  return out;
}

}  // namespace exrec
