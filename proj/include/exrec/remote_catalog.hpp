#pragma once

// Client for a scholarly-catalog keyword search endpoint (Semantic Scholar
// Graph API shape). One query per interest label; results are merged,
// deduplicated by id and normalised into Publications.
//
// Response field table:
//   data[].paperId  -> Publication.id
//   data[].title    -> Publication.title     (records without a title are dropped)
//   data[].abstract -> Publication.abstract  (null -> "")

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "exrec/corpus.hpp"
#include "exrec/error.hpp"

namespace exrec {

struct RemoteCatalogConfig {
  bool enabled = false;
  std::string base_url = "https://api.semanticscholar.org";
  std::string search_path = "/graph/v1/paper/search";
  std::string fields = "paperId,title,abstract";
  std::size_t per_query_limit = 100;
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{10};
};

struct CatalogRecord {
  std::string id;
  std::string title;
  std::string abstract;

  friend bool operator==(const CatalogRecord&, const CatalogRecord&) = default;
};

/// Maps one search response body onto catalog records.
inline std::vector<CatalogRecord> normalize_search_response(const nlohmann::json& body) {
  std::vector<CatalogRecord> out;
  if (!body.is_object() || !body.contains("data")) return out;
  const auto& data = body.at("data");
  if (!data.is_array()) throw Error(Errc::ParseError, "catalog response: 'data' is not an array");
  for (const auto& row : data) {
    if (!row.is_object()) continue;
    const auto id = row.value("paperId", nlohmann::json()).is_string() ? row.at("paperId").get<std::string>() : "";
    const auto title = row.contains("title") && row.at("title").is_string() ? row.at("title").get<std::string>() : "";
    if (id.empty() || title.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const auto abstract =
        row.contains("abstract") && row.at("abstract").is_string() ? row.at("abstract").get<std::string>() : "";
    out.push_back({id, title, abstract});
  }
  return out;
}

/// Union of per-label results, ordered by id, first record per id kept,
/// capped at `limit`.
inline std::vector<CatalogRecord> merge_catalog_results(std::vector<std::vector<CatalogRecord>> per_label,
                                                        std::size_t limit) {
  std::vector<CatalogRecord> all;
  for (auto& batch : per_label) {
    for (auto& rec : batch) all.push_back(std::move(rec));
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  all.erase(std::unique(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.id == b.id; }),
            all.end());
  if (all.size() > limit) all.resize(limit);
  return all;
}

class RemoteCatalogClient {
 public:
  explicit RemoteCatalogClient(RemoteCatalogConfig config) : config_(std::move(config)) {}

  const RemoteCatalogConfig& config() const noexcept { return config_; }

  /// One search call with retry and exponential backoff on connection
  /// failures, 429 and 5xx.
  std::vector<CatalogRecord> search(const std::string& query) const {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    const httplib::Params params = {{"query", query},
                                    {"fields", config_.fields},
                                    {"limit", std::to_string(config_.per_query_limit)}};
    auto backoff = config_.initial_backoff;
    int last_status = 0;
    for (int attempt = 1; attempt <= std::max(1, config_.attempts); ++attempt) {
      auto res = client.Get(config_.search_path, params, httplib::Headers{});
      if (res && res->status == 200) {
        nlohmann::json body;
        try {
          body = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::parse_error& e) {
          throw Error(Errc::RemoteUnavailable, std::string("malformed catalog response: ") + e.what());
        }
        return normalize_search_response(body);
      }
      last_status = res ? res->status : 0;
      const bool retryable = !res || last_status == 429 || last_status >= 500;
      if (!retryable) break;
      if (attempt < config_.attempts) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
    if (last_status == 429) throw Error(Errc::RateLimited, "catalog kept answering 429");
    throw Error(Errc::RemoteUnavailable, "status " + std::to_string(last_status));
  }

  /// Issues one query per label concurrently and merges deterministically.
  std::vector<CatalogRecord> fetch(std::span<const std::string> labels, std::size_t limit) const {
    if (labels.empty()) throw Error(Errc::InvalidArgument, "no interests to fetch for");
    if (limit < 1) throw Error(Errc::InvalidArgument, "limit must be >= 1");
    std::vector<std::future<std::vector<CatalogRecord>>> pending;
    for (const auto& label : labels) {
      pending.push_back(std::async(std::launch::async, [this, label] { return search(label); }));
    }
    std::vector<std::vector<CatalogRecord>> results;
    for (auto& f : pending) results.push_back(f.get());
    auto merged = merge_catalog_results(std::move(results), limit);
    if (merged.empty()) throw Error(Errc::NoCandidates, "catalog returned no publications");
    return merged;
  }

 private:
  RemoteCatalogConfig config_;
};

inline std::vector<Publication> to_publications(const std::vector<CatalogRecord>& records,
                                                const IngestOptions& ingest) {
  std::vector<Publication> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(make_publication(r.id, r.title, r.abstract, ingest));
  return out;
}

}  // namespace exrec
