#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "exrec/detail/utf8.hpp"
#include "exrec/error.hpp"

namespace exrec {

/// Dense real vector; the unit of all similarity math. Entries are always
/// finite.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;

  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "embedding entry is not finite");
    }
  }

  std::size_t dimension() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double norm() const noexcept {
    double sq = 0.0;
    for (double v : values_) sq += v * v;
    return std::sqrt(sq);
  }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

/// Σ wᵢ·vᵢ / Σ wᵢ. Weights must be non-negative with a positive sum.
inline EmbeddingVector weighted_average(std::span<const EmbeddingVector> vectors,
                                        std::span<const double> weights) {
  if (vectors.empty()) throw Error(Errc::EmptyInput, "weighted_average of zero vectors");
  if (vectors.size() != weights.size()) {
    throw Error(Errc::InvalidArgument, "vector and weight counts differ");
  }
  const std::size_t dim = vectors.front().dimension();
  double total = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dimension() != dim) {
      throw Error(Errc::DimensionMismatch, "vector " + std::to_string(i) + " has dimension " +
                                               std::to_string(vectors[i].dimension()) +
                                               ", expected " + std::to_string(dim));
    }
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw Error(Errc::InvalidArgument, "weight " + std::to_string(i) + " is negative or not finite");
    }
    total += weights[i];
  }
  if (!(total > 0.0)) throw Error(Errc::AllZeroWeights, "weights sum to zero");

  std::vector<double> acc(dim, 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto v = vectors[i].values();
    for (std::size_t j = 0; j < dim; ++j) acc[j] += weights[i] * v[j];
  }
  for (double& x : acc) x /= total;
  return EmbeddingVector(std::move(acc));
}

/// Dot product of two equal-length vectors.
inline double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw Error(Errc::DimensionMismatch, std::to_string(a.dimension()) + " vs " +
                                             std::to_string(b.dimension()));
  }
  double sum = 0.0;
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

/// a·b / (‖a‖‖b‖), clamped to [-1, 1].
inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  const double d = dot(a, b);
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw Error(Errc::ZeroVector, "cosine of a zero-norm vector");
  return std::clamp(d / (na * nb), -1.0, 1.0);
}

/// Immutable token → vector table loaded from a word2vec text file.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  /// Builds a store from (token, vector) pairs. Tokens are case-folded;
  /// duplicates after folding are rejected.
  static EmbeddingStore from_entries(std::size_t dimension,
                                     std::vector<std::pair<std::string, std::vector<double>>> entries) {
    if (dimension == 0) throw Error(Errc::InvalidArgument, "dimension must be positive");
    if (entries.empty()) throw Error(Errc::EmptyVocabulary, "no entries");
    EmbeddingStore store;
    store.dimension_ = dimension;
    for (auto& [token, values] : entries) {
      if (values.size() != dimension) {
        throw Error(Errc::DimensionMismatch, "token '" + token + "' has " +
                                                 std::to_string(values.size()) + " values");
      }
      store.insert(detail::to_lower(token), EmbeddingVector(std::move(values)));
    }
    return store;
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t vocab_size() const noexcept { return tokens_.size(); }

  /// Tokens in file order.
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  /// Case-folded exact match.
  std::optional<EmbeddingVector> lookup(std::string_view token) const {
    const auto it = index_.find(detail::to_lower(token));
    if (it == index_.end()) return std::nullopt;
    return vectors_[it->second];
  }

  bool contains(std::string_view token) const { return index_.contains(detail::to_lower(token)); }

  /// Unweighted mean of the in-vocabulary whitespace-separated tokens;
  /// absent when every token is out of vocabulary.
  std::optional<EmbeddingVector> phrase_embedding(std::string_view phrase) const {
    std::vector<const EmbeddingVector*> found;
    std::istringstream in{std::string(phrase)};
    std::string word;
    while (in >> word) {
      const auto it = index_.find(detail::to_lower(word));
      if (it != index_.end()) found.push_back(&vectors_[it->second]);
    }
    if (found.empty()) return std::nullopt;
    if (found.size() == 1) return *found.front();
    std::vector<double> acc(dimension_, 0.0);
    for (const auto* v : found) {
      const auto values = v->values();
      for (std::size_t j = 0; j < dimension_; ++j) acc[j] += values[j];
    }
    for (double& x : acc) x /= static_cast<double>(found.size());
    return EmbeddingVector(std::move(acc));
  }

  /// Writes the table back in word2vec text format with `precision`
  /// fractional digits.
  void write(std::ostream& out, int precision = 6) const {
    out << tokens_.size() << ' ' << dimension_ << '\n';
    char buf[64];
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      out << tokens_[i];
      for (double v : vectors_[i].values()) {
        std::snprintf(buf, sizeof buf, " %.*f", precision, v);
        out << buf;
      }
      out << '\n';
    }
  }

  static EmbeddingStore load(std::istream& in);

  static EmbeddingStore load(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw Error(Errc::Io, "cannot open embedding file '" + path + "'");
    return load(file);
  }

 private:
  void insert(std::string token, EmbeddingVector vec) {
    if (token.empty()) throw Error(Errc::MalformedLine, "empty token");
    if (index_.contains(token)) throw Error(Errc::DuplicateToken, token);
    index_.emplace(token, tokens_.size());
    tokens_.push_back(std::move(token));
    vectors_.push_back(std::move(vec));
  }

  std::size_t dimension_ = 0;
  std::vector<std::string> tokens_;
  std::vector<EmbeddingVector> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace detail

inline EmbeddingStore EmbeddingStore::load(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  auto malformed = [&](const std::string& why) {
    return Error(Errc::MalformedLine, "line " + std::to_string(line_no) + ": " + why);
  };

  if (!std::getline(in, line)) throw Error(Errc::EmptyVocabulary, "empty embedding file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_spaces(line);
  std::size_t vocab = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !detail::parse_number(header[0], vocab) ||
      !detail::parse_number(header[1], dim)) {
    throw malformed("header must be '<vocab_size> <dimension>'");
  }
  if (vocab == 0) throw Error(Errc::EmptyVocabulary, "header declares zero tokens");
  if (dim == 0) throw malformed("dimension must be positive");

  EmbeddingStore store;
  store.dimension_ = dim;
  store.tokens_.reserve(vocab);
  store.vectors_.reserve(vocab);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw malformed("empty line");
    const auto fields = detail::split_spaces(line);
    if (fields.empty()) throw malformed("no token");
    if (fields.size() - 1 != dim) {
      throw Error(Errc::DimensionMismatch, "line " + std::to_string(line_no) + ": " +
                                               std::to_string(fields.size() - 1) +
                                               " values, expected " + std::to_string(dim));
    }
    std::vector<double> values(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!detail::parse_number(fields[j + 1], values[j]) || !std::isfinite(values[j])) {
        throw malformed("bad value '" + std::string(fields[j + 1]) + "'");
      }
    }
    if (store.tokens_.size() == vocab) throw malformed("more entries than the header declares");
    store.insert(detail::to_lower(fields[0]), EmbeddingVector(std::move(values)));
  }
  if (store.tokens_.size() != vocab) {
    throw malformed("header declares " + std::to_string(vocab) + " entries, found " +
                    std::to_string(store.tokens_.size()));
  }
  return store;
}

}  // namespace exrec
