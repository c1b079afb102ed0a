#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "exrec/detail/default_stopwords.hpp"
#include "exrec/detail/utf8.hpp"
#include "exrec/error.hpp"

namespace exrec {

struct Token {
  std::string text;       // lowercase, no whitespace
  std::size_t position;   // 0-based index in the document token stream

  friend bool operator==(const Token&, const Token&) = default;
};

enum class Field { Title, Abstract };

/// One occurrence of a keyphrase: `length` tokens starting at token
/// `position` of the given field.
struct PhraseSpan {
  Field field = Field::Abstract;
  std::size_t position = 0;
  std::size_t length = 0;

  friend bool operator==(const PhraseSpan&, const PhraseSpan&) = default;
};

struct Keyphrase {
  std::string text;    // tokens joined by a single space
  double salience = 0.0;
  std::vector<PhraseSpan> occurrences;

  friend bool operator==(const Keyphrase&, const Keyphrase&) = default;
};

class StopwordSet {
 public:
  StopwordSet() : StopwordSet(kDefaultStopwords) {}

  template <typename Range>
  explicit StopwordSet(const Range& words) {
    for (const auto& w : words) words_.insert(detail::to_lower(w));
  }

  /// One token per line, '#' lines and blank lines ignored.
  static StopwordSet load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open stopword file '" + path + "'");
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
        line.pop_back();
      }
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      words.push_back(line.substr(first));
    }
    return StopwordSet(words);
  }

  bool contains(std::string_view token) const { return words_.contains(std::string(token)); }
  std::size_t size() const noexcept { return words_.size(); }

  /// Sorted contents.
  std::vector<std::string> words() const {
    std::vector<std::string> out(words_.begin(), words_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::unordered_set<std::string> words_;
};

struct ExtractionOptions {
  std::size_t max_phrases = 10;
  std::size_t max_phrase_length = 4;
  std::size_t window = 4;
  double damping = 0.85;
  std::size_t max_iterations = 50;
  double tolerance = 1e-6;
  double title_boost = 1.5;
};

namespace detail {

struct ClauseToken {
  std::string text;
  std::size_t position;
  std::size_t clause;
};

// Characters that end a clause. Candidate phrases never span them.
inline bool is_clause_delimiter(char32_t cp) noexcept {
  switch (cp) {
    case U'.': case U',': case U';': case U':': case U'!': case U'?':
    case U'(': case U')': case U'[': case U']': case U'{': case U'}': case U'"':
    case U'\n':
      return true;
    default:
      return false;
  }
}

inline std::vector<ClauseToken> scan_tokens(std::string_view text) {
  std::vector<ClauseToken> out;
  std::string current;
  std::size_t current_cps = 0;
  std::size_t clause = 0;
  auto flush = [&] {
    if (current_cps >= 2) out.push_back({current, out.size(), clause});
    current.clear();
    current_cps = 0;
  };
  for (std::size_t i = 0; i < text.size();) {
    const auto d = decode_utf8(text, i);
    if (is_alnum_cp(d.cp)) {
      append_utf8(current, to_lower_cp(d.cp));
      ++current_cps;
    } else {
      flush();
      if (is_clause_delimiter(d.cp)) ++clause;
    }
    i += d.length;
  }
  flush();
  return out;
}

}  // namespace detail

/// Splits on non-alphanumeric boundaries, lowercases, drops tokens shorter
/// than two characters.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  for (auto& t : detail::scan_tokens(text)) out.push_back({std::move(t.text), t.position});
  return out;
}

/// Keyphrases plus the centrality iteration history. `deltas[i]` is the L1
/// change produced by iteration i + 1.
struct ExtractionTrace {
  std::vector<Keyphrase> phrases;
  std::size_t iterations = 0;
  std::vector<double> deltas;
};

/// Unsupervised graph-ranked keyphrase extraction.
///
/// Candidates are maximal stopword-free token runs inside a clause, cut
/// into chunks of at most `max_phrase_length` tokens. Candidate tokens form
/// an undirected co-occurrence graph (edge weight = number of co-occurrences
/// within `window` consecutive candidate tokens). Tokens are ranked by
/// degree-normalised PageRank; a phrase scores the sum of its token ranks
/// times the sum of its occurrence factors (title_boost for title
/// occurrences, 1 otherwise).
inline ExtractionTrace extract_keyphrases_traced(std::string_view title, std::string_view abstract,
                                                 const StopwordSet& stopwords,
                                                 const ExtractionOptions& opts = {}) {
  if (opts.max_phrases < 1) throw Error(Errc::InvalidArgument, "max_phrases must be >= 1");
  if (opts.max_phrase_length < 1 || opts.window < 2) {
    throw Error(Errc::InvalidArgument, "max_phrase_length must be >= 1 and window >= 2");
  }
  if (!(opts.damping > 0.0 && opts.damping < 1.0)) {
    throw Error(Errc::InvalidArgument, "damping must be in (0, 1)");
  }

  struct Occurrence {
    std::vector<std::string> tokens;
    PhraseSpan span;
  };
  std::vector<Occurrence> occurrences;

  auto collect = [&](std::string_view text, Field field) {
    const auto tokens = detail::scan_tokens(text);
    std::vector<const detail::ClauseToken*> run;
    auto flush = [&] {
      for (std::size_t start = 0; start < run.size(); start += opts.max_phrase_length) {
        const std::size_t end = std::min(run.size(), start + opts.max_phrase_length);
        Occurrence occ;
        occ.span = {field, run[start]->position, end - start};
        for (std::size_t i = start; i < end; ++i) occ.tokens.push_back(run[i]->text);
        occurrences.push_back(std::move(occ));
      }
      run.clear();
    };
    for (const auto& tok : tokens) {
      if (stopwords.contains(tok.text)) {
        flush();
        continue;
      }
      if (!run.empty() && run.back()->clause != tok.clause) flush();
      run.push_back(&tok);
    }
    flush();
  };
  collect(title, Field::Title);
  collect(abstract, Field::Abstract);
  if (occurrences.empty()) throw Error(Errc::EmptyDocument, "no candidate phrases");

  // Co-occurrence graph over the concatenated candidate token sequence.
  std::vector<std::string> sequence;
  for (const auto& occ : occurrences) {
    sequence.insert(sequence.end(), occ.tokens.begin(), occ.tokens.end());
  }
  std::map<std::string, std::size_t> node_index;
  for (const auto& t : sequence) node_index.emplace(t, 0);
  std::size_t next = 0;
  for (auto& [_, idx] : node_index) idx = next++;
  const std::size_t n = node_index.size();

  std::vector<std::map<std::size_t, double>> adjacency(n);
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    for (std::size_t j = i + 1; j < sequence.size() && j - i < opts.window; ++j) {
      const auto a = node_index[sequence[i]];
      const auto b = node_index[sequence[j]];
      if (a == b) continue;
      adjacency[a][b] += 1.0;
      adjacency[b][a] += 1.0;
    }
  }
  std::vector<double> degree(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& [_, w] : adjacency[v]) degree[v] += w;
  }

  ExtractionTrace trace;
  std::vector<double> rank(n, 1.0 / static_cast<double>(n));
  std::vector<double> updated(n);
  const double teleport = (1.0 - opts.damping) / static_cast<double>(n);
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    for (std::size_t v = 0; v < n; ++v) {
      double sum = 0.0;
      for (const auto& [u, w] : adjacency[v]) sum += rank[u] * w / degree[u];
      updated[v] = teleport + opts.damping * sum;
    }
    double delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) delta += std::abs(updated[v] - rank[v]);
    rank.swap(updated);
    trace.deltas.push_back(delta);
    trace.iterations = iter + 1;
    if (delta < opts.tolerance) break;
  }

  // Merge occurrences by phrase text; score.
  std::map<std::string, Keyphrase> merged;
  std::map<std::string, std::vector<std::string>> phrase_tokens;
  for (const auto& occ : occurrences) {
    std::string text;
    for (const auto& t : occ.tokens) {
      if (!text.empty()) text.push_back(' ');
      text += t;
    }
    auto& kp = merged[text];
    kp.text = text;
    kp.occurrences.push_back(occ.span);
    phrase_tokens.emplace(text, occ.tokens);
  }
  std::vector<Keyphrase> phrases;
  phrases.reserve(merged.size());
  for (auto& [text, kp] : merged) {
    double base = 0.0;
    for (const auto& t : phrase_tokens[text]) base += rank[node_index[t]];
    double factor = 0.0;
    for (const auto& span : kp.occurrences) {
      factor += span.field == Field::Title ? opts.title_boost : 1.0;
    }
    kp.salience = base * factor;
    phrases.push_back(std::move(kp));
  }
  std::sort(phrases.begin(), phrases.end(), [](const Keyphrase& a, const Keyphrase& b) {
    if (a.salience != b.salience) return a.salience > b.salience;
    return a.text < b.text;
  });
  if (phrases.size() > opts.max_phrases) phrases.resize(opts.max_phrases);
  trace.phrases = std::move(phrases);
  return trace;
}

inline std::vector<Keyphrase> extract_keyphrases(std::string_view title, std::string_view abstract,
                                                 const StopwordSet& stopwords,
                                                 const ExtractionOptions& opts = {}) {
  return extract_keyphrases_traced(title, abstract, stopwords, opts).phrases;
}

}  // namespace exrec
