#pragma once

// Seeded, platform-independent fixture generation: a topical word-vector
// table, a publication corpus drawn from the same vocabulary, and user
// profiles. Used by the unit/acceptance suites and the exrec_fixtures tool.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "exrec/error.hpp"

namespace exrec::testing {

inline constexpr std::uint64_t kFixtureSeed = 20230417;
inline constexpr std::size_t kFixtureDimension = 50;
inline constexpr std::size_t kFixtureVocabulary = 500;
inline constexpr std::size_t kFixtureCorpusSize = 100;

/// mt19937_64 with hand-rolled uniform/normal draws; the std distributions
/// are implementation-defined and would break cross-platform fixtures.
class FixtureRng {
 public:
  explicit FixtureRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double kTwoPi = 6.283185307179586476925;
    spare_ = r * std::sin(kTwoPi * u2);
    return r * std::cos(kTwoPi * u2);
  }

  template <typename Seq>
  const auto& pick(const Seq& seq) {
    return seq[below(seq.size())];
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

using WordList = std::vector<std::string_view>;

inline const std::vector<WordList>& topic_words() {
  static const std::vector<WordList> topics = {
      {"graph", "network", "node", "edge", "vertex", "centrality", "community", "spectral", "walk", "adjacency",
       "subgraph", "topology", "connectivity", "path", "bipartite", "diffusion", "link", "motif", "hypergraph",
       "clique", "degree", "partition", "cut", "modularity", "traversal", "neighborhood", "homophily", "triangle",
       "cascade", "percolation", "tree", "spanning", "coloring", "matching", "flow", "hub", "sparse", "laplacian",
       "eigenvector", "random"},
      {"learning", "neural", "deep", "training", "gradient", "convolutional", "transformer", "attention", "layer",
       "optimizer", "backpropagation", "dropout", "regularization", "classifier", "supervised", "unsupervised",
       "reinforcement", "policy", "reward", "loss", "batch", "epoch", "weights", "activation", "recurrent",
       "encoder", "decoder", "autoencoder", "generative", "adversarial", "overfitting", "generalization",
       "hyperparameter", "kernel", "perceptron", "softmax", "logits", "finetuning", "pretraining", "distillation"},
      {"recommender", "recommendation", "collaborative", "filtering", "user", "item", "rating", "preference",
       "personalization", "ranking", "retrieval", "query", "relevance", "search", "click", "session", "implicit",
       "feedback", "explicit", "matrix", "factorization", "latent", "cold", "start", "popularity", "diversity",
       "novelty", "serendipity", "profile", "interest", "content", "catalog", "playlist", "consumer", "engagement",
       "hybrid", "neighbor", "similarity", "candidate", "top"},
      {"explanation", "explainable", "transparency", "interpretability", "trust", "human", "interface",
       "visualization", "interactive", "usability", "perception", "satisfaction", "scrutability",
       "controllability", "accountability", "fairness", "bias", "counterfactual", "intelligibility",
       "justification", "persuasiveness", "cognitive", "workload", "dashboard", "design", "prototype",
       "qualitative", "thematic", "interview", "critique", "layperson", "expert", "overreliance", "agency",
       "steerability", "accordion", "tooltip", "chart", "color", "tagcloud"},
      {"language", "text", "word", "sentence", "token", "corpus", "semantic", "syntactic", "parsing", "keyphrase",
       "keyword", "summarization", "translation", "lexical", "vocabulary", "embedding", "vector", "topic",
       "document", "extraction", "entity", "named", "tagging", "lemma", "stemming", "morphology", "dialogue",
       "question", "answering", "sentiment", "discourse", "grammar", "phrase", "paragraph", "multilingual",
       "bilingual", "glossary", "readability", "abstractive", "extractive"},
      {"protein", "gene", "genome", "cell", "clinical", "patient", "disease", "diagnosis", "drug", "molecular",
       "sequencing", "mutation", "tissue", "tumor", "cancer", "therapy", "treatment", "biomarker", "enzyme",
       "receptor", "pathway", "expression", "phenotype", "genotype", "microbiome", "antibody", "vaccine",
       "infection", "immune", "neuron", "brain", "cardiac", "imaging", "trial", "cohort", "epidemiology",
       "metabolism", "rna", "dna", "chromosome"},
      {"security", "privacy", "encryption", "attack", "malware", "vulnerability", "authentication", "protocol",
       "blockchain", "consensus", "distributed", "cloud", "server", "latency", "throughput", "cache", "memory",
       "processor", "compiler", "scheduling", "concurrency", "fault", "tolerance", "replication", "storage",
       "database", "transaction", "firewall", "intrusion", "detection", "cryptography", "key", "hash",
       "signature", "ledger", "container", "virtualization", "operating", "bandwidth", "packet"},
      {"quantum", "photon", "laser", "optical", "semiconductor", "superconducting", "qubit", "entanglement", "spin",
       "magnetic", "thermal", "energy", "solar", "battery", "wind", "turbine", "grid", "power", "fusion", "plasma",
       "particle", "collider", "gravitational", "cosmology", "galaxy", "telescope", "spectroscopy", "crystal",
       "lattice", "phonon", "electron", "material", "nanoscale", "graphene", "catalyst", "hydrogen", "emission",
       "climate", "carbon", "ocean"},
  };
  return topics;
}

inline const WordList& generic_words() {
  static const WordList words = {
      "approach", "method", "framework", "results", "analysis", "performance", "evaluation", "experiments",
      "dataset", "benchmark", "model", "system", "algorithm", "efficient", "scalable", "robust", "accurate",
      "accuracy", "effective", "empirical", "theoretical", "proposed", "existing", "significant", "improvement",
      "problem", "task", "challenge", "application", "large", "scale", "real", "world", "data", "information",
      "techniques", "architecture", "baseline", "state", "art", "paper", "work", "study", "participants",
      "setting", "estimation", "simulation", "optimization", "inference", "measurement"};
  return words;
}

/// Words used in the corpus text but deliberately absent from the table.
inline const WordList& out_of_vocabulary_words() {
  static const WordList words = {"arxiv", "preprint", "appendix", "supplementary", "github", "repository",
                                 "reproducibility", "anonymized", "camera", "ready"};
  return words;
}

/// Pseudo-words padding the table to its full size; never used in text.
inline std::vector<std::string> filler_words(std::size_t count, FixtureRng& rng) {
  static constexpr std::array<std::string_view, 14> onsets = {"b", "d", "f", "g", "k", "l", "m",
                                                              "n", "p", "r", "s", "t", "v", "z"};
  static constexpr std::array<std::string_view, 5> vowels = {"a", "e", "i", "o", "u"};
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < count) {
    std::string w;
    const std::size_t syllables = 3;
    for (std::size_t s = 0; s < syllables; ++s) {
      w += rng.pick(onsets);
      w += rng.pick(vowels);
    }
    w += "x";  // no English word in the lists ends this way
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

namespace detail {

inline std::vector<double> unit_gaussian(FixtureRng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double sq = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    sq += x * x;
  }
  const double n = std::sqrt(sq);
  for (auto& x : v) x /= n;
  return v;
}

inline void append_vector(std::string& out, std::string_view token, const std::vector<double>& v) {
  out += token;
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, " %.6f", x);
    out += buf;
  }
  out += '\n';
}

}  // namespace detail

/// Word2vec-text table: topic words cluster around one random direction per
/// topic; generic and filler words are isotropic noise.
inline std::string generate_embeddings(std::uint64_t seed = kFixtureSeed, std::size_t dim = kFixtureDimension,
                                       std::size_t vocab = kFixtureVocabulary) {
  FixtureRng rng(seed);
  const auto& topics = topic_words();
  std::vector<std::vector<double>> centers;
  for (std::size_t t = 0; t < topics.size(); ++t) centers.push_back(detail::unit_gaussian(rng, dim));

  std::size_t fixed = generic_words().size();
  for (const auto& t : topics) fixed += t.size();
  if (vocab < fixed) throw Error(Errc::InvalidArgument, "vocabulary smaller than the fixed word lists");

  std::set<std::string_view> unique;
  std::string body;
  for (std::size_t t = 0; t < topics.size(); ++t) {
    for (auto word : topics[t]) {
      if (!unique.insert(word).second) throw Error(Errc::DuplicateToken, std::string(word));
      const auto noise = detail::unit_gaussian(rng, dim);
      std::vector<double> v(dim);
      double sq = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        v[j] = centers[t][j] + 0.9 * noise[j];
        sq += v[j] * v[j];
      }
      const double n = std::sqrt(sq);
      for (auto& x : v) x /= n;
      detail::append_vector(body, word, v);
    }
  }
  for (auto word : generic_words()) {
    if (!unique.insert(word).second) throw Error(Errc::DuplicateToken, std::string(word));
    detail::append_vector(body, word, detail::unit_gaussian(rng, dim));
  }
  for (const auto& word : filler_words(vocab - fixed, rng)) {
    detail::append_vector(body, word, detail::unit_gaussian(rng, dim));
  }
  return std::to_string(vocab) + " " + std::to_string(dim) + "\n" + body;
}

namespace detail {

inline std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

// {T} primary-topic word, {S} secondary-topic word, {G} generic word,
// {O} out-of-vocabulary word.
inline std::string fill_template(std::string_view tpl, const WordList& primary, const WordList& secondary,
                                 FixtureRng& rng) {
  std::string out;
  for (std::size_t i = 0; i < tpl.size(); ++i) {
    if (tpl[i] == '{' && i + 2 < tpl.size() && tpl[i + 2] == '}') {
      switch (tpl[i + 1]) {
        case 'T': out += rng.pick(primary); break;
        case 'S': out += rng.pick(secondary); break;
        case 'G': out += rng.pick(generic_words()); break;
        case 'O': out += rng.pick(out_of_vocabulary_words()); break;
        default: out += tpl.substr(i, 3);
      }
      i += 2;
    } else {
      out.push_back(tpl[i]);
    }
  }
  return out;
}

inline constexpr std::array<std::string_view, 6> kTitleTemplates = {
    "{T} {T} for {S} {T}", "Towards {G} {T} {T}", "{T} {G}: a {T} {T} perspective",
    "On the {G} of {T} {T}", "{T} and {S} {T} in {G} {G}", "{T} {T} {T} with {S} {S}"};

inline constexpr std::array<std::string_view, 12> kSentenceTemplates = {
    "We propose an approach to {T} {T} for {T} {G}.",
    "Existing methods often ignore the {T} of {T} {T}.",
    "In our {G}, {T} {T} is combined with {S} {S}.",
    "Experiments show that the {T} {G} is better on {G} {G}.",
    "We also analyze the {T} {T} and the {S} {T}.",
    "The {T} {T} is evaluated against {G} baselines.",
    "In this paper, we study the problem of {T} {T} in {S} settings.",
    "Code and data are available in the {O} {O}.",
    "Results indicate that {T} {G} and {T} {T} are related.",
    "This work connects, through a unified {G}, the {T} {T} and the {S} {S}.",
    "The cost of {T} {T} is reduced by a {T}-aware {G}, e.g. for {S} {G}.",
    "We release a {G} of {T} {T} ({T} {S}) for further {G}."};

}  // namespace detail

struct GeneratedPublication {
  std::string id;
  std::string title;
  std::string abstract;
  std::size_t primary_topic = 0;
  std::size_t secondary_topic = 0;
};

/// One synthetic publication about `primary` (and possibly `secondary`).
inline GeneratedPublication generate_publication(std::string id, std::size_t primary, std::size_t secondary,
                                                 FixtureRng& rng, std::size_t sentences = 5) {
  const auto& topics = topic_words();
  GeneratedPublication pub{std::move(id), {}, {}, primary, secondary};
  pub.title = detail::capitalize(
      detail::fill_template(rng.pick(detail::kTitleTemplates), topics[primary], topics[secondary], rng));
  std::vector<std::size_t> order(detail::kSentenceTemplates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  for (std::size_t s = 0; s < sentences && s < order.size(); ++s) {
    if (!pub.abstract.empty()) pub.abstract += ' ';
    pub.abstract += detail::capitalize(
        detail::fill_template(detail::kSentenceTemplates[order[s]], topics[primary], topics[secondary], rng));
  }
  return pub;
}

inline std::vector<GeneratedPublication> generate_corpus_records(std::uint64_t seed = kFixtureSeed + 1,
                                                                 std::size_t count = kFixtureCorpusSize) {
  FixtureRng rng(seed);
  const std::size_t n_topics = topic_words().size();
  std::vector<GeneratedPublication> out;
  for (std::size_t i = 0; i < count; ++i) {
    char id[24];
    std::snprintf(id, sizeof id, "p%03zu", i + 1);
    const std::size_t primary = rng.below(n_topics);
    const std::size_t secondary = rng.uniform() < 0.5 ? primary : rng.below(n_topics);
    out.push_back(generate_publication(id, primary, secondary, rng));
  }
  return out;
}

inline nlohmann::json to_corpus_json(const std::vector<GeneratedPublication>& pubs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pubs) arr.push_back({{"id", p.id}, {"title", p.title}, {"abstract", p.abstract}});
  return arr;
}

inline std::string generate_corpus(std::uint64_t seed = kFixtureSeed + 1, std::size_t count = kFixtureCorpusSize) {
  return to_corpus_json(generate_corpus_records(seed, count)).dump(2) + "\n";
}

/// Profile with `n_pubs` generated publications about the given topics.
inline nlohmann::json generate_profile(const std::string& user_id, std::uint64_t seed,
                                       const std::vector<std::size_t>& topics, std::size_t n_pubs) {
  FixtureRng rng(seed);
  nlohmann::json pubs = nlohmann::json::array();
  for (std::size_t i = 0; i < n_pubs; ++i) {
    const std::size_t primary = topics[i % topics.size()];
    const std::size_t secondary = topics[(i + 1) % topics.size()];
    auto p = generate_publication(user_id + "-pub" + std::to_string(i + 1), primary, secondary, rng);
    pubs.push_back({{"id", p.id}, {"title", p.title}, {"abstract", p.abstract}});
  }
  return {{"user_id", user_id}, {"publications", pubs}};
}

}  // namespace exrec::testing
