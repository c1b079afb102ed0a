#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exrec/corpus.hpp"
#include "exrec/detail/utf8.hpp"
#include "exrec/embedding_store.hpp"
#include "exrec/error.hpp"

namespace exrec {

inline constexpr std::size_t kDefaultActiveInterests = 5;

/// Trims, collapses inner whitespace and lowercases an interest label.
inline std::string normalize_label(std::string_view label) {
  std::string out;
  bool pending_space = false;
  for (char c : label) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return detail::to_lower(out);
}

struct Interest {
  std::string label;
  double weight = 0.0;                // in (0, 1]
  std::optional<int> color_index;     // palette slot; set only for active interests

  friend bool operator==(const Interest&, const Interest&) = default;
};

/// A user's weighted interests kept in canonical order (weight descending,
/// then label ascending). The first `active_limit` entries are the active
/// set that feeds recommendation; they carry color indexes 0..k-1.
class InterestModel {
 public:
  InterestModel() = default;

  static InterestModel create(std::string user_id, std::vector<Interest> interests,
                              std::size_t active_limit = kDefaultActiveInterests) {
    if (active_limit < 1) throw Error(Errc::InvalidArgument, "active_limit must be >= 1");
    std::set<std::string> seen;
    for (auto& i : interests) {
      i.label = normalize_label(i.label);
      if (i.label.empty()) throw Error(Errc::InvalidArgument, "empty interest label");
      if (!seen.insert(i.label).second) throw Error(Errc::DuplicateLabel, i.label);
      if (!(i.weight > 0.0 && i.weight <= 1.0)) {
        throw Error(Errc::WeightOutOfRange, i.label + " has weight " + std::to_string(i.weight));
      }
    }
    InterestModel model;
    model.user_id_ = std::move(user_id);
    model.active_limit_ = active_limit;
    model.interests_ = std::move(interests);
    model.canonicalize();
    return model;
  }

  const std::string& user_id() const noexcept { return user_id_; }
  std::size_t active_limit() const noexcept { return active_limit_; }
  const std::vector<Interest>& interests() const noexcept { return interests_; }

  std::span<const Interest> active() const noexcept {
    return std::span<const Interest>(interests_).first(std::min(active_limit_, interests_.size()));
  }

  const Interest* find(std::string_view label) const {
    const auto key = normalize_label(label);
    for (const auto& i : interests_) {
      if (i.label == key) return &i;
    }
    return nullptr;
  }

  friend bool operator==(const InterestModel&, const InterestModel&) = default;

 private:
  friend class InterestModelEditor;

  void canonicalize() {
    std::sort(interests_.begin(), interests_.end(), [](const Interest& a, const Interest& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return a.label < b.label;
    });
    for (std::size_t i = 0; i < interests_.size(); ++i) {
      interests_[i].color_index =
          i < active_limit_ ? std::optional<int>(static_cast<int>(i)) : std::nullopt;
    }
  }

  std::string user_id_;
  std::size_t active_limit_ = kDefaultActiveInterests;
  std::vector<Interest> interests_;
};

/// Infers a model from the user's publications: keyphrase saliences are
/// summed across publications, phrases without an embedding are dropped,
/// weights are scaled so the maximum is 1.0, and the top `n` are kept.
inline InterestModel infer_interests(std::string user_id, std::span<const Publication> publications,
                                     const EmbeddingStore& store, std::size_t n,
                                     std::size_t active_limit = kDefaultActiveInterests) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  std::map<std::string, double> salience;
  for (const auto& pub : publications) {
    for (const auto& kp : pub.keyphrases) salience[kp.text] += kp.salience;
  }
  std::vector<std::pair<std::string, double>> usable;
  for (const auto& [label, s] : salience) {
    if (s > 0.0 && store.phrase_embedding(label)) usable.emplace_back(label, s);
  }
  if (usable.empty()) throw Error(Errc::NoUsablePhrases, "no embeddable keyphrase in the user's publications");

  double max_salience = 0.0;
  for (const auto& [_, s] : usable) max_salience = std::max(max_salience, s);
  std::vector<Interest> interests;
  interests.reserve(usable.size());
  for (auto& [label, s] : usable) {
    interests.push_back({std::move(label), s == max_salience ? 1.0 : s / max_salience, std::nullopt});
  }
  std::sort(interests.begin(), interests.end(), [](const Interest& a, const Interest& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.label < b.label;
  });
  if (interests.size() > n) interests.resize(n);
  return InterestModel::create(std::move(user_id), std::move(interests), active_limit);
}

enum class EditOp { Add, Remove, Reweight };

struct InterestEdit {
  EditOp op = EditOp::Add;
  std::string label;
  double weight = 0.0;  // ignored for Remove

  static InterestEdit add(std::string label, double weight) { return {EditOp::Add, std::move(label), weight}; }
  static InterestEdit remove(std::string label) { return {EditOp::Remove, std::move(label), 0.0}; }
  static InterestEdit reweight(std::string label, double weight) {
    return {EditOp::Reweight, std::move(label), weight};
  }

  friend bool operator==(const InterestEdit&, const InterestEdit&) = default;
};

class InterestModelEditor {
 public:
  static InterestModel apply(const InterestModel& model, std::span<const InterestEdit> edits,
                             const EmbeddingStore& store) {
    InterestModel out = model;
    for (const auto& edit : edits) {
      const auto label = normalize_label(edit.label);
      if (label.empty()) throw Error(Errc::InvalidArgument, "empty interest label");
      auto it = std::find_if(out.interests_.begin(), out.interests_.end(),
                             [&](const Interest& i) { return i.label == label; });
      const bool needs_weight = edit.op != EditOp::Remove;
      if (needs_weight && !(edit.weight > 0.0 && edit.weight <= 1.0)) {
        throw Error(Errc::WeightOutOfRange, label + " has weight " + std::to_string(edit.weight));
      }
      switch (edit.op) {
        case EditOp::Add:
          if (it != out.interests_.end()) throw Error(Errc::DuplicateLabel, label);
          if (!store.phrase_embedding(label)) throw Error(Errc::LabelNotEmbeddable, label);
          out.interests_.push_back({label, edit.weight, std::nullopt});
          break;
        case EditOp::Remove:
          if (it == out.interests_.end()) throw Error(Errc::UnknownLabel, label);
          out.interests_.erase(it);
          break;
        case EditOp::Reweight:
          if (it == out.interests_.end()) throw Error(Errc::UnknownLabel, label);
          it->weight = edit.weight;
          break;
      }
    }
    out.canonicalize();
    return out;
  }
};

/// Applies edits in order and returns the new model; `model` is untouched.
/// User-entered weights are kept verbatim (no renormalisation).
inline InterestModel edit_interests(const InterestModel& model, std::span<const InterestEdit> edits,
                                    const EmbeddingStore& store) {
  return InterestModelEditor::apply(model, edits, store);
}

}  // namespace exrec
