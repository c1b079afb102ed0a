#include <cmath>

#include <gtest/gtest.h>

#include "exrec/recommender.hpp"
#include "support/oracle.hpp"
#include "support/world.hpp"

namespace {

using exrec::Errc;
using exrec::InterestModel;
using exrec::Publication;

exrec::EmbeddingStore plane() {
  return exrec::EmbeddingStore::from_entries(2, {{"east", {1, 0}},
                                                 {"north", {0, 1}},
                                                 {"west", {-1, 0}},
                                                 {"northeast", {1, 1}},
                                                 {"twin", {1, 0}}});
}

Publication pub(std::string id, std::vector<std::pair<std::string, double>> phrases) {
  Publication p{std::move(id), "t", "", {}};
  for (auto& [text, s] : phrases) p.keyphrases.push_back({text, s, {}});
  return p;
}

TEST(ToPercent, RoundsHalfUp) {
  EXPECT_EQ(exrec::to_percent(0.125), 13);
  EXPECT_EQ(exrec::to_percent(0.124), 12);
  EXPECT_EQ(exrec::to_percent(1.0), 100);
  EXPECT_EQ(exrec::to_percent(0.0), 0);
}

TEST(Score, HandComputedCosines) {
  const auto store = plane();
  const auto model = InterestModel::create("u", {{"east", 1.0, {}}, {"north", 1.0, {}}});
  // Model vector (0.5, 0.5); publication "east" (1, 0): cosine 1/sqrt(2).
  const auto rec = exrec::score(model, pub("p", {{"east", 1.0}}), store);
  EXPECT_NEAR(rec.overall_score, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(rec.display_percent, 71);
  EXPECT_DOUBLE_EQ(rec.per_interest.at("east"), 1.0);
  EXPECT_DOUBLE_EQ(rec.per_interest.at("north"), 0.0);
  EXPECT_EQ(rec.best_interest_per_keyword.at("east"), "east");
}

TEST(Score, NegativeCosinesClampToZero) {
  const auto store = plane();
  const auto model = InterestModel::create("u", {{"east", 1.0, {}}});
  const auto rec = exrec::score(model, pub("p", {{"west", 1.0}}), store);
  EXPECT_EQ(rec.overall_score, 0.0);
  EXPECT_EQ(rec.per_interest.at("east"), 0.0);
  EXPECT_EQ(rec.per_keyword.at("west").at("east"), 0.0);
}

TEST(Score, PerInterestScoresAreNotNormalised) {
  const auto store = plane();
  const auto model = InterestModel::create("u", {{"east", 1.0, {}}, {"twin", 0.5, {}}, {"northeast", 0.8, {}}});
  const auto rec = exrec::score(model, pub("p", {{"east", 1.0}}), store);
  double sum = 0.0;
  for (const auto& [_, s] : rec.per_interest) sum += exrec::to_percent(s);
  EXPECT_EQ(sum, 100 + 100 + 71);
}

TEST(Score, AttributionTieGoesToEarlierActiveInterest) {
  const auto store = plane();
  // "east" and "twin" share a vector; "east" sorts first at equal weight.
  const auto model = InterestModel::create("u", {{"twin", 0.5, {}}, {"east", 0.5, {}}});
  const auto rec = exrec::score(model, pub("p", {{"east", 1.0}}), store);
  EXPECT_EQ(rec.best_interest_per_keyword.at("east"), "east");
  // A heavier interest moves first in active order and wins the tie.
  const auto heavier = InterestModel::create("u", {{"twin", 0.9, {}}, {"east", 0.5, {}}});
  EXPECT_EQ(exrec::score(heavier, pub("p", {{"east", 1.0}}), store).best_interest_per_keyword.at("east"), "twin");
}

TEST(Score, OnlyActiveInterestsContribute) {
  const auto store = plane();
  const auto model = InterestModel::create("u", {{"east", 1.0, {}}, {"north", 0.1, {}}}, 1);
  const auto rec = exrec::score(model, pub("p", {{"north", 1.0}}), store);
  EXPECT_EQ(rec.overall_score, 0.0);
  EXPECT_FALSE(rec.per_interest.contains("north"));
}

TEST(Score, Errors) {
  const auto store = plane();
  const auto model = InterestModel::create("u", {{"east", 1.0, {}}});
  try {
    exrec::score(model, pub("p", {{"arxiv", 1.0}}), store);
    FAIL();
  } catch (const exrec::Error& e) {
    EXPECT_EQ(e.code(), Errc::NoEmbeddableKeyphrases);
  }
  const auto unknown = InterestModel::create("u", {{"arxiv", 1.0, {}}});
  try {
    exrec::score(unknown, pub("p", {{"east", 1.0}}), store);
    FAIL();
  } catch (const exrec::Error& e) {
    EXPECT_EQ(e.code(), Errc::NoEmbeddableInterests);
  }
}

TEST(Recommend, ThresholdIsStrictAndTiesBreakById) {
  const auto store = plane();
  const auto model = InterestModel::create("u", {{"east", 1.0, {}}});
  const std::vector<Publication> candidates = {pub("c", {{"east", 1.0}}), pub("a", {{"twin", 1.0}}),
                                               pub("b", {{"northeast", 1.0}}), pub("d", {{"north", 1.0}}),
                                               pub("e", {{"arxiv", 1.0}})};
  const double diagonal = exrec::score(model, candidates[2], store).overall_score;
  const auto set = exrec::recommend(model, candidates, store, 10, diagonal);
  ASSERT_EQ(set.items.size(), 2u);
  EXPECT_EQ(set.items[0].publication.id, "a");
  EXPECT_EQ(set.items[1].publication.id, "c");
  EXPECT_EQ(set.skipped, std::vector<std::string>{"e"});

  const auto lower = exrec::recommend(model, candidates, store, 10, diagonal - 1e-12);
  EXPECT_EQ(lower.items.size(), 3u);
  const auto top1 = exrec::recommend(model, candidates, store, 1, 0.0);
  ASSERT_EQ(top1.items.size(), 1u);
  EXPECT_EQ(top1.items[0].publication.id, "a");
}

TEST(Recommend, ValidatesSelection) {
  const auto store = plane();
  const auto model = InterestModel::create("u", {{"east", 1.0, {}}});
  const std::vector<Publication> candidates = {pub("a", {{"east", 1.0}})};
  EXPECT_THROW(exrec::recommend(model, candidates, store, 0, 0.4), exrec::Error);
  EXPECT_THROW(exrec::recommend(model, candidates, store, 10, 1.01), exrec::Error);
  EXPECT_THROW(exrec::recommend(model, candidates, store, 10, -0.1), exrec::Error);
}

TEST(Recommend, ThreadCountDoesNotChangeResults) {
  const auto& world = exrec_test::World::get();
  const auto model = world.profile_model("profile_graphs.json");
  const auto one = exrec::score_all(model, world.corpus, world.store, 1);
  const auto many = exrec::score_all(model, world.corpus, world.store, 7);
  EXPECT_EQ(one.scored, many.scored);
  EXPECT_EQ(one.skipped, many.skipped);
}

TEST(Recommend, MatchesBruteForceOracleOnFixture) {
  const auto& world = exrec_test::World::get();
  const auto table = exrec_test::oracle::load_table(exrec_test::data_path("embeddings_50d.txt"));
  std::vector<exrec_test::oracle::Doc> docs;
  for (const auto& p : world.corpus) {
    exrec_test::oracle::Doc d{p.id, {}};
    for (const auto& kp : p.keyphrases) d.phrases.emplace_back(kp.text, kp.salience);
    docs.push_back(std::move(d));
  }
  for (const char* profile : {"profile_graphs.json", "profile_nlp.json"}) {
    const auto model = world.profile_model(profile);
    std::vector<std::pair<std::string, double>> interests;
    for (const auto& i : model.interests()) interests.emplace_back(i.label, i.weight);
    const auto expected = exrec_test::oracle::recommend(table, interests, docs);
    const auto got = exrec::recommend(model, world.corpus, world.store);
    ASSERT_EQ(got.items.size(), expected.size()) << profile;
    ASSERT_FALSE(expected.empty());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(got.items[i].publication.id, expected[i].id);
      EXPECT_NEAR(got.items[i].overall_score, expected[i].score, 1e-9);
    }
  }
}

}  // namespace
