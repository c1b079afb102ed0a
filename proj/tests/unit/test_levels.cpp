#include <gtest/gtest.h>

#include "exrec/levels.hpp"
#include "support/world.hpp"

namespace {

using exrec::Completeness;
using exrec::ExplanationLevel;
using exrec::IntelligibilityType;
using exrec::RejectionReason;
using exrec::Soundness;

using T = IntelligibilityType;

TEST(Levels, TypesPerLevel) {
  EXPECT_EQ(exrec::types_for_level(ExplanationLevel::Basic), (std::set<T>{T::What, T::WhatIf, T::WhyAbstract}));
  EXPECT_EQ(exrec::types_for_level(ExplanationLevel::Intermediate),
            (std::set<T>{T::What, T::WhatIf, T::WhyAbstract, T::WhyDetailed}));
  EXPECT_EQ(exrec::types_for_level(ExplanationLevel::Advanced),
            (std::set<T>{T::What, T::WhatIf, T::WhyAbstract, T::WhyDetailed, T::How}));
}

TEST(Levels, AllNineCombinations) {
  struct Row {
    Completeness c;
    Soundness s;
    std::optional<ExplanationLevel> level;
    std::optional<RejectionReason> reason;
  };
  const std::vector<Row> table = {
      {Completeness::Low, Soundness::Low, {}, RejectionReason::Oversimplification},
      {Completeness::Low, Soundness::Medium, {}, RejectionReason::Oversimplification},
      {Completeness::Low, Soundness::High, {}, RejectionReason::Oversimplification},
      {Completeness::Medium, Soundness::Low, ExplanationLevel::Basic, {}},
      {Completeness::Medium, Soundness::Medium, ExplanationLevel::Intermediate, {}},
      {Completeness::Medium, Soundness::High, {}, RejectionReason::OverComplexity},
      {Completeness::High, Soundness::Low, {}, RejectionReason::SoundnessWithoutCompleteness},
      {Completeness::High, Soundness::Medium, {}, RejectionReason::SoundnessWithoutCompleteness},
      {Completeness::High, Soundness::High, ExplanationLevel::Advanced, {}},
  };
  for (const auto& row : table) {
    const auto v = exrec::validate_combination(row.c, row.s);
    EXPECT_EQ(v.valid, row.level.has_value());
    EXPECT_EQ(v.level, row.level);
    EXPECT_EQ(v.reason, row.reason);
    if (row.level) {
      EXPECT_EQ(exrec::level_for(row.c, row.s), *row.level);
      EXPECT_EQ(exrec::completeness_of(*row.level), row.c);
      EXPECT_EQ(exrec::soundness_of(*row.level), row.s);
    } else {
      try {
        exrec::level_for(row.c, row.s);
        FAIL();
      } catch (const exrec::Error& e) {
        EXPECT_EQ(e.code(), exrec::Errc::InvalidCombination);
        EXPECT_NE(std::string(e.what()).find(exrec::reason_name(*row.reason)), std::string::npos);
      }
    }
  }
}

TEST(Levels, Parsing) {
  EXPECT_EQ(exrec::parse_level("advanced"), ExplanationLevel::Advanced);
  EXPECT_FALSE(exrec::parse_level("Advanced"));
  EXPECT_EQ(exrec::parse_grade<Soundness>("medium"), Soundness::Medium);
  EXPECT_FALSE(exrec::parse_grade<Completeness>("max"));
  EXPECT_EQ(exrec::parse_type("why_detailed"), T::WhyDetailed);
  EXPECT_EQ(exrec::code(Completeness::High), "HC");
  EXPECT_EQ(exrec::code(Soundness::Low), "LS");
}

TEST(Assemble, BundleCarriesExactlyTheLevelTypes) {
  const auto& world = exrec_test::World::get();
  const auto model = world.profile_model("profile_graphs.json");
  const auto set = exrec::recommend(model, world.corpus, world.store);
  ASSERT_FALSE(set.items.empty());
  const auto& rec = set.items.front();
  for (auto level : exrec::kAllLevels) {
    const auto bundle = exrec::assemble(level, model, rec, world.store);
    EXPECT_EQ(bundle.types(), exrec::types_for_level(level));
    EXPECT_EQ(bundle.publication_id, rec.publication.id);
    EXPECT_TRUE(bundle.what_if_on_demand);
    EXPECT_FALSE(bundle.what_if);
    EXPECT_TRUE(bundle.why_abstract);
  }
  const auto basic = exrec::assemble(ExplanationLevel::Basic, model, rec, world.store);
  EXPECT_FALSE(basic.why_detailed);
  EXPECT_FALSE(basic.how);
}

TEST(Assemble, SuppliedDiffIsEmbedded) {
  const auto& world = exrec_test::World::get();
  const auto model = world.profile_model("profile_graphs.json");
  const auto rec = exrec::recommend(model, world.corpus, world.store).items.front();
  const auto diff = exrec::run_scenario({model, {}}, world.corpus, world.store);
  const auto bundle = exrec::assemble(ExplanationLevel::Intermediate, model, rec, world.store, &diff);
  ASSERT_TRUE(bundle.what_if);
  EXPECT_FALSE(bundle.what_if_on_demand);
  EXPECT_EQ(*bundle.what_if, diff);
}

}  // namespace
