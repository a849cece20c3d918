/*
 * Copyright 2026 The threatfair Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "threatfair/diagnosis.h"

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "mitigation_oracle.h"
#include "random_models.h"
#include "test_models.h"
#include "threatfair/errors.h"

namespace threatfair {
namespace {

using ::testing::ElementsAre;
using ::testing::Field;

std::vector<std::string> Ids(const Ranking& r) {
  std::vector<std::string> ids;
  for (const auto& e : r.entries) ids.push_back(e.id);
  return ids;
}

TEST(Rank, CausesDescending) {
  const Ranking r = Rank(testdata::TwoContextModel(), RankKind::kCause);
  EXPECT_THAT(Ids(r), ElementsAre("ph", "ss", "mw"));
}

TEST(Rank, TiesLexicographic) {
  FairnessReport report;
  report.causal_errors = {{"b", 0.3}, {"a", 0.3}};
  EXPECT_THAT(Ids(Rank(report, RankKind::kCause)), ElementsAre("a", "b"));
  // office and cafe both have error 1.
  EXPECT_THAT(Ids(Rank(testdata::TwoContextModel(), RankKind::kContext)),
              ElementsAre("cafe", "office"));
}

TEST(Rank, SingleContext) {
  ModelSpec spec = testdata::TwoContextSpec();
  spec.contexts.pop_back();
  const Ranking r = Rank(ThreatModel::Create(spec), RankKind::kContext);
  EXPECT_THAT(Ids(r), ElementsAre("office"));
}

TEST(Rank, IsPermutationOfIds) {
  testgen::Generator gen(31);
  for (int i = 0; i < 100; ++i) {
    const ThreatModel m = gen.Model();
    const Ranking r = Rank(m, RankKind::kCause);
    ASSERT_EQ(r.entries.size(), m.num_causes());
    for (std::size_t k = 1; k < r.entries.size(); ++k) {
      const auto& prev = r.entries[k - 1];
      const auto& cur = r.entries[k];
      EXPECT_GE(prev.error, cur.error - 1e-12);
      if (std::abs(prev.error - cur.error) < 1e-13) EXPECT_LT(prev.id, cur.id);
    }
    for (const auto& c : m.causes()) {
      EXPECT_EQ(std::count_if(r.entries.begin(), r.entries.end(),
                              [&](const RankEntry& e) { return e.id == c.id; }),
                1);
    }
  }
}

TEST(WhatIfRemove, DropsCauseEverywhere) {
  const WhatIfDelta d = WhatIfRemove(testdata::TwoContextModel(), "mw");
  EXPECT_THAT(d.edited.causes(),
              ElementsAre(Field(&Cause::id, "ss"), Field(&Cause::id, "ph")));
  for (const auto& ctx : d.edited.contexts()) {
    EXPECT_FALSE(ctx.weights.contains("mw"));
  }
  EXPECT_NEAR(d.before.causal_bound, 0.8, 1e-12);
  // office (1/6, 5/6), cafe (2/3, 1/3): ss -> 1/6 + 2/3, ph -> 5/6 + 1/3.
  EXPECT_NEAR(d.after.causal_errors.at("ss"), 1.0 / 6 + 2.0 / 3, 1e-12);
  EXPECT_NEAR(d.after.causal_errors.at("ph"), 5.0 / 6 + 1.0 / 3, 1e-12);
  EXPECT_NEAR(d.bound_deltas.causal, d.after.causal_bound - 0.8, 1e-12);
  EXPECT_NEAR(d.bound_deltas.contextual, 0.0, 1e-12);
}

TEST(WhatIfRemove, DropsReferencingOverrides) {
  ModelSpec spec = testdata::TwoContextSpec();
  spec.overrides = {{"cafe", "ss", {{"ph", 0.2}, {"mw", 0.8}}},
                    {"office", "mw", {{"ss", 0.0}, {"ph", 1.0}}}};
  const ThreatModel m = ThreatModel::Create(spec);
  const WhatIfDelta d = WhatIfRemove(m, "ss");
  EXPECT_TRUE(d.edited.spec().overrides.empty());
  EXPECT_TRUE(ValidateModel(d.edited.spec()).ok());
}

TEST(WhatIfRemove, RefusesLastCause) {
  ModelSpec spec;
  spec.causes = {{"c1", {}}};
  spec.contexts = {{"x", {}, {{"c1", 1.0}}, {}, {}}};
  try {
    WhatIfRemove(ThreatModel::Create(spec), "c1");
    FAIL();
  } catch (const EditError& e) {
    EXPECT_EQ(e.code(), "last_cause");
  }
}

TEST(WhatIfRemove, UnknownCause) {
  EXPECT_THROW(WhatIfRemove(testdata::TwoContextModel(), "keylogger"),
               LookupError);
}

TEST(WhatIfRemove, LeavingOnlyZeroWeightsIsRefused) {
  ModelSpec spec;
  spec.causes = {{"c1", {}}, {"c2", {}}};
  spec.contexts = {{"x", {}, {{"c1", 1.0}, {"c2", 0.0}}, {}, {}}};
  try {
    WhatIfRemove(ThreatModel::Create(spec), "c1");
    FAIL();
  } catch (const EditError& e) {
    EXPECT_EQ(e.code(), "invalid_edit");
  }
}

TEST(WhatIfAdd, ZeroWeightCauseIsInert) {
  const ThreatModel m = testdata::TwoContextModel();
  const WhatIfDelta d = WhatIfAdd(m, "keylogger", {{"office", 0}, {"cafe", 0}});
  for (const auto& [id, e] : d.before.causal_errors) {
    EXPECT_NEAR(d.after.causal_errors.at(id), e, 1e-9);
  }
  EXPECT_NEAR(d.after.causal_errors.at("keylogger"), 0.0, 1e-9);
  for (const auto& [id, e] : d.before.contextual_errors) {
    EXPECT_NEAR(d.after.contextual_errors.at(id), e, 1e-9);
  }
}

TEST(WhatIfAdd, ConditionalStaysZero) {
  const ThreatModel m = ThreatModel::Create(
      testdata::TwoContextSpec(SemanticsMode::kConditional));
  const WhatIfDelta d = WhatIfAdd(m, "kl", {{"office", 0.7}, {"cafe", 0.2}});
  EXPECT_EQ(d.after.causal_bound, 0.0);
  EXPECT_EQ(d.after.contextual_bound, 0.0);
}

TEST(WhatIfAdd, Errors) {
  const ThreatModel m = testdata::TwoContextModel();
  auto code = [&](const std::string& id,
                  const std::map<std::string, double>& w) {
    try {
      WhatIfAdd(m, id, w);
    } catch (const EditError& e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code("ss", {{"office", 1}, {"cafe", 1}}), "duplicate_cause");
  EXPECT_EQ(code("kl", {{"office", 1}}), "missing_context_weight");
  EXPECT_EQ(code("kl", {{"office", 1}, {"cafe", 1}, {"park", 1}}),
            "unknown_context");
  EXPECT_EQ(code("kl", {{"office", -1}, {"cafe", 1}}), "invalid_edit");
  EXPECT_EQ(code("bad id", {{"office", 1}, {"cafe", 1}}), "invalid_edit");
}

TEST(WhatIfAdd, DropsExistingOverrides) {
  ModelSpec spec = testdata::TwoContextSpec();
  spec.overrides = {{"cafe", "ss", {{"ph", 0.2}, {"mw", 0.8}}}};
  const WhatIfDelta d = WhatIfAdd(ThreatModel::Create(spec), "kl",
                                  {{"office", 0.1}, {"cafe", 0.1}});
  EXPECT_TRUE(d.edited.spec().overrides.empty());
}

TEST(WhatIfProperties, RemoveThenAddRestoresErrors) {
  testgen::Generator gen(32);
  testgen::Options opt;
  opt.mode = SemanticsMode::kShares;
  opt.overrides = false;
  opt.min_causes = 2;
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const ThreatModel m = gen.Model(opt);
    const std::string cause = m.causes()[gen.Int(0, static_cast<int>(m.num_causes()) - 1)].id;
    std::map<std::string, double> weights;
    const std::size_t k = m.CauseIndex(cause);
    for (std::size_t x = 0; x < m.num_contexts(); ++x) {
      weights[m.contexts()[x].id] = m.weight(x, k);
    }
    ThreatModel removed = m;
    try {
      removed = RemoveCause(m, cause);
    } catch (const EditError&) {
      continue;  // removal would leave a zero-weight context
    }
    const FairnessReport restored =
        WhatIfAdd(removed, cause, weights).after;
    const FairnessReport original = ComputeFairnessReport(m);
    for (const auto& [id, e] : original.causal_errors) {
      EXPECT_NEAR(restored.causal_errors.at(id), e, 1e-9);
    }
    for (const auto& [id, e] : original.contextual_errors) {
      EXPECT_NEAR(restored.contextual_errors.at(id), e, 1e-9);
    }
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(SuggestMitigation, AlreadyFairIsEmpty) {
  const MitigationPlan plan =
      SuggestMitigation(testdata::TwoContextModel(), 0.8, 1.0, 3);
  EXPECT_TRUE(plan.steps.empty());
  EXPECT_TRUE(plan.achieved);
  EXPECT_NEAR(plan.final_bounds.causal, 0.8, 1e-12);
}

TEST(SuggestMitigation, GreedyMatchesExhaustiveOnFixture) {
  const ModelSpec spec = testdata::TwoContextSpec();
  const MitigationPlan plan =
      SuggestMitigation(ThreatModel::Create(spec), 0.75, 1.0, 2);
  const double greedy = std::max(plan.final_bounds.causal - 0.75, 0.0) +
                        std::max(plan.final_bounds.contextual - 1.0, 0.0);
  EXPECT_GE(greedy + 1e-12, oracle::BestObjective(spec, 0.75, 1.0, 2));
  // Removing one cause from the fixture only raises the causal bound, so
  // greedy correctly stops without a step.
  EXPECT_TRUE(plan.steps.empty());
  EXPECT_FALSE(plan.achieved);
}

TEST(SuggestMitigation, BudgetExhaustion) {
  // Four causes, heavily skewed: one removal cannot reach lambda = 0.
  ModelSpec spec;
  spec.causes = {{"a", {}}, {"b", {}}, {"c", {}}, {"d", {}}};
  spec.contexts = {{"x", {}, {{"a", 4}, {"b", 3}, {"c", 2}, {"d", 1}}, {}, {}}};
  spec.overrides = {{"x", "a", {{"b", 1}, {"c", 0}, {"d", 0}}}};
  const MitigationPlan plan =
      SuggestMitigation(ThreatModel::Create(spec), 0.0, 0.0, 1);
  EXPECT_EQ(plan.steps.size(), 1u);
  EXPECT_FALSE(plan.achieved);
}

TEST(SuggestMitigation, ArgumentErrors) {
  const ThreatModel m = testdata::TwoContextModel();
  EXPECT_THROW(SuggestMitigation(m, -1.0, 0.0, 1), ArgumentError);
  EXPECT_THROW(SuggestMitigation(m, 0.0, -1.0, 1), ArgumentError);
  EXPECT_THROW(SuggestMitigation(m, 0.0, 0.0, 0), ArgumentError);
}

TEST(SuggestMitigation, PropertiesAgainstExhaustiveSearch) {
  testgen::Generator gen(33);
  testgen::Options opt;
  opt.max_causes = 4;
  for (int i = 0; i < 150; ++i) {
    const ModelSpec spec = gen.Spec(opt);
    const ThreatModel m = ThreatModel::Create(spec);
    const double lambda = gen.Uniform(0.0, 1.5);
    const double gamma = gen.Uniform(0.0, 2.0);
    const int budget = gen.Int(1, 3);
    const MitigationPlan plan = SuggestMitigation(m, lambda, gamma, budget);

    EXPECT_LE(static_cast<int>(plan.steps.size()), budget);
    ThreatModel replay = m;
    double prev = MitigationObjective(ComputeFairnessReport(m), lambda, gamma);
    for (const WhatIfDelta& step : plan.steps) {
      replay = RemoveCause(replay, step.edit.cause);
      EXPECT_GE(replay.num_causes(), 1u);
      const FairnessReport r = ComputeFairnessReport(replay);
      EXPECT_EQ(r, step.after);
      const double obj = MitigationObjective(r, lambda, gamma);
      EXPECT_LT(obj, prev);
      prev = obj;
    }
    const FairnessReport final_report = ComputeFairnessReport(replay);
    EXPECT_EQ(plan.final_bounds.causal, final_report.causal_bound);
    EXPECT_EQ(plan.final_bounds.contextual, final_report.contextual_bound);
    EXPECT_EQ(plan.achieved, IsLambdaCausallyFair(final_report, lambda) &&
                                 IsGammaContextuallyFair(final_report, gamma));
    EXPECT_GE(prev + 1e-9, oracle::BestObjective(spec, lambda, gamma, budget));
  }
}

TEST(ContextualRisk, Product) {
  const ThreatModel m = testdata::TwoContextModel();
  const RiskEntry cafe = ContextualRisk(m, "cafe");
  EXPECT_EQ(cafe.threat_frequency, 0.2);
  EXPECT_EQ(cafe.harm_magnitude, 50.0);
  EXPECT_EQ(cafe.risk, 0.2 * 50.0);
  EXPECT_NEAR(cafe.risk, 10.0, 1e-12);
}

TEST(ContextualRisk, ZeroFrequency) {
  ModelSpec spec = testdata::TwoContextSpec();
  spec.contexts[0].threat_frequency = 0.0;
  EXPECT_EQ(ContextualRisk(ThreatModel::Create(spec), "office").risk, 0.0);
}

TEST(ContextualRisk, MissingInputs) {
  ModelSpec spec = testdata::TwoContextSpec();
  spec.contexts[0].harm_magnitude.reset();
  const ThreatModel m = ThreatModel::Create(spec);
  EXPECT_THROW(ContextualRisk(m, "office"), RiskInputsMissing);
  EXPECT_THROW(ContextualRisk(m, "park"), LookupError);
}

TEST(RiskReport, SortedDescending) {
  const RiskReport r = ComputeRiskReport(testdata::TwoContextModel());
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0].context, "cafe");
  EXPECT_NEAR(r.entries[0].risk, 10.0, 1e-12);
  EXPECT_EQ(r.entries[1].context, "office");
  EXPECT_NEAR(r.entries[1].risk, 5.0, 1e-12);
  EXPECT_TRUE(r.skipped.empty());
}

TEST(RiskReport, NoInputsAllSkipped) {
  ModelSpec spec = testdata::TwoContextSpec();
  for (auto& ctx : spec.contexts) {
    ctx.threat_frequency.reset();
    ctx.harm_magnitude.reset();
  }
  const RiskReport r = ComputeRiskReport(ThreatModel::Create(spec));
  EXPECT_TRUE(r.entries.empty());
  EXPECT_THAT(r.skipped,
              ElementsAre(SkippedContext{"office", "risk_inputs_missing"},
                          SkippedContext{"cafe", "risk_inputs_missing"}));
}

TEST(RiskReport, PartialInputsSkippedWithReason) {
  ModelSpec spec = testdata::TwoContextSpec();
  spec.contexts[0].threat_frequency.reset();
  spec.contexts[1].harm_magnitude.reset();
  const RiskReport r = ComputeRiskReport(ThreatModel::Create(spec));
  EXPECT_TRUE(r.entries.empty());
  EXPECT_THAT(r.skipped,
              ElementsAre(SkippedContext{"office", "threat_frequency_missing"},
                          SkippedContext{"cafe", "harm_magnitude_missing"}));
}

TEST(RiskReport, EqualRisksById) {
  ModelSpec spec = testdata::TwoContextSpec();
  spec.contexts[0].threat_frequency = 1.0;  // office 1 x 10
  spec.contexts[1].threat_frequency = 0.5;  // cafe 0.5 x 20
  spec.contexts[1].harm_magnitude = 20.0;
  const RiskReport r = ComputeRiskReport(ThreatModel::Create(spec));
  EXPECT_EQ(r.entries[0].context, "cafe");
  EXPECT_EQ(r.entries[1].context, "office");
}

TEST(RiskReport, ExactProductOnRandomModels) {
  testgen::Generator gen(34);
  for (int i = 0; i < 200; ++i) {
    const ThreatModel m = gen.Model();
    const RiskReport r = ComputeRiskReport(m);
    EXPECT_EQ(r.entries.size() + r.skipped.size(), m.num_contexts());
    for (const RiskEntry& e : r.entries) {
      EXPECT_EQ(e.risk, e.threat_frequency * e.harm_magnitude);
    }
  }
}

}  // namespace
}  // namespace threatfair
