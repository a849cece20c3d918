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

#include <algorithm>
#include <cmath>
#include <utility>

#include "threatfair/errors.h"

namespace threatfair {
namespace {

ThreatModel Rebuild(ModelSpec spec) {
  try {
    return ThreatModel::Create(std::move(spec));
  } catch (const ValidationError& e) {
    throw EditError("invalid_edit", e.what());
  }
}

WhatIfDelta MakeDelta(const ThreatModel& model, WhatIfEdit edit,
                      ThreatModel edited) {
  FairnessReport before = ComputeFairnessReport(model);
  FairnessReport after = ComputeFairnessReport(edited);
  BoundDeltas deltas{after.causal_bound - before.causal_bound,
                     after.contextual_bound - before.contextual_bound};
  return WhatIfDelta{std::move(edit), std::move(before), std::move(after),
                     deltas, std::move(edited)};
}

// Errors are compared on a 1e-12 grid so that float noise in otherwise
// equal sums (e.g. 1 vs 0.9999999999999999) falls back to the id order.
long long RankKey(double error) { return std::llround(error / kBoundSlack); }

}  // namespace

Ranking Rank(const FairnessReport& report, RankKind kind) {
  const auto& errors = kind == RankKind::kCause ? report.causal_errors
                                                : report.contextual_errors;
  Ranking ranking{kind, {}};
  for (const auto& [id, error] : errors) ranking.entries.push_back({id, error});
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const RankEntry& a, const RankEntry& b) {
                     const long long ka = RankKey(a.error);
                     const long long kb = RankKey(b.error);
                     if (ka != kb) return ka > kb;
                     return a.id < b.id;
                   });
  return ranking;
}

Ranking Rank(const ThreatModel& model, RankKind kind) {
  return Rank(ComputeFairnessReport(model), kind);
}

ThreatModel RemoveCause(const ThreatModel& model, std::string_view cause) {
  model.CauseIndex(cause);  // LookupError if absent
  if (model.num_causes() < 2) {
    throw EditError("last_cause",
                    "cannot remove '" + std::string(cause) +
                        "': the cause universe would be empty");
  }
  ModelSpec spec = model.spec();
  std::erase_if(spec.causes, [&](const Cause& c) { return c.id == cause; });
  for (ContextAssignment& ctx : spec.contexts) {
    ctx.weights.erase(std::string(cause));
  }
  std::erase_if(spec.overrides, [&](const LeaveOneOutOverride& ov) {
    return ov.removed_cause == cause ||
           ov.probabilities.contains(std::string(cause));
  });
  return Rebuild(std::move(spec));
}

ThreatModel AddCause(const ThreatModel& model, std::string_view cause,
                     const std::map<std::string, double>& weights) {
  if (model.HasCause(cause)) {
    throw EditError("duplicate_cause",
                    "cause '" + std::string(cause) + "' already exists");
  }
  for (const auto& [ctx, w] : weights) {
    if (!model.HasContext(ctx)) {
      throw EditError("unknown_context",
                      "weight given for unknown context '" + ctx + "'");
    }
  }
  ModelSpec spec = model.spec();
  for (ContextAssignment& ctx : spec.contexts) {
    auto it = weights.find(ctx.id);
    if (it == weights.end()) {
      throw EditError("missing_context_weight",
                      "no weight for context '" + ctx.id + "'");
    }
    ctx.weights[std::string(cause)] = it->second;
  }
  spec.causes.push_back({std::string(cause), std::nullopt});
  spec.overrides.clear();
  return Rebuild(std::move(spec));
}

ThreatModel ApplyEdit(const ThreatModel& model, const WhatIfEdit& edit) {
  return edit.action == WhatIfEdit::Action::kRemove
             ? RemoveCause(model, edit.cause)
             : AddCause(model, edit.cause, edit.weights);
}

WhatIfDelta WhatIfRemove(const ThreatModel& model, std::string_view cause) {
  return WhatIf(model, {WhatIfEdit::Action::kRemove, std::string(cause), {}});
}

WhatIfDelta WhatIfAdd(const ThreatModel& model, std::string_view cause,
                      const std::map<std::string, double>& weights) {
  return WhatIf(model, {WhatIfEdit::Action::kAdd, std::string(cause), weights});
}

WhatIfDelta WhatIf(const ThreatModel& model, const WhatIfEdit& edit) {
  ThreatModel edited = ApplyEdit(model, edit);
  return MakeDelta(model, edit, std::move(edited));
}

double MitigationObjective(const FairnessReport& report, double lambda,
                           double gamma) {
  return std::max(report.causal_bound - lambda, 0.0) +
         std::max(report.contextual_bound - gamma, 0.0);
}

MitigationPlan SuggestMitigation(const ThreatModel& model, double lambda,
                                 double gamma, int max_steps) {
  if (max_steps < 1) throw ArgumentError("max_steps must be >= 1");
  FairnessReport report = ComputeFairnessReport(model);
  const bool causal_ok = IsLambdaCausallyFair(report, lambda);
  const bool contextual_ok = IsGammaContextuallyFair(report, gamma);
  bool achieved = causal_ok && contextual_ok;

  MitigationPlan plan;
  ThreatModel current = model;
  double objective = MitigationObjective(report, lambda, gamma);
  while (!achieved && static_cast<int>(plan.steps.size()) < max_steps &&
         current.num_causes() > 1) {
    std::vector<std::string> ids;
    for (const Cause& c : current.causes()) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());

    std::optional<WhatIfDelta> best;
    double best_objective = 0.0;
    for (const std::string& id : ids) {
      std::optional<WhatIfDelta> attempt;
      try {
        attempt = WhatIfRemove(current, id);
      } catch (const EditError&) {
        continue;  // would leave a shares context with no weight
      }
      WhatIfDelta& delta = *attempt;
      const double value = MitigationObjective(delta.after, lambda, gamma);
      if (!best || value < best_objective) {
        best_objective = value;
        best = std::move(delta);
      }
    }
    if (!best || !(best_objective < objective)) break;

    objective = best_objective;
    report = best->after;
    current = best->edited;
    plan.steps.push_back(std::move(*best));
    achieved = IsLambdaCausallyFair(report, lambda) &&
               IsGammaContextuallyFair(report, gamma);
  }
  plan.achieved = achieved;
  plan.final_bounds = {report.causal_bound, report.contextual_bound};
  return plan;
}

RiskEntry ContextualRisk(const ThreatModel& model, std::string_view context) {
  const ContextAssignment& ctx = model.contexts()[model.ContextIndex(context)];
  if (!ctx.threat_frequency || !ctx.harm_magnitude) {
    throw RiskInputsMissing("context '" + ctx.id +
                            "' lacks threat_frequency or harm_magnitude");
  }
  return RiskEntry{ctx.id, *ctx.threat_frequency, *ctx.harm_magnitude,
                   *ctx.threat_frequency * *ctx.harm_magnitude};
}

RiskReport ComputeRiskReport(const ThreatModel& model) {
  RiskReport report;
  for (const ContextAssignment& ctx : model.contexts()) {
    if (ctx.threat_frequency && ctx.harm_magnitude) {
      report.entries.push_back(ContextualRisk(model, ctx.id));
    } else if (!ctx.threat_frequency && !ctx.harm_magnitude) {
      report.skipped.push_back({ctx.id, RiskInputsMissing::kCode});
    } else if (!ctx.threat_frequency) {
      report.skipped.push_back({ctx.id, "threat_frequency_missing"});
    } else {
      report.skipped.push_back({ctx.id, "harm_magnitude_missing"});
    }
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const RiskEntry& a, const RiskEntry& b) {
              if (a.risk != b.risk) return a.risk > b.risk;
              return a.context < b.context;
            });
  return report;
}

}  // namespace threatfair
