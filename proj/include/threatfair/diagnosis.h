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

#ifndef THREATFAIR_DIAGNOSIS_H_
#define THREATFAIR_DIAGNOSIS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "threatfair/fairness.h"
#include "threatfair/model.h"

namespace threatfair {

enum class RankKind { kCause, kContext };

struct RankEntry {
  std::string id;
  double error = 0.0;

  bool operator==(const RankEntry&) const = default;
};

// Descending by error; errors equal to within 1e-12 are ordered by id.
struct Ranking {
  RankKind kind = RankKind::kCause;
  std::vector<RankEntry> entries;
};

Ranking Rank(const FairnessReport& report, RankKind kind);
Ranking Rank(const ThreatModel& model, RankKind kind);

struct WhatIfEdit {
  enum class Action { kRemove, kAdd };

  Action action = Action::kRemove;
  std::string cause;
  std::map<std::string, double> weights;  // per context; kAdd only

  bool operator==(const WhatIfEdit&) const = default;
};

struct BoundDeltas {
  double causal = 0.0;      // after - before
  double contextual = 0.0;  // after - before
};

struct WhatIfDelta {
  WhatIfEdit edit;
  FairnessReport before;
  FairnessReport after;
  BoundDeltas bound_deltas;
  ThreatModel edited;  // the model `after` was computed on
};

// Structural edits. Removal drops the cause from the universe and every
// weight map, and discards every override that names it (which, since
// override keys span all surviving causes, is every override). Addition
// appends the cause with the given per-context weights; existing overrides
// no longer cover the enlarged universe and are discarded too, and none
// are synthesized.
// Throw EditError ("last_cause", "duplicate_cause", "missing_context_weight",
// "unknown_context", "invalid_edit") or LookupError for an unknown cause.
ThreatModel RemoveCause(const ThreatModel& model, std::string_view cause);
ThreatModel AddCause(const ThreatModel& model, std::string_view cause,
                     const std::map<std::string, double>& weights);
ThreatModel ApplyEdit(const ThreatModel& model, const WhatIfEdit& edit);

WhatIfDelta WhatIfRemove(const ThreatModel& model, std::string_view cause);
WhatIfDelta WhatIfAdd(const ThreatModel& model, std::string_view cause,
                      const std::map<std::string, double>& weights);
WhatIfDelta WhatIf(const ThreatModel& model, const WhatIfEdit& edit);

struct Bounds {
  double causal = 0.0;
  double contextual = 0.0;

  bool operator==(const Bounds&) const = default;
};

struct MitigationPlan {
  std::vector<WhatIfDelta> steps;
  bool achieved = false;
  Bounds final_bounds;
};

// max(causal_bound - lambda, 0) + max(contextual_bound - gamma, 0).
double MitigationObjective(const FairnessReport& report, double lambda,
                           double gamma);

// Greedy single-cause removal. Each round evaluates every valid removal
// (one that leaves every shares context some weight), applies
// the one with the lowest objective (ties by cause id) if it strictly
// improves on the current objective, and stops once the targets hold, the
// step budget is spent, one cause is left, or nothing improves.
// Throws ArgumentError for negative thresholds or max_steps == 0.
MitigationPlan SuggestMitigation(const ThreatModel& model, double lambda,
                                 double gamma, int max_steps);

struct RiskEntry {
  std::string context;
  double threat_frequency = 0.0;
  double harm_magnitude = 0.0;
  double risk = 0.0;

  bool operator==(const RiskEntry&) const = default;
};

struct SkippedContext {
  std::string context;
  std::string reason;  // threat_frequency_missing, harm_magnitude_missing,
                       // or risk_inputs_missing (both absent)

  bool operator==(const SkippedContext&) const = default;
};

struct RiskReport {
  std::vector<RiskEntry> entries;  // descending by risk, ties by id
  std::vector<SkippedContext> skipped;  // model order
};

// Context-conditioned FAIR risk: frequency x magnitude for one context.
// Throws RiskInputsMissing when either input is unset.
RiskEntry ContextualRisk(const ThreatModel& model, std::string_view context);
RiskReport ComputeRiskReport(const ThreatModel& model);

}  // namespace threatfair

#endif  // THREATFAIR_DIAGNOSIS_H_
