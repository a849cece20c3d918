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

#include "threatfair/documents.h"

#include "threatfair/errors.h"
#include "threatfair/model_io.h"

namespace threatfair {
namespace {

using json = nlohmann::json;

json PairsToJson(const std::vector<DegeneratePair>& pairs) {
  json out = json::array();
  for (const DegeneratePair& p : pairs) {
    out.push_back({{"cause", p.cause}, {"context", p.context}});
  }
  return out;
}

json OptionalNumber(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json BoundCheckExcess(const BoundCheck& check) {
  return check.verdict == Verdict::kSkipped ? json(nullptr)
                                            : json(check.excess);
}

}  // namespace

std::string CanonicalDump(const json& doc) { return doc.dump(2) + "\n"; }

json ModelToJson(const ThreatModel& model) {
  const ModelSpec& spec = model.spec();
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["outcome"] = spec.outcome;
  doc["mode"] = std::string(ModeName(spec.mode));

  json causes = json::array();
  for (const Cause& c : spec.causes) {
    json entry{{"id", c.id}};
    if (c.label) entry["label"] = *c.label;
    causes.push_back(std::move(entry));
  }
  doc["causes"] = std::move(causes);

  json contexts = json::array();
  for (const ContextAssignment& c : spec.contexts) {
    json entry{{"id", c.id}, {"weights", c.weights}};
    if (c.label) entry["label"] = *c.label;
    if (c.threat_frequency) entry["threat_frequency"] = *c.threat_frequency;
    if (c.harm_magnitude) entry["harm_magnitude"] = *c.harm_magnitude;
    contexts.push_back(std::move(entry));
  }
  doc["contexts"] = std::move(contexts);

  json overrides = json::array();
  for (const LeaveOneOutOverride& o : spec.overrides) {
    overrides.push_back({{"context", o.context},
                         {"removed_cause", o.removed_cause},
                         {"probabilities", o.probabilities}});
  }
  doc["overrides"] = std::move(overrides);
  return doc;
}

json ValidationToJson(const ValidationReport& report) {
  json violations = json::array();
  for (const Violation& v : report.violations) {
    violations.push_back(
        {{"code", v.code}, {"message", v.message}, {"path", v.path}});
  }
  return {{"ok", report.ok()}, {"violations", std::move(violations)}};
}

json ReportToJson(const FairnessReport& report) {
  return {{"bounds",
           {{"causal", report.causal_bound},
            {"contextual", report.contextual_bound}}},
          {"causal_errors", report.causal_errors},
          {"contextual_errors", report.contextual_errors},
          {"degenerate_pairs", PairsToJson(report.degenerate_pairs)}};
}

json MatrixToJson(const ErrorMatrix& matrix) {
  return {{"causes", matrix.causes},
          {"contexts", matrix.contexts},
          {"values", matrix.values},
          {"degenerate_pairs", PairsToJson(matrix.degenerate_pairs)}};
}

json RankingToJson(const Ranking& ranking) {
  json entries = json::array();
  for (const RankEntry& e : ranking.entries) {
    entries.push_back({{"error", e.error}, {"id", e.id}});
  }
  return {{"kind", ranking.kind == RankKind::kCause ? "cause" : "context"},
          {"entries", std::move(entries)}};
}

json CheckToJson(const CheckResult& check) {
  return {
      {"bounds",
       {{"causal", check.causal.bound},
        {"contextual", check.contextual.bound}}},
      {"causal", std::string(VerdictName(check.causal.verdict))},
      {"contextual", std::string(VerdictName(check.contextual.verdict))},
      {"excesses",
       {{"causal", BoundCheckExcess(check.causal)},
        {"contextual", BoundCheckExcess(check.contextual)}}},
      {"thresholds",
       {{"gamma", OptionalNumber(check.contextual.threshold)},
        {"lambda", OptionalNumber(check.causal.threshold)}}},
  };
}

json EditToJson(const WhatIfEdit& edit) {
  json doc{{"action", edit.action == WhatIfEdit::Action::kRemove ? "remove"
                                                                 : "add"},
           {"cause", edit.cause}};
  if (edit.action == WhatIfEdit::Action::kAdd) doc["weights"] = edit.weights;
  return doc;
}

json DeltaToJson(const WhatIfDelta& delta) {
  return {{"edit", EditToJson(delta.edit)},
          {"before", ReportToJson(delta.before)},
          {"after", ReportToJson(delta.after)},
          {"bound_deltas",
           {{"causal", delta.bound_deltas.causal},
            {"contextual", delta.bound_deltas.contextual}}}};
}

json PlanToJson(const MitigationPlan& plan) {
  json steps = json::array();
  for (const WhatIfDelta& step : plan.steps) steps.push_back(DeltaToJson(step));
  return {{"achieved", plan.achieved},
          {"final_bounds",
           {{"causal", plan.final_bounds.causal},
            {"contextual", plan.final_bounds.contextual}}},
          {"steps", std::move(steps)}};
}

json RiskToJson(const RiskReport& risk) {
  json entries = json::array();
  for (const RiskEntry& e : risk.entries) {
    entries.push_back({{"context", e.context},
                       {"harm_magnitude", e.harm_magnitude},
                       {"risk", e.risk},
                       {"threat_frequency", e.threat_frequency}});
  }
  json skipped = json::array();
  for (const SkippedContext& s : risk.skipped) {
    skipped.push_back({{"context", s.context}, {"reason", s.reason}});
  }
  return {{"entries", std::move(entries)}, {"skipped", std::move(skipped)}};
}

WhatIfEdit EditFromJson(const json& doc) {
  if (!doc.is_object()) throw ArgumentError("body must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "action" && key != "cause" && key != "weights") {
      throw ArgumentError("unknown key '" + key + "'");
    }
  }
  if (!doc.contains("action") || !doc["action"].is_string()) {
    throw ArgumentError("'action' must be \"remove\" or \"add\"");
  }
  if (!doc.contains("cause") || !doc["cause"].is_string()) {
    throw ArgumentError("'cause' must be a string");
  }
  WhatIfEdit edit;
  edit.cause = doc["cause"].get<std::string>();
  const std::string action = doc["action"].get<std::string>();
  if (action == "remove") {
    if (doc.contains("weights")) {
      throw ArgumentError("'weights' is only valid for action \"add\"");
    }
    edit.action = WhatIfEdit::Action::kRemove;
    return edit;
  }
  if (action != "add") {
    throw ArgumentError("'action' must be \"remove\" or \"add\"");
  }
  edit.action = WhatIfEdit::Action::kAdd;
  if (!doc.contains("weights") || !doc["weights"].is_object()) {
    throw ArgumentError("action \"add\" requires a 'weights' object");
  }
  for (const auto& [ctx, w] : doc["weights"].items()) {
    if (!w.is_number()) {
      throw ArgumentError("weight for '" + ctx + "' must be a number");
    }
    edit.weights[ctx] = w.get<double>();
  }
  return edit;
}

}  // namespace threatfair
