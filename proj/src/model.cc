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

#include "threatfair/model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <utility>

#include "threatfair/errors.h"

namespace threatfair {
namespace {

bool IsValidId(std::string_view id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char ch) {
    return std::isspace(static_cast<unsigned char>(ch)) != 0;
  });
}

std::string Indexed(std::string_view field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

class Collector {
 public:
  void Add(std::string path, std::string code, std::string message) {
    report_.violations.push_back(
        {std::move(path), std::move(code), std::move(message)});
  }
  ValidationReport Take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

void CheckIds(const std::vector<std::string>& ids, std::string_view field,
              std::string_view duplicate_code, Collector& out) {
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::string path = Indexed(field, i) + ".id";
    if (!IsValidId(ids[i])) {
      out.Add(path, "invalid_id",
              "id must be nonempty and contain no whitespace");
    } else if (!seen.insert(ids[i]).second) {
      out.Add(path, std::string(duplicate_code),
              "duplicate id '" + ids[i] + "'");
    }
  }
}

void CheckOptionalQuantity(const std::optional<double>& value,
                           const std::string& path, std::string_view name,
                           Collector& out) {
  if (!value) return;
  if (!std::isfinite(*value)) {
    out.Add(path, "non_finite_" + std::string(name),
            std::string(name) + " must be finite");
  } else if (*value < 0.0) {
    out.Add(path, "negative_" + std::string(name),
            std::string(name) + " must be >= 0");
  }
}

void CheckWeights(const ModelSpec& spec, const std::set<std::string>& causes,
                  std::size_t x, Collector& out) {
  const ContextAssignment& ctx = spec.contexts[x];
  const std::string base = Indexed("contexts", x) + ".weights";
  for (const Cause& cause : spec.causes) {
    if (!ctx.weights.contains(cause.id)) {
      out.Add(base + "." + cause.id, "missing_weight",
              "no weight for cause '" + cause.id + "'");
    }
  }
  double total = 0.0;
  bool any_positive = false;
  for (const auto& [id, w] : ctx.weights) {
    const std::string path = base + "." + id;
    if (!causes.contains(id)) {
      out.Add(path, "unknown_cause", "weight for undeclared cause '" + id + "'");
      continue;
    }
    if (!std::isfinite(w)) {
      out.Add(path, "non_finite_weight", "weight must be finite");
      continue;
    }
    if (w < 0.0) {
      out.Add(path, "negative_weight", "weight must be >= 0");
      continue;
    }
    if (spec.mode == SemanticsMode::kConditional && w > 1.0) {
      out.Add(path, "weight_above_one",
              "conditional-mode weight must lie in [0,1]");
    }
    total += w;
    any_positive = any_positive || w > 0.0;
  }
  if (spec.mode == SemanticsMode::kShares) {
    if (!any_positive && !spec.causes.empty()) {
      out.Add(base, "zero_total_weight",
              "shares mode needs at least one positive weight");
    } else if (!std::isfinite(total)) {
      out.Add(base, "weight_sum_overflow", "weights sum to infinity");
    }
  }
}

void CheckOverrides(const ModelSpec& spec, const std::set<std::string>& causes,
                    const std::set<std::string>& contexts, Collector& out) {
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < spec.overrides.size(); ++i) {
    const LeaveOneOutOverride& ov = spec.overrides[i];
    const std::string base = Indexed("overrides", i);
    bool refs_ok = true;
    if (!contexts.contains(ov.context)) {
      out.Add(base + ".context", "unknown_context",
              "override references undeclared context '" + ov.context + "'");
      refs_ok = false;
    }
    if (!causes.contains(ov.removed_cause)) {
      out.Add(base + ".removed_cause", "unknown_cause",
              "override removes undeclared cause '" + ov.removed_cause + "'");
      refs_ok = false;
    }
    if (refs_ok && !seen.emplace(ov.context, ov.removed_cause).second) {
      out.Add(base, "duplicate_override",
              "second override for (" + ov.context + ", " + ov.removed_cause +
                  ")");
    }

    const std::string probs = base + ".probabilities";
    if (ov.probabilities.contains(ov.removed_cause)) {
      out.Add(probs + "." + ov.removed_cause, "removed_cause_present",
              "probabilities must not include the removed cause");
    }
    for (const Cause& cause : spec.causes) {
      if (cause.id != ov.removed_cause &&
          !ov.probabilities.contains(cause.id)) {
        out.Add(probs + "." + cause.id, "missing_probability",
                "no probability for surviving cause '" + cause.id + "'");
      }
    }
    double sum = 0.0;
    bool values_ok = true;
    for (const auto& [id, p] : ov.probabilities) {
      if (id == ov.removed_cause) continue;
      const std::string path = probs + "." + id;
      if (!causes.contains(id)) {
        out.Add(path, "unknown_cause",
                "probability for undeclared cause '" + id + "'");
        values_ok = false;
        continue;
      }
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        out.Add(path, "probability_out_of_range",
                "override probability must lie in [0,1]");
        values_ok = false;
        continue;
      }
      sum += p;
    }
    if (spec.mode == SemanticsMode::kShares && values_ok && sum != 0.0 &&
        std::abs(sum - 1.0) > kSumTolerance) {
      out.Add(probs, "override_not_normalized",
              "shares-mode override must sum to 1 (or 0); got " +
                  std::to_string(sum));
    }
  }
}

}  // namespace

std::string_view ModeName(SemanticsMode mode) {
  return mode == SemanticsMode::kShares ? "shares" : "conditional";
}

std::optional<SemanticsMode> ParseMode(std::string_view name) {
  if (name == "shares") return SemanticsMode::kShares;
  if (name == "conditional") return SemanticsMode::kConditional;
  return std::nullopt;
}

bool ValidationReport::Has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

ValidationReport ValidateModel(const ModelSpec& spec) {
  Collector out;
  if (spec.causes.empty()) {
    out.Add("causes", "empty_causes", "at least one cause is required");
  }
  if (spec.contexts.empty()) {
    out.Add("contexts", "empty_contexts", "at least one context is required");
  }

  std::vector<std::string> cause_ids;
  for (const Cause& c : spec.causes) cause_ids.push_back(c.id);
  std::vector<std::string> context_ids;
  for (const ContextAssignment& c : spec.contexts) context_ids.push_back(c.id);
  CheckIds(cause_ids, "causes", "duplicate_cause", out);
  CheckIds(context_ids, "contexts", "duplicate_context", out);

  const std::set<std::string> causes(cause_ids.begin(), cause_ids.end());
  const std::set<std::string> contexts(context_ids.begin(),
                                       context_ids.end());
  for (std::size_t x = 0; x < spec.contexts.size(); ++x) {
    CheckWeights(spec, causes, x, out);
    const std::string base = Indexed("contexts", x);
    CheckOptionalQuantity(spec.contexts[x].threat_frequency,
                          base + ".threat_frequency", "threat_frequency", out);
    CheckOptionalQuantity(spec.contexts[x].harm_magnitude,
                          base + ".harm_magnitude", "harm_magnitude", out);
  }
  CheckOverrides(spec, causes, contexts, out);
  return out.Take();
}

namespace {

std::string Summarize(const ValidationReport& report) {
  std::string msg = "model failed validation";
  if (!report.violations.empty()) {
    const Violation& v = report.violations.front();
    msg += ": " + v.path + ": " + v.code;
    if (report.violations.size() > 1) {
      msg += " (+" + std::to_string(report.violations.size() - 1) + " more)";
    }
  }
  return msg;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(Summarize(report)), report_(std::move(report)) {}

ThreatModel ThreatModel::Create(ModelSpec spec) {
  ValidationReport report = ValidateModel(spec);
  if (!report.ok()) throw ValidationError(std::move(report));
  return ThreatModel(std::move(spec));
}

ThreatModel::ThreatModel(ModelSpec spec) : spec_(std::move(spec)) {
  const std::size_t n = spec_.causes.size();
  for (std::size_t k = 0; k < n; ++k) cause_index_[spec_.causes[k].id] = k;
  weights_.resize(spec_.contexts.size());
  overrides_.resize(spec_.contexts.size());
  for (std::size_t x = 0; x < spec_.contexts.size(); ++x) {
    context_index_[spec_.contexts[x].id] = x;
    weights_[x].reserve(n);
    for (const Cause& c : spec_.causes) {
      weights_[x].push_back(spec_.contexts[x].weights.at(c.id));
    }
    overrides_[x].resize(n);
  }
  for (const LeaveOneOutOverride& ov : spec_.overrides) {
    const std::size_t x = context_index_.at(ov.context);
    const std::size_t removed = cause_index_.at(ov.removed_cause);
    std::vector<double> values;
    values.reserve(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      if (k != removed) values.push_back(ov.probabilities.at(spec_.causes[k].id));
    }
    overrides_[x][removed] = std::move(values);
  }
}

std::size_t ThreatModel::CauseIndex(std::string_view id) const {
  auto it = cause_index_.find(id);
  if (it == cause_index_.end()) {
    throw LookupError("unknown cause '" + std::string(id) + "'");
  }
  return it->second;
}

std::size_t ThreatModel::ContextIndex(std::string_view id) const {
  auto it = context_index_.find(id);
  if (it == context_index_.end()) {
    throw LookupError("unknown context '" + std::string(id) + "'");
  }
  return it->second;
}

bool ThreatModel::HasCause(std::string_view id) const {
  return cause_index_.find(id) != cause_index_.end();
}

bool ThreatModel::HasContext(std::string_view id) const {
  return context_index_.find(id) != context_index_.end();
}

const std::vector<double>* ThreatModel::Override(std::size_t x,
                                                 std::size_t removed) const {
  const auto& slot = overrides_.at(x).at(removed);
  return slot ? &*slot : nullptr;
}

ProbabilityVector FullVector(const ThreatModel& model, std::size_t x) {
  const std::size_t n = model.num_causes();
  ProbabilityVector out;
  out.universe.reserve(n);
  out.values.reserve(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) total += model.weight(x, k);
  for (std::size_t k = 0; k < n; ++k) {
    out.universe.push_back(model.causes()[k].id);
    const double w = model.weight(x, k);
    out.values.push_back(model.mode() == SemanticsMode::kShares ? w / total
                                                                : w);
  }
  return out;
}

ProbabilityVector RestrictedVector(const ThreatModel& model, std::size_t x,
                                   std::size_t removed) {
  const std::size_t n = model.num_causes();
  if (removed >= n) throw LookupError("cause index out of range");
  ProbabilityVector out;
  out.universe.reserve(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (k != removed) out.universe.push_back(model.causes()[k].id);
  }

  const bool shares = model.mode() == SemanticsMode::kShares;
  if (const std::vector<double>* ov = model.Override(x, removed)) {
    out.values = *ov;
    out.degenerate = shares && std::all_of(out.values.begin(), out.values.end(),
                                           [](double v) { return v == 0.0; });
    return out;
  }

  out.values.reserve(n - 1);
  if (!shares) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != removed) out.values.push_back(model.weight(x, k));
    }
    return out;
  }
  double residual = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != removed) residual += model.weight(x, k);
  }
  if (residual == 0.0) {
    out.values.assign(n - 1, 0.0);
    out.degenerate = true;
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k != removed) out.values.push_back(model.weight(x, k) / residual);
  }
  return out;
}

ProbabilityVector FullVector(const ThreatModel& model,
                             std::string_view context) {
  return FullVector(model, model.ContextIndex(context));
}

ProbabilityVector RestrictedVector(const ThreatModel& model,
                                   std::string_view context,
                                   std::string_view removed) {
  const std::size_t x = model.ContextIndex(context);
  return RestrictedVector(model, x, model.CauseIndex(removed));
}

}  // namespace threatfair
