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

#include "threatfair/fairness.h"

#include <algorithm>
#include <cmath>

#include "threatfair/errors.h"

namespace threatfair {
namespace {

void RequireThreshold(double value, const char* name) {
  if (std::isnan(value) || value < 0.0) {
    throw ArgumentError(std::string(name) + " must be >= 0");
  }
}

// Sums in a fixed order so every consumer sees bit-identical totals.
double ColumnSum(const ThreatModel& model, std::size_t k) {
  double sum = 0.0;
  for (std::size_t x = 0; x < model.num_contexts(); ++x) {
    sum += PairError(model, x, k);
  }
  return sum;
}

double RowSum(const ThreatModel& model, std::size_t x) {
  double sum = 0.0;
  for (std::size_t k = 0; k < model.num_causes(); ++k) {
    sum += PairError(model, x, k);
  }
  return sum;
}

}  // namespace

double ErrorMatrix::at(std::string_view context, std::string_view cause) const {
  const auto row = std::find(contexts.begin(), contexts.end(), context);
  const auto col = std::find(causes.begin(), causes.end(), cause);
  if (row == contexts.end() || col == causes.end()) {
    throw LookupError("no matrix entry for (" + std::string(context) + ", " +
                      std::string(cause) + ")");
  }
  return values[row - contexts.begin()][col - causes.begin()];
}

double PairError(const ThreatModel& model, std::size_t x,
                 std::size_t removed) {
  return L1WithoutEntry(FullVector(model, x),
                        RestrictedVector(model, x, removed), removed);
}

double L1WithoutEntry(const ProbabilityVector& full,
                      const ProbabilityVector& restricted,
                      std::size_t removed) {
  double sum = 0.0;
  std::size_t r = 0;
  for (std::size_t k = 0; k < full.values.size(); ++k) {
    if (k == removed) continue;
    sum += std::abs(full.values[k] - restricted.values[r++]);
  }
  return sum;
}

double CausalError(const ThreatModel& model, std::string_view cause) {
  return ColumnSum(model, model.CauseIndex(cause));
}

double ContextualError(const ThreatModel& model, std::string_view context) {
  return RowSum(model, model.ContextIndex(context));
}

ErrorMatrix ComputeErrorMatrix(const ThreatModel& model) {
  ErrorMatrix m;
  for (const auto& ctx : model.contexts()) m.contexts.push_back(ctx.id);
  for (const auto& cause : model.causes()) m.causes.push_back(cause.id);
  m.values.assign(model.num_contexts(),
                  std::vector<double>(model.num_causes(), 0.0));
  for (std::size_t x = 0; x < model.num_contexts(); ++x) {
    const ProbabilityVector full = FullVector(model, x);
    for (std::size_t k = 0; k < model.num_causes(); ++k) {
      const ProbabilityVector restricted = RestrictedVector(model, x, k);
      m.values[x][k] = L1WithoutEntry(full, restricted, k);
      if (restricted.degenerate) {
        m.degenerate_pairs.push_back({m.contexts[x], m.causes[k]});
      }
    }
  }
  return m;
}

FairnessReport ComputeFairnessReport(const ThreatModel& model) {
  const ErrorMatrix m = ComputeErrorMatrix(model);
  FairnessReport report;
  // Accumulate in the same order as ColumnSum/RowSum.
  for (std::size_t k = 0; k < m.causes.size(); ++k) {
    double sum = 0.0;
    for (std::size_t x = 0; x < m.contexts.size(); ++x) sum += m.values[x][k];
    report.causal_errors[m.causes[k]] = sum;
    report.causal_bound = std::max(report.causal_bound, sum);
  }
  for (std::size_t x = 0; x < m.contexts.size(); ++x) {
    double sum = 0.0;
    for (std::size_t k = 0; k < m.causes.size(); ++k) sum += m.values[x][k];
    report.contextual_errors[m.contexts[x]] = sum;
    report.contextual_bound = std::max(report.contextual_bound, sum);
  }
  report.degenerate_pairs = m.degenerate_pairs;
  return report;
}

bool IsLambdaCausallyFair(const FairnessReport& report, double lambda) {
  RequireThreshold(lambda, "lambda");
  return report.causal_bound <= lambda + kBoundSlack;
}

bool IsGammaContextuallyFair(const FairnessReport& report, double gamma) {
  RequireThreshold(gamma, "gamma");
  return report.contextual_bound <= gamma + kBoundSlack;
}

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kSkipped:
      return "skipped";
  }
  return "skipped";
}

CheckResult CheckBounds(const FairnessReport& report,
                        std::optional<double> lambda,
                        std::optional<double> gamma) {
  if (lambda) RequireThreshold(*lambda, "lambda");
  if (gamma) RequireThreshold(*gamma, "gamma");
  CheckResult result;
  result.causal.bound = report.causal_bound;
  result.contextual.bound = report.contextual_bound;
  if (lambda) {
    result.causal.threshold = lambda;
    result.causal.verdict = IsLambdaCausallyFair(report, *lambda)
                                ? Verdict::kPass
                                : Verdict::kFail;
    result.causal.excess = std::max(report.causal_bound - *lambda, 0.0);
  }
  if (gamma) {
    result.contextual.threshold = gamma;
    result.contextual.verdict = IsGammaContextuallyFair(report, *gamma)
                                    ? Verdict::kPass
                                    : Verdict::kFail;
    result.contextual.excess = std::max(report.contextual_bound - *gamma, 0.0);
  }
  return result;
}

}  // namespace threatfair
