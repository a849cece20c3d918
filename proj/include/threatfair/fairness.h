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

// Leave-one-out fairness errors.
//
// For a context X and a cause c, the building block is
//
//   M[X][c] = sum_{c' != c} | p_X(c' | all causes) - p_X(c' | all but c) |
//
// i.e. the l1 distance between the full and the leave-c-out vectors with
// the entry for c dropped. The causal error of c sums M[.][c] over all
// contexts; the contextual error of X sums M[X][.] over all causes. A model
// is lambda-causally fair when the largest causal error is <= lambda, and
// gamma-contextually fair when the largest contextual error is <= gamma.

#ifndef THREATFAIR_FAIRNESS_H_
#define THREATFAIR_FAIRNESS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "threatfair/model.h"

namespace threatfair {

// Slack applied to the "<= threshold" fairness comparisons.
inline constexpr double kBoundSlack = 1e-12;

struct DegeneratePair {
  std::string context;
  std::string cause;

  bool operator==(const DegeneratePair&) const = default;
};

struct ErrorMatrix {
  std::vector<std::string> contexts;       // rows, model order
  std::vector<std::string> causes;         // columns, model order
  std::vector<std::vector<double>> values;  // values[x][k]
  std::vector<DegeneratePair> degenerate_pairs;

  double at(std::string_view context, std::string_view cause) const;
};

struct FairnessReport {
  std::map<std::string, double> causal_errors;
  std::map<std::string, double> contextual_errors;
  double causal_bound = 0.0;
  double contextual_bound = 0.0;
  std::vector<DegeneratePair> degenerate_pairs;

  bool operator==(const FairnessReport&) const = default;
};

// l1 distance between `full` and `restricted`, skipping entry `removed` of
// `full` (the restricted vector has no entry for it).
double L1WithoutEntry(const ProbabilityVector& full,
                      const ProbabilityVector& restricted,
                      std::size_t removed);

// Inner sum for one (context, left-out cause) pair, by index.
double PairError(const ThreatModel& model, std::size_t x, std::size_t removed);

double CausalError(const ThreatModel& model, std::string_view cause);
double ContextualError(const ThreatModel& model, std::string_view context);

ErrorMatrix ComputeErrorMatrix(const ThreatModel& model);
FairnessReport ComputeFairnessReport(const ThreatModel& model);

enum class Verdict { kPass, kFail, kSkipped };

std::string_view VerdictName(Verdict verdict);

struct BoundCheck {
  Verdict verdict = Verdict::kSkipped;
  double bound = 0.0;
  std::optional<double> threshold;
  // max(bound - threshold, 0); 0 when skipped.
  double excess = 0.0;
};

struct CheckResult {
  BoundCheck causal;
  BoundCheck contextual;

  bool AnyFailed() const {
    return causal.verdict == Verdict::kFail ||
           contextual.verdict == Verdict::kFail;
  }
};

// Evaluates whichever thresholds are present; absent ones are skipped.
CheckResult CheckBounds(const FairnessReport& report,
                        std::optional<double> lambda,
                        std::optional<double> gamma);

// Throw ArgumentError on negative (or NaN) thresholds.
bool IsLambdaCausallyFair(const FairnessReport& report, double lambda);
bool IsGammaContextuallyFair(const FairnessReport& report, double gamma);

}  // namespace threatfair

#endif  // THREATFAIR_FAIRNESS_H_
