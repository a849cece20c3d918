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

// Threat-model data types and the probability vectors derived from them.
//
// A model fixes one outcome, a universe of causes and a set of contexts.
// Each context assigns a nonnegative weight to every cause. How those
// weights become probabilities depends on the semantics mode:
//
//   shares       weights are contribution shares; the vector over a
//                universe is the weights normalized over that universe.
//                Leaving a cause out renormalizes the survivors.
//   conditional  weights are standalone conditional probabilities in
//                [0,1]; leaving a cause out keeps the survivors verbatim.
//
// In both modes an explicit leave-one-out override for a (context, cause)
// pair replaces the default restricted vector.

#ifndef THREATFAIR_MODEL_H_
#define THREATFAIR_MODEL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace threatfair {

// Absolute tolerance for normalization and sum checks.
inline constexpr double kSumTolerance = 1e-9;

enum class SemanticsMode { kShares, kConditional };

std::string_view ModeName(SemanticsMode mode);
std::optional<SemanticsMode> ParseMode(std::string_view name);

struct Cause {
  std::string id;
  std::optional<std::string> label;

  bool operator==(const Cause&) const = default;
};

struct ContextAssignment {
  std::string id;
  std::optional<std::string> label;
  std::map<std::string, double> weights;  // keyed by cause id
  std::optional<double> threat_frequency;
  std::optional<double> harm_magnitude;

  bool operator==(const ContextAssignment&) const = default;
};

// Analyst-elicited probabilities over the universe with `removed_cause`
// taken out. Keys must be exactly the surviving causes.
struct LeaveOneOutOverride {
  std::string context;
  std::string removed_cause;
  std::map<std::string, double> probabilities;

  bool operator==(const LeaveOneOutOverride&) const = default;
};

// Unvalidated model candidate. This is what loaders and what-if edits
// build; ThreatModel::Create turns it into an immutable validated model.
struct ModelSpec {
  std::string outcome;
  SemanticsMode mode = SemanticsMode::kShares;
  std::vector<Cause> causes;
  std::vector<ContextAssignment> contexts;
  std::vector<LeaveOneOutOverride> overrides;

  bool operator==(const ModelSpec&) const = default;
};

struct Violation {
  std::string path;    // e.g. "contexts[1].weights.phishing"
  std::string code;    // e.g. "missing_weight"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Has(std::string_view code) const;
};

ValidationReport ValidateModel(const ModelSpec& spec);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct ProbabilityVector {
  std::vector<std::string> universe;
  std::vector<double> values;
  bool degenerate = false;
};

// Validated, immutable threat model. Copies are independent values.
class ThreatModel {
 public:
  // Throws ValidationError when the candidate breaks any invariant.
  static ThreatModel Create(ModelSpec spec);

  const ModelSpec& spec() const { return spec_; }
  const std::string& outcome() const { return spec_.outcome; }
  SemanticsMode mode() const { return spec_.mode; }
  const std::vector<Cause>& causes() const { return spec_.causes; }
  const std::vector<ContextAssignment>& contexts() const {
    return spec_.contexts;
  }

  std::size_t num_causes() const { return spec_.causes.size(); }
  std::size_t num_contexts() const { return spec_.contexts.size(); }

  // Throw LookupError on unknown ids.
  std::size_t CauseIndex(std::string_view id) const;
  std::size_t ContextIndex(std::string_view id) const;
  bool HasCause(std::string_view id) const;
  bool HasContext(std::string_view id) const;

  // Weight of cause `k` in context `x`, both by index.
  double weight(std::size_t x, std::size_t k) const {
    return weights_[x][k];
  }

  // Override values over the surviving causes in model order, or nullptr.
  const std::vector<double>* Override(std::size_t x,
                                      std::size_t removed) const;

 private:
  explicit ThreatModel(ModelSpec spec);

  ModelSpec spec_;
  std::map<std::string, std::size_t, std::less<>> cause_index_;
  std::map<std::string, std::size_t, std::less<>> context_index_;
  std::vector<std::vector<double>> weights_;
  // overrides_[x][k] is empty when no override exists for (x, k).
  std::vector<std::vector<std::optional<std::vector<double>>>> overrides_;
};

// Full vector (p_c) over the whole cause universe, in model cause order.
ProbabilityVector FullVector(const ThreatModel& model,
                             std::string_view context);

// Vector over the universe with `removed` left out.
ProbabilityVector RestrictedVector(const ThreatModel& model,
                                   std::string_view context,
                                   std::string_view removed);

// Index-based variants used by the metric loops.
ProbabilityVector FullVector(const ThreatModel& model, std::size_t x);
ProbabilityVector RestrictedVector(const ThreatModel& model, std::size_t x,
                                   std::size_t removed);

}  // namespace threatfair

#endif  // THREATFAIR_MODEL_H_
