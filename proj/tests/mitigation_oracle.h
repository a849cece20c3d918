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

// Exhaustive search over cause-removal sets, test-only. The final model of
// a removal sequence depends only on the set removed, so enumerating
// subsets of size <= budget covers every sequence.

#ifndef THREATFAIR_TESTS_MITIGATION_ORACLE_H_
#define THREATFAIR_TESTS_MITIGATION_ORACLE_H_

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "oracle.h"
#include "threatfair/model.h"

namespace threatfair::oracle {

inline ModelSpec WithoutCauses(ModelSpec spec, const std::set<std::string>& s) {
  if (s.empty()) return spec;
  std::erase_if(spec.causes, [&](const Cause& c) { return s.contains(c.id); });
  for (auto& ctx : spec.contexts) {
    for (const auto& id : s) ctx.weights.erase(id);
  }
  std::erase_if(spec.overrides, [&](const LeaveOneOutOverride& ov) {
    if (s.contains(ov.removed_cause)) return true;
    return std::any_of(s.begin(), s.end(), [&](const std::string& id) {
      return ov.probabilities.contains(id);
    });
  });
  return spec;
}

inline double Objective(const ModelSpec& spec, double lambda, double gamma) {
  double causal = 0.0;
  double contextual = 0.0;
  for (const auto& c : spec.causes) causal = std::max(causal, Causal(spec, c.id));
  for (const auto& x : spec.contexts) {
    contextual = std::max(contextual, Contextual(spec, x.id));
  }
  return std::max(causal - lambda, 0.0) + std::max(contextual - gamma, 0.0);
}

// Lowest objective reachable by removing at most `budget` causes while
// keeping at least one.
inline double BestObjective(const ModelSpec& spec, double lambda, double gamma,
                            int budget) {
  const std::size_t n = spec.causes.size();
  double best = Objective(spec, lambda, gamma);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size > budget || static_cast<std::size_t>(size) >= n) continue;
    std::set<std::string> removed;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) removed.insert(spec.causes[k].id);
    }
    const ModelSpec reduced = WithoutCauses(spec, removed);
    if (!ValidateModel(reduced).ok()) continue;
    best = std::min(best, Objective(reduced, lambda, gamma));
  }
  return best;
}

}  // namespace threatfair::oracle

#endif  // THREATFAIR_TESTS_MITIGATION_ORACLE_H_
