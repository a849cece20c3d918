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

// JSON documents shared by the CLI json format and the HTTP service.
// Objects are std::map backed, so keys always serialize sorted.

#ifndef THREATFAIR_DOCUMENTS_H_
#define THREATFAIR_DOCUMENTS_H_

#include <string>

#include "json.hpp"
#include "threatfair/diagnosis.h"
#include "threatfair/fairness.h"
#include "threatfair/model.h"

namespace threatfair {

// Two-space indented dump plus a trailing newline.
std::string CanonicalDump(const nlohmann::json& doc);

nlohmann::json ModelToJson(const ThreatModel& model);
nlohmann::json ValidationToJson(const ValidationReport& report);
nlohmann::json ReportToJson(const FairnessReport& report);
nlohmann::json MatrixToJson(const ErrorMatrix& matrix);
nlohmann::json RankingToJson(const Ranking& ranking);
nlohmann::json CheckToJson(const CheckResult& check);
nlohmann::json EditToJson(const WhatIfEdit& edit);
nlohmann::json DeltaToJson(const WhatIfDelta& delta);
nlohmann::json PlanToJson(const MitigationPlan& plan);
nlohmann::json RiskToJson(const RiskReport& risk);

// Accepts {"action": "remove"|"add", "cause": id, "weights": {...}}.
// Throws ArgumentError on a malformed body.
WhatIfEdit EditFromJson(const nlohmann::json& doc);

}  // namespace threatfair

#endif  // THREATFAIR_DOCUMENTS_H_
