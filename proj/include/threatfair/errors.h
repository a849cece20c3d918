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

#ifndef THREATFAIR_ERRORS_H_
#define THREATFAIR_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace threatfair {

// Unknown cause or context id.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Caller-supplied argument outside its domain (negative threshold, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A what-if edit that cannot be applied. `code` is machine readable,
// e.g. "last_cause", "duplicate_cause", "missing_context_weight".
class EditError : public std::runtime_error {
 public:
  EditError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Context lacks threat_frequency or harm_magnitude.
class RiskInputsMissing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  static constexpr const char* kCode = "risk_inputs_missing";
};

}  // namespace threatfair

#endif  // THREATFAIR_ERRORS_H_
