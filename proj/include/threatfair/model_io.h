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

// Model files: one JSON document (schema_version 1) per model.
//
//   {
//     "schema_version": 1,
//     "outcome": "...",
//     "mode": "shares" | "conditional",          (optional, default shares)
//     "causes": [{"id": "...", "label": "..."}],
//     "contexts": [{"id": "...", "label": "...",
//                   "weights": {"<cause>": w, ...},
//                   "threat_frequency": f, "harm_magnitude": m}],
//     "overrides": [{"context": "...", "removed_cause": "...",
//                    "probabilities": {"<cause>": p, ...}}]  (optional)
//   }
//
// Parsing is strict: unknown or duplicated keys anywhere are rejected.

#ifndef THREATFAIR_MODEL_IO_H_
#define THREATFAIR_MODEL_IO_H_

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "threatfair/model.h"

namespace threatfair {

inline constexpr int kSchemaVersion = 1;

class LoadError : public std::runtime_error {
 public:
  enum class Kind { kParse, kSchema, kValidation };

  LoadError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  LoadError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(message),
        kind_(Kind::kParse),
        line_(line),
        column_(column) {}
  LoadError(ValidationReport report, const std::string& message)
      : std::runtime_error(message),
        kind_(Kind::kValidation),
        report_(std::move(report)) {}

  Kind kind() const { return kind_; }
  // "parse_error", "schema_error" or "validation_error".
  std::string_view code() const;
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const ValidationReport& report() const { return report_; }

 private:
  Kind kind_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
  ValidationReport report_;
};

// Failure to read or write a file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses without validating model invariants. Throws LoadError (parse or
// schema kinds).
ModelSpec ParseModelSpec(std::string_view bytes);

// Parses and validates. Throws LoadError.
ThreatModel LoadModel(std::string_view bytes);

// Throws IoError when the file cannot be read, else as LoadModel.
ThreatModel LoadModelFile(const std::filesystem::path& path);

// Canonical serialization: sorted keys, arrays in model order, shortest
// round-trip numbers, two-space indent, trailing newline.
std::string SaveModel(const ThreatModel& model);

void WriteFile(const std::filesystem::path& path, std::string_view bytes);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace threatfair

#endif  // THREATFAIR_MODEL_IO_H_
