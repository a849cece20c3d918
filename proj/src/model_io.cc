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

#include "threatfair/model_io.h"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "threatfair/documents.h"

namespace threatfair {
namespace {

using json = nlohmann::json;

[[noreturn]] void SchemaFail(const std::string& path, const std::string& what) {
  throw LoadError(LoadError::Kind::kSchema,
                  "schema_error: " + (path.empty() ? "<root>" : path) + ": " +
                      what);
}

struct DuplicateKey {
  std::string key;
};

// Parses `bytes`, rejecting duplicated object keys which nlohmann would
// otherwise silently collapse.
json ParseStrict(std::string_view bytes) {
  std::vector<std::set<std::string>> open_objects;
  auto callback = [&](int /*depth*/, json::parse_event_t event,
                      json& parsed) -> bool {
    switch (event) {
      case json::parse_event_t::object_start:
        open_objects.emplace_back();
        break;
      case json::parse_event_t::object_end:
        open_objects.pop_back();
        break;
      case json::parse_event_t::key: {
        const std::string& key = parsed.get_ref<const std::string&>();
        if (!open_objects.back().insert(key).second) throw DuplicateKey{key};
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(bytes.begin(), bytes.end(), callback);
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    const std::string_view head = bytes.substr(0, std::min(offset, bytes.size()));
    const std::size_t line =
        1 + static_cast<std::size_t>(std::count(head.begin(), head.end(), '\n'));
    const std::size_t nl = head.rfind('\n');
    const std::size_t column =
        nl == std::string_view::npos ? head.size() + 1 : head.size() - nl;
    throw LoadError("parse_error at line " + std::to_string(line) +
                        ", column " + std::to_string(column) + ": " + e.what(),
                    line, column);
  } catch (const DuplicateKey& dup) {
    SchemaFail("", "duplicate key '" + dup.key + "'");
  }
}

void RequireKeys(const json& obj, const std::string& path,
                 std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional) {
  if (!obj.is_object()) SchemaFail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) SchemaFail(path, "unknown key '" + key + "'");
  }
  for (std::string_view key : required) {
    if (!obj.contains(key)) {
      SchemaFail(path, "missing key '" + std::string(key) + "'");
    }
  }
}

std::string Join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string GetString(const json& obj, const std::string& path,
                      std::string_view key) {
  const json& v = obj.at(key);
  if (!v.is_string()) SchemaFail(Join(path, key), "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> GetOptString(const json& obj,
                                        const std::string& path,
                                        std::string_view key) {
  if (!obj.contains(key)) return std::nullopt;
  return GetString(obj, path, key);
}

double AsNumber(const json& v, const std::string& path) {
  if (!v.is_number()) SchemaFail(path, "expected a number");
  return v.get<double>();
}

std::optional<double> GetOptNumber(const json& obj, const std::string& path,
                                   std::string_view key) {
  if (!obj.contains(key)) return std::nullopt;
  return AsNumber(obj.at(key), Join(path, key));
}

std::map<std::string, double> GetNumberMap(const json& obj,
                                           const std::string& path,
                                           std::string_view key) {
  const json& m = obj.at(key);
  const std::string here = Join(path, key);
  if (!m.is_object()) SchemaFail(here, "expected an object");
  std::map<std::string, double> out;
  for (const auto& [k, v] : m.items()) out[k] = AsNumber(v, Join(here, k));
  return out;
}

const json& GetArray(const json& obj, const std::string& path,
                     std::string_view key) {
  const json& v = obj.at(key);
  if (!v.is_array()) SchemaFail(Join(path, key), "expected an array");
  return v;
}

std::string Indexed(std::string_view field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

}  // namespace

std::string_view LoadError::code() const {
  switch (kind_) {
    case Kind::kParse:
      return "parse_error";
    case Kind::kSchema:
      return "schema_error";
    case Kind::kValidation:
      return "validation_error";
  }
  return "parse_error";
}

ModelSpec ParseModelSpec(std::string_view bytes) {
  const json doc = ParseStrict(bytes);
  RequireKeys(doc, "", {"schema_version", "outcome", "causes", "contexts"},
              {"mode", "overrides"});

  const json& version = doc.at("schema_version");
  if (!version.is_number_integer() ||
      version.get<long long>() != kSchemaVersion) {
    SchemaFail("schema_version",
               "unsupported schema version " + version.dump());
  }

  ModelSpec spec;
  spec.outcome = GetString(doc, "", "outcome");
  if (doc.contains("mode")) {
    const std::string mode = GetString(doc, "", "mode");
    auto parsed = ParseMode(mode);
    if (!parsed) SchemaFail("mode", "unknown mode '" + mode + "'");
    spec.mode = *parsed;
  }

  const json& causes = GetArray(doc, "", "causes");
  for (std::size_t i = 0; i < causes.size(); ++i) {
    const std::string path = Indexed("causes", i);
    RequireKeys(causes[i], path, {"id"}, {"label"});
    spec.causes.push_back({GetString(causes[i], path, "id"),
                           GetOptString(causes[i], path, "label")});
  }

  const json& contexts = GetArray(doc, "", "contexts");
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    const std::string path = Indexed("contexts", i);
    const json& c = contexts[i];
    RequireKeys(c, path, {"id", "weights"},
                {"label", "threat_frequency", "harm_magnitude"});
    ContextAssignment ctx;
    ctx.id = GetString(c, path, "id");
    ctx.label = GetOptString(c, path, "label");
    ctx.weights = GetNumberMap(c, path, "weights");
    ctx.threat_frequency = GetOptNumber(c, path, "threat_frequency");
    ctx.harm_magnitude = GetOptNumber(c, path, "harm_magnitude");
    spec.contexts.push_back(std::move(ctx));
  }

  if (doc.contains("overrides")) {
    const json& overrides = GetArray(doc, "", "overrides");
    for (std::size_t i = 0; i < overrides.size(); ++i) {
      const std::string path = Indexed("overrides", i);
      const json& o = overrides[i];
      RequireKeys(o, path, {"context", "removed_cause", "probabilities"}, {});
      spec.overrides.push_back({GetString(o, path, "context"),
                                GetString(o, path, "removed_cause"),
                                GetNumberMap(o, path, "probabilities")});
    }
  }
  return spec;
}

ThreatModel LoadModel(std::string_view bytes) {
  ModelSpec spec = ParseModelSpec(bytes);
  ValidationReport report = ValidateModel(spec);
  if (!report.ok()) {
    std::string message = "validation_error:";
    for (const Violation& v : report.violations) {
      message += " " + v.path + ": " + v.code + ";";
    }
    throw LoadError(std::move(report), message);
  }
  return ThreatModel::Create(std::move(spec));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

ThreatModel LoadModelFile(const std::filesystem::path& path) {
  return LoadModel(ReadFile(path));
}

std::string SaveModel(const ThreatModel& model) {
  return CanonicalDump(ModelToJson(model));
}

}  // namespace threatfair
