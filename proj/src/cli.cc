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

#include "threatfair/cli.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string_view>

#include "CLI11.hpp"
#include "threatfair/diagnosis.h"
#include "threatfair/documents.h"
#include "threatfair/errors.h"
#include "threatfair/fairness.h"
#include "threatfair/model_io.h"
#include "threatfair/service.h"

namespace threatfair::cli {
namespace {

enum class Format { kTable, kJson };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tables show 6 significant digits; json keeps full precision.
std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string Pad(std::string s, std::size_t width) {
  if (s.size() < width) s.resize(width, ' ');
  return s;
}

struct Common {
  std::string path;
  std::optional<std::string> format_flag;
};

Format ResolveFormat(const Common& common) {
  std::optional<std::string> name = common.format_flag;
  if (!name) {
    if (const char* env = std::getenv("THREATFAIR_FORMAT")) name = env;
  }
  if (!name || *name == "table") return Format::kTable;
  if (*name == "json") return Format::kJson;
  throw UsageError("unknown output format '" + *name +
                   "' (expected table or json)");
}

std::map<std::string, double> ParseWeights(const std::string& text) {
  std::map<std::string, double> weights;
  std::string_view rest = text;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{}
                                           : rest.substr(comma + 1);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw UsageError("bad weight '" + std::string(item) +
                       "' (expected context=value)");
    }
    const std::string key(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    char* end = nullptr;
    const double w = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
      throw UsageError("bad number '" + value + "' for context '" + key + "'");
    }
    if (!weights.emplace(key, w).second) {
      throw UsageError("context '" + key + "' given twice");
    }
  }
  return weights;
}

void PrintErrors(std::ostream& out, const ThreatModel& model,
                 const FairnessReport& report) {
  out << "cause errors\n";
  for (const Cause& c : model.causes()) {
    out << "  " << Pad(c.id, 16) << Num(report.causal_errors.at(c.id)) << "\n";
  }
  out << "context errors\n";
  for (const ContextAssignment& c : model.contexts()) {
    out << "  " << Pad(c.id, 16) << Num(report.contextual_errors.at(c.id))
        << "\n";
  }
  out << Pad("causal bound", 18) << Num(report.causal_bound) << "\n";
  out << Pad("contextual bound", 18) << Num(report.contextual_bound) << "\n";
  for (const DegeneratePair& p : report.degenerate_pairs) {
    out << "warning: degenerate restriction in context '" << p.context
        << "' without cause '" << p.cause << "'\n";
  }
}

void PrintCheckLine(std::ostream& out, std::string_view name,
                    std::string_view symbol, const BoundCheck& check) {
  if (check.verdict == Verdict::kSkipped) return;
  out << name << ": ";
  if (check.verdict == Verdict::kPass) {
    out << "pass (bound " << Num(check.bound) << " <= " << symbol << " "
        << Num(*check.threshold) << ")\n";
  } else {
    out << "FAIL (bound " << Num(check.bound) << " > " << symbol << " "
        << Num(*check.threshold) << ", excess " << Num(check.excess) << ")\n";
  }
}

int CmdValidate(const Common& c, Format format, std::ostream& out) {
  ValidationReport report;
  try {
    report = ValidateModel(ParseModelSpec(ReadFile(c.path)));
  } catch (const LoadError& e) {
    if (format == Format::kJson) {
      out << CanonicalDump({{"ok", false},
                            {"violations",
                             {{{"code", std::string(e.code())},
                               {"message", e.what()},
                               {"path", ""}}}}});
    } else {
      out << e.code() << ": " << e.what() << "\n";
    }
    return kExitInvalid;
  }
  if (format == Format::kJson) {
    out << CanonicalDump(ValidationToJson(report));
  } else if (report.ok()) {
    out << "OK\n";
  } else {
    for (const Violation& v : report.violations) {
      out << v.path << ": " << v.code << ": " << v.message << "\n";
    }
  }
  return report.ok() ? kExitOk : kExitInvalid;
}

int CmdAnalyze(const Common& c, Format format, std::ostream& out) {
  const ThreatModel model = LoadModelFile(c.path);
  const FairnessReport report = ComputeFairnessReport(model);
  if (format == Format::kJson) {
    out << CanonicalDump(ReportToJson(report));
    return kExitOk;
  }
  out << "outcome: " << model.outcome() << "\n";
  out << "mode: " << ModeName(model.mode()) << "\n";
  PrintErrors(out, model, report);
  return kExitOk;
}

int CmdRank(const Common& c, Format format, const std::string& by,
            std::ostream& out) {
  const ThreatModel model = LoadModelFile(c.path);
  const Ranking ranking =
      Rank(model, by == "context" ? RankKind::kContext : RankKind::kCause);
  if (format == Format::kJson) {
    out << CanonicalDump(RankingToJson(ranking));
    return kExitOk;
  }
  for (const RankEntry& e : ranking.entries) {
    out << Pad(e.id, 16) << Num(e.error) << "\n";
  }
  return kExitOk;
}

int CmdCheck(const Common& c, Format format, std::optional<double> lambda,
             std::optional<double> gamma, std::ostream& out) {
  if (!lambda && !gamma) {
    throw UsageError("check needs --lambda and/or --gamma");
  }
  if ((lambda && !(*lambda >= 0.0)) || (gamma && !(*gamma >= 0.0))) {
    throw UsageError("thresholds must be >= 0");
  }
  const ThreatModel model = LoadModelFile(c.path);
  const CheckResult result =
      CheckBounds(ComputeFairnessReport(model), lambda, gamma);
  if (format == Format::kJson) {
    out << CanonicalDump(CheckToJson(result));
  } else {
    PrintCheckLine(out, "causal", "lambda", result.causal);
    PrintCheckLine(out, "contextual", "gamma", result.contextual);
  }
  return result.AnyFailed() ? kExitUnfair : kExitOk;
}

int CmdWhatIf(const Common& c, Format format,
              const std::optional<std::string>& remove,
              const std::optional<std::string>& add,
              const std::optional<std::string>& weights,
              const std::optional<std::string>& save, std::ostream& out,
              std::ostream& err) {
  if (remove.has_value() == add.has_value()) {
    throw UsageError("whatif needs exactly one of --remove or --add");
  }
  if (add && !weights) throw UsageError("--add needs --weights");
  if (remove && weights) throw UsageError("--weights only applies to --add");
  if (save) {
    std::error_code ec;
    if (std::filesystem::equivalent(c.path, *save, ec)) {
      throw UsageError("--save must name a new path, not the input model");
    }
  }

  const ThreatModel model = LoadModelFile(c.path);
  WhatIfDelta delta = [&] {
    try {
      return remove ? WhatIfRemove(model, *remove)
                    : WhatIfAdd(model, *add, ParseWeights(*weights));
    } catch (const LookupError& e) {
      throw EditError("unknown_cause", e.what());
    }
  }();

  if (format == Format::kJson) {
    out << CanonicalDump(DeltaToJson(delta));
  } else {
    out << "edit: " << (remove ? "remove " + *remove : "add " + *add) << "\n";
    out << Pad("causal bound", 18) << Num(delta.before.causal_bound) << " -> "
        << Num(delta.after.causal_bound) << "  (delta "
        << Num(delta.bound_deltas.causal) << ")\n";
    out << Pad("contextual bound", 18) << Num(delta.before.contextual_bound)
        << " -> " << Num(delta.after.contextual_bound) << "  (delta "
        << Num(delta.bound_deltas.contextual) << ")\n";
  }
  if (save) {
    WriteFile(*save, SaveModel(delta.edited));
    err << "wrote " << *save << "\n";
  }
  return kExitOk;
}

int CmdMitigate(const Common& c, Format format, double lambda, double gamma,
                int max_steps, std::ostream& out) {
  if (!(lambda >= 0.0) || !(gamma >= 0.0)) {
    throw UsageError("thresholds must be >= 0");
  }
  if (max_steps < 1) throw UsageError("--max-steps must be >= 1");
  const ThreatModel model = LoadModelFile(c.path);
  const MitigationPlan plan = SuggestMitigation(model, lambda, gamma, max_steps);
  if (format == Format::kJson) {
    out << CanonicalDump(PlanToJson(plan));
  } else {
    int n = 0;
    for (const WhatIfDelta& step : plan.steps) {
      out << "step " << ++n << ": remove " << step.edit.cause << "  (bounds "
          << Num(step.after.causal_bound) << ", "
          << Num(step.after.contextual_bound) << ")\n";
    }
    if (plan.steps.empty()) out << "no removals\n";
    out << "final bounds " << Num(plan.final_bounds.causal) << ", "
        << Num(plan.final_bounds.contextual) << ": "
        << (plan.achieved ? "targets met" : "targets NOT met") << "\n";
  }
  return plan.achieved ? kExitOk : kExitUnfair;
}

int CmdRisk(const Common& c, Format format, std::ostream& out) {
  const ThreatModel model = LoadModelFile(c.path);
  const RiskReport risk = ComputeRiskReport(model);
  if (format == Format::kJson) {
    out << CanonicalDump(RiskToJson(risk));
    return kExitOk;
  }
  for (const RiskEntry& e : risk.entries) {
    out << Pad(e.context, 16) << Num(e.risk) << "  (frequency "
        << Num(e.threat_frequency) << " x magnitude " << Num(e.harm_magnitude)
        << ")\n";
  }
  for (const SkippedContext& s : risk.skipped) {
    out << "skipped " << s.context << ": " << s.reason << "\n";
  }
  return kExitOk;
}

int CmdServe(const Common& c, const ServeOptions& options, std::ostream& out,
             std::ostream& err) {
  Session session(LoadModelFile(c.path));
  HttpServer server(session, options);
  const int port = server.Bind();
  if (port < 0) {
    err << "cannot bind " << options.bind << ":" << options.port << "\n";
    return kExitIo;
  }
  out << "serving " << c.path << " on http://" << options.bind << ":" << port
      << std::endl;
  return server.Listen() ? kExitOk : kExitIo;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Fairness analysis for context-aware privacy threat models",
               "threatfair"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool with_format = true) {
    sub->add_option("model", common.path, "Model file (JSON)")->required();
    if (with_format) {
      sub->add_option("--format", common.format_flag,
                      "table or json (default: $THREATFAIR_FORMAT or table)")
          ->check(CLI::IsMember({"table", "json"}));
    }
  };

  auto* validate = app.add_subcommand("validate", "Check a model file");
  add_common(validate);

  auto* analyze =
      app.add_subcommand("analyze", "Per-cause and per-context errors");
  add_common(analyze);

  std::string rank_by = "cause";
  auto* rank = app.add_subcommand("rank", "Rank causes or contexts by error");
  add_common(rank);
  rank->add_option("--by", rank_by, "cause or context")
      ->check(CLI::IsMember({"cause", "context"}));

  std::optional<double> lambda;
  std::optional<double> gamma;
  auto* check = app.add_subcommand("check", "Check lambda/gamma bounds");
  add_common(check);
  check->add_option("--lambda", lambda, "Causal fairness bound");
  check->add_option("--gamma", gamma, "Contextual fairness bound");

  std::optional<std::string> remove, add, weights, save;
  auto* whatif = app.add_subcommand("whatif", "Remove or add a cause");
  add_common(whatif);
  whatif->add_option("--remove", remove, "Cause id to remove");
  whatif->add_option("--add", add, "Cause id to add");
  whatif->add_option("--weights", weights, "Per-context weights: ctx=w,...");
  whatif->add_option("--save", save, "Write the edited model to a new file");

  double mit_lambda = 0.0;
  double mit_gamma = 0.0;
  int max_steps = 1;
  auto* mitigate =
      app.add_subcommand("mitigate", "Greedy cause-removal plan for targets");
  add_common(mitigate);
  mitigate->add_option("--lambda", mit_lambda, "Causal target")->required();
  mitigate->add_option("--gamma", mit_gamma, "Contextual target")->required();
  mitigate->add_option("--max-steps", max_steps, "Removal budget");

  auto* risk = app.add_subcommand("risk", "Context-conditioned FAIR risk");
  add_common(risk);

  ServeOptions serve_options;
  std::optional<std::string> cors;
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  add_common(serve, false);
  serve->add_option("--port", serve_options.port, "Port (default 7341)");
  serve->add_option("--bind", serve_options.bind,
                    "Bind address (default 127.0.0.1)");
  serve->add_option("--cors", cors, "Allowed CORS origin");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (serve->parsed()) {
      serve_options.cors_origin = cors;
      return CmdServe(common, serve_options, out, err);
    }
    const Format format = ResolveFormat(common);
    if (validate->parsed()) return CmdValidate(common, format, out);
    if (analyze->parsed()) return CmdAnalyze(common, format, out);
    if (rank->parsed()) return CmdRank(common, format, rank_by, out);
    if (check->parsed()) return CmdCheck(common, format, lambda, gamma, out);
    if (whatif->parsed()) {
      return CmdWhatIf(common, format, remove, add, weights, save, out, err);
    }
    if (mitigate->parsed()) {
      return CmdMitigate(common, format, mit_lambda, mit_gamma, max_steps, out);
    }
    if (risk->parsed()) return CmdRisk(common, format, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const LoadError& e) {
    err << e.what() << "\n";
    for (const Violation& v : e.report().violations) {
      err << "  " << v.path << ": " << v.code << ": " << v.message << "\n";
    }
    return kExitInvalid;
  } catch (const EditError& e) {
    err << "edit refused (" << e.code() << "): " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}

}  // namespace threatfair::cli
