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

#include "threatfair/service.h"

#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "threatfair/documents.h"
#include "threatfair/errors.h"
#include "threatfair/model_io.h"

namespace threatfair {
namespace {

using json = nlohmann::json;

HttpResponse Json(int status, const json& doc) {
  return {status, CanonicalDump(doc), "application/json"};
}

HttpResponse Error(int status, std::string_view code,
                   std::string_view message) {
  return Json(status, {{"error",
                        {{"code", std::string(code)},
                         {"message", std::string(message)}}}});
}

std::shared_ptr<const SessionState> MakeState(ThreatModel base,
                                              ThreatModel working,
                                              std::vector<WhatIfEdit> log) {
  FairnessReport report = ComputeFairnessReport(working);
  return std::make_shared<const SessionState>(SessionState{
      std::move(base), std::move(working), std::move(log), std::move(report)});
}

std::optional<double> OptionalThreshold(const json& body, const char* key) {
  if (!body.contains(key) || body[key].is_null()) return std::nullopt;
  if (!body[key].is_number()) {
    throw ArgumentError(std::string("'") + key + "' must be a number");
  }
  return body[key].get<double>();
}

HttpResponse HandleCheck(const SessionState& state, std::string_view body) {
  json doc = body.empty() ? json::object() : json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    return Error(400, "malformed_body", "body must be a JSON object");
  }
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key != "lambda" && key != "gamma") {
        throw ArgumentError("unknown key '" + key + "'");
      }
    }
    const CheckResult result =
        CheckBounds(state.report, OptionalThreshold(doc, "lambda"),
                    OptionalThreshold(doc, "gamma"));
    return Json(200, CheckToJson(result));
  } catch (const ArgumentError& e) {
    return Error(400, "invalid_threshold", e.what());
  }
}

json LogToJson(const std::vector<WhatIfEdit>& log) {
  json edits = json::array();
  for (const WhatIfEdit& edit : log) edits.push_back(EditToJson(edit));
  return {{"edits", std::move(edits)}};
}

}  // namespace

Session::Session(ThreatModel base) { Initialize(std::move(base)); }

void Session::Initialize(ThreatModel base) {
  std::lock_guard<std::mutex> writer(writer_mu_);
  ThreatModel working = base;
  Publish(MakeState(std::move(base), std::move(working), {}));
}

std::shared_ptr<const SessionState> Session::Snapshot() const {
  std::lock_guard<std::mutex> lock(snapshot_mu_);
  return state_;
}

void Session::Publish(std::shared_ptr<const SessionState> next) {
  std::lock_guard<std::mutex> lock(snapshot_mu_);
  state_ = std::move(next);
}

HttpResponse Session::Handle(std::string_view method, std::string_view path,
                             std::string_view body) {
  const std::shared_ptr<const SessionState> state = Snapshot();
  if (!state) return Error(503, "starting", "model not loaded yet");

  if (method == "GET") {
    if (path == "/api/model") return Json(200, ModelToJson(state->working));
    if (path == "/api/export") return {200, SaveModel(state->working)};
    if (path == "/api/report") return Json(200, ReportToJson(state->report));
    if (path == "/api/matrix") {
      return Json(200, MatrixToJson(ComputeErrorMatrix(state->working)));
    }
    if (path == "/api/risk") {
      return Json(200, RiskToJson(ComputeRiskReport(state->working)));
    }
    if (path == "/api/log") return Json(200, LogToJson(state->log));
  } else if (method == "POST") {
    if (path == "/api/check") return HandleCheck(*state, body);
    if (path == "/api/whatif") return HandleWhatIf(body);
    if (path == "/api/reset") return HandleReset();
  } else {
    return Error(405, "method_not_allowed", "unsupported method");
  }
  return Error(404, "not_found", "no such endpoint");
}

HttpResponse Session::HandleWhatIf(std::string_view body) {
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) {
    return Error(400, "malformed_body", "body is not valid JSON");
  }
  WhatIfEdit edit;
  try {
    edit = EditFromJson(doc);
  } catch (const ArgumentError& e) {
    return Error(400, "malformed_body", e.what());
  }

  std::lock_guard<std::mutex> writer(writer_mu_);
  const std::shared_ptr<const SessionState> state = Snapshot();
  try {
    WhatIfDelta delta = WhatIf(state->working, edit);
    std::vector<WhatIfEdit> log = state->log;
    log.push_back(edit);
    const json response = DeltaToJson(delta);
    Publish(MakeState(state->base, std::move(delta.edited), std::move(log)));
    return Json(200, response);
  } catch (const LookupError& e) {
    return Error(404, "unknown_cause", e.what());
  } catch (const EditError& e) {
    return Error(409, e.code(), e.what());
  }
}

HttpResponse Session::HandleReset() {
  std::lock_guard<std::mutex> writer(writer_mu_);
  const std::shared_ptr<const SessionState> state = Snapshot();
  Publish(MakeState(state->base, state->base, {}));
  return Json(200, ReportToJson(Snapshot()->report));
}

struct HttpServer::Impl {
  Impl(Session& s, ServeOptions o) : session(s), options(std::move(o)) {}

  Session& session;
  ServeOptions options;
  httplib::Server server;
};

HttpServer::HttpServer(Session& session, ServeOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse out = impl_->session.Handle(req.method, req.path,
                                                   req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  httplib::Server& server = impl_->server;
  server.Get(R"(/api/.*)", handler);
  server.Post(R"(/api/.*)", handler);

  if (impl_->options.cors_origin) {
    const std::string origin = *impl_->options.cors_origin;
    server.set_post_routing_handler(
        [origin](const httplib::Request&, httplib::Response& res) {
          res.set_header("Access-Control-Allow-Origin", origin);
          res.set_header("Vary", "Origin");
        });
    server.Options(R"(/api/.*)", [origin](const httplib::Request&,
                                          httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind() {
  httplib::Server& server = impl_->server;
  if (impl_->options.port == 0) {
    return server.bind_to_any_port(impl_->options.bind);
  }
  return server.bind_to_port(impl_->options.bind, impl_->options.port)
             ? impl_->options.port
             : -1;
}

bool HttpServer::Listen() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace threatfair
