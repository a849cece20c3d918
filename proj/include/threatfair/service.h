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

// Read/compute HTTP service over one served model.
//
// The session holds an immutable snapshot (base model, working model, edit
// log). Reads grab the current snapshot pointer and never wait on other
// reads; what-if and reset requests are serialized by a writer mutex and
// publish a fresh snapshot in one pointer swap.
//
//   GET  /api/model    working model document
//   GET  /api/export   canonical model file bytes of the working model
//   GET  /api/report   fairness report
//   GET  /api/matrix   (context x cause) error matrix
//   GET  /api/risk     context-conditioned risk report
//   GET  /api/log      applied edits, oldest first
//   POST /api/check    {"lambda"?: x, "gamma"?: y}
//   POST /api/whatif   {"action": "remove"|"add", "cause": id, "weights"?: {}}
//   POST /api/reset    back to the base model

#ifndef THREATFAIR_SERVICE_H_
#define THREATFAIR_SERVICE_H_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "threatfair/diagnosis.h"
#include "threatfair/fairness.h"
#include "threatfair/model.h"

namespace threatfair {

struct SessionState {
  ThreatModel base;
  ThreatModel working;
  std::vector<WhatIfEdit> log;
  FairnessReport report;  // of `working`
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class Session {
 public:
  // Uninitialized: every endpoint answers 503 until Initialize().
  Session() = default;
  explicit Session(ThreatModel base);

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void Initialize(ThreatModel base);

  std::shared_ptr<const SessionState> Snapshot() const;

  // Transport-independent request dispatch.
  HttpResponse Handle(std::string_view method, std::string_view path,
                      std::string_view body);

 private:
  HttpResponse HandleWhatIf(std::string_view body);
  HttpResponse HandleReset();
  void Publish(std::shared_ptr<const SessionState> next);

  mutable std::mutex snapshot_mu_;  // guards the pointer only
  std::mutex writer_mu_;
  std::shared_ptr<const SessionState> state_;
};

struct ServeOptions {
  std::string bind = "127.0.0.1";
  int port = 7341;  // 0 picks a free port
  std::optional<std::string> cors_origin;
};

// httplib front end for a Session.
class HttpServer {
 public:
  HttpServer(Session& session, ServeOptions options);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket; returns the bound port or -1 on failure.
  int Bind();
  // Blocks until Stop(). Call after a successful Bind().
  bool Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace threatfair

#endif  // THREATFAIR_SERVICE_H_
