// Copyright 2026 The teleteach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP/1.1 server for the teaching session: WebSocket upgrade on /session,
// static files everywhere else.
//
// One thread owns the Session and ticks it; it only exchanges strings with
// the connection threads, through a bounded input queue (drained once per
// tick) and bounded per-connection output queues (telemetry drops oldest).
// The first WebSocket client controls the session, later ones observe. The
// simulation pauses while no controller is connected.

#pragma once

#include <cstdint>
#include <memory>

#include "teleteach/config.hpp"

namespace teleteach {

struct ServerStats {
  std::int64_t ticks = 0;
  std::int64_t telemetry_dropped = 0;
  std::int64_t inputs_rejected = 0;
  int connections = 0;
  bool controller = false;
};

class SessionServer {
 public:
  SessionServer(const WorldConfig& world, const SessionConfig& cfg);
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  /// Binds and starts the threads. Returns the bound port (useful with
  /// port 0). Throws std::system_error if the port is taken.
  int start();
  /// Closes every connection and joins all threads. Idempotent.
  void stop();

  int port() const;
  ServerStats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace teleteach
