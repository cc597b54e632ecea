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

// RFC 6455 framing and handshake, plus a small blocking client used by the
// command-line tools and tests.

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace teleteach {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Opcode : std::uint8_t {
  kContinuation = 0x0,
  kText = 0x1,
  kBinary = 0x2,
  kClose = 0x8,
  kPing = 0x9,
  kPong = 0xA,
};

/// Sec-WebSocket-Accept for a client's Sec-WebSocket-Key.
std::string websocket_accept_key(std::string_view client_key);

std::string base64_encode(std::string_view bytes);

/// One complete FIN frame. Client frames must be masked with `mask_key`.
std::string encode_frame(Opcode op, std::string_view payload, bool mask = false,
                         std::uint32_t mask_key = 0);

struct WsMessage {
  Opcode op = Opcode::kText;
  std::string payload;
};

/// Incremental decoder. Reassembles fragmented data messages; control
/// frames come out as they arrive.
class FrameParser {
 public:
  /// `expect_masked`: true on the server side, where unmasked frames are a
  /// protocol error; false on the client side, where masked ones are.
  explicit FrameParser(bool expect_masked, std::size_t max_message = 1 << 20)
      : expect_masked_(expect_masked), max_message_(max_message) {}

  /// Appends bytes and returns every message completed by them. Throws
  /// ProtocolError on malformed input.
  std::vector<WsMessage> feed(std::string_view bytes);

 private:
  bool expect_masked_;
  std::size_t max_message_;
  std::string buffer_;
  std::optional<Opcode> partial_op_;
  std::string partial_;
};

struct HttpRequest {
  std::string method;
  std::string target;
  std::string version;
  /// Header names lowercased.
  std::map<std::string, std::string> headers;
};

/// Parses a request head (everything before the blank line).
std::optional<HttpRequest> parse_http_request(std::string_view head);

/// True when `req` asks for a WebSocket upgrade.
bool is_websocket_upgrade(const HttpRequest& req);

struct HttpResponse {
  int status = 0;
  std::map<std::string, std::string> headers;
  std::string body;
};

/// GET over a fresh connection; the server is expected to close afterwards.
HttpResponse http_get(const std::string& host, int port, const std::string& target);

class WebSocketClient {
 public:
  /// Connects and completes the opening handshake; throws ProtocolError or
  /// std::system_error on failure.
  WebSocketClient(const std::string& host, int port, const std::string& path);
  ~WebSocketClient();
  WebSocketClient(const WebSocketClient&) = delete;
  WebSocketClient& operator=(const WebSocketClient&) = delete;

  void send_text(std::string_view text);
  void send_raw(std::string_view bytes);
  /// Next text message, or nullopt on timeout or once the server closes.
  std::optional<std::string> receive(std::chrono::milliseconds timeout);
  void close();
  bool open() const { return fd_ >= 0 && !closed_; }

 private:
  int fd_ = -1;
  bool closed_ = false;
  std::uint32_t next_mask_ = 0x2545f491u;
  FrameParser parser_{false};
  std::vector<WsMessage> pending_;
};

}  // namespace teleteach
