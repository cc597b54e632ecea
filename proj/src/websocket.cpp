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

#include "teleteach/websocket.hpp"

#include <netdb.h>
#include <openssl/evp.h>
#include <openssl/sha.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <system_error>

namespace teleteach {

namespace {

constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

bool has_token(const std::string& value, std::string_view token) {
  const std::string v = lower(value);
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const std::size_t end = std::min(v.find(',', pos), v.size());
    if (trim(std::string_view(v).substr(pos, end - pos)) == token) return true;
    pos = end + 1;
  }
  return false;
}

void send_all(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "send");
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

int connect_tcp(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw ProtocolError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  int err = 0;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    err = errno;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw std::system_error(err, std::generic_category(), "connect " + host + ":" + service);
  return fd;
}

// Reads until the blank line ending an HTTP head; returns head and any
// bytes already received past it.
std::pair<std::string, std::string> read_head(int fd) {
  std::string data;
  char buf[4096];
  for (;;) {
    const std::size_t end = data.find("\r\n\r\n");
    if (end != std::string::npos) return {data.substr(0, end), data.substr(end + 4)};
    if (data.size() > 65536) throw ProtocolError("response head too large");
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw ProtocolError("connection closed during handshake");
    data.append(buf, static_cast<std::size_t>(n));
  }
}

std::optional<std::map<std::string, std::string>> parse_headers(std::string_view lines) {
  std::map<std::string, std::string> out;
  while (!lines.empty()) {
    const std::size_t eol = std::min(lines.find("\r\n"), lines.size());
    const std::string_view line = lines.substr(0, eol);
    lines.remove_prefix(std::min(eol + 2, lines.size()));
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0) return std::nullopt;
    out[lower(std::string(line.substr(0, colon)))] = trim(line.substr(colon + 1));
  }
  return out;
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string websocket_accept_key(std::string_view client_key) {
  const std::string joined = std::string(client_key) + std::string(kGuid);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(joined.data()), joined.size(), digest);
  return base64_encode(std::string_view(reinterpret_cast<const char*>(digest), sizeof digest));
}

std::string encode_frame(Opcode op, std::string_view payload, bool mask, std::uint32_t mask_key) {
  std::string out;
  out.reserve(payload.size() + 14);
  out.push_back(static_cast<char>(0x80 | static_cast<std::uint8_t>(op)));
  const std::uint8_t mask_bit = mask ? 0x80 : 0x00;
  const std::size_t n = payload.size();
  if (n < 126) {
    out.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xFFFF) {
    out.push_back(static_cast<char>(mask_bit | 126));
    out.push_back(static_cast<char>(n >> 8));
    out.push_back(static_cast<char>(n & 0xFF));
  } else {
    out.push_back(static_cast<char>(mask_bit | 127));
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((std::uint64_t{n} >> shift) & 0xFF));
  }
  if (!mask) return out.append(payload);
  const char key[4] = {static_cast<char>(mask_key >> 24), static_cast<char>(mask_key >> 16),
                       static_cast<char>(mask_key >> 8), static_cast<char>(mask_key)};
  out.append(key, 4);
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<char>(payload[i] ^ key[i % 4]));
  return out;
}

std::vector<WsMessage> FrameParser::feed(std::string_view bytes) {
  buffer_.append(bytes);
  std::vector<WsMessage> out;
  for (;;) {
    if (buffer_.size() < 2) break;
    const auto b0 = static_cast<std::uint8_t>(buffer_[0]);
    const auto b1 = static_cast<std::uint8_t>(buffer_[1]);
    const bool fin = b0 & 0x80;
    if (b0 & 0x70) throw ProtocolError("reserved bits set");
    const auto op = static_cast<Opcode>(b0 & 0x0F);
    const bool masked = b1 & 0x80;
    if (masked != expect_masked_) throw ProtocolError(masked ? "unexpected masked frame" : "unmasked client frame");
    std::uint64_t len = b1 & 0x7F;
    std::size_t pos = 2;
    if (len == 126) {
      if (buffer_.size() < 4) break;
      len = (std::uint64_t{static_cast<std::uint8_t>(buffer_[2])} << 8) | static_cast<std::uint8_t>(buffer_[3]);
      pos = 4;
    } else if (len == 127) {
      if (buffer_.size() < 10) break;
      len = 0;
      for (int i = 0; i < 8; ++i) len = (len << 8) | static_cast<std::uint8_t>(buffer_[2 + i]);
      pos = 10;
    }
    const bool control = static_cast<std::uint8_t>(op) & 0x08;
    if (control && (len > 125 || !fin)) throw ProtocolError("invalid control frame");
    if (len > max_message_ || partial_.size() + len > max_message_) throw ProtocolError("message too large");
    const std::size_t header = pos + (masked ? 4 : 0);
    if (buffer_.size() < header + len) break;

    std::string payload = buffer_.substr(header, static_cast<std::size_t>(len));
    if (masked) {
      for (std::size_t i = 0; i < payload.size(); ++i) payload[i] ^= buffer_[pos + i % 4];
    }
    buffer_.erase(0, header + static_cast<std::size_t>(len));

    switch (op) {
      case Opcode::kClose:
      case Opcode::kPing:
      case Opcode::kPong:
        out.push_back({op, std::move(payload)});
        break;
      case Opcode::kText:
      case Opcode::kBinary:
        if (partial_op_) throw ProtocolError("new message inside a fragmented one");
        if (fin) {
          out.push_back({op, std::move(payload)});
        } else {
          partial_op_ = op;
          partial_ = std::move(payload);
        }
        break;
      case Opcode::kContinuation:
        if (!partial_op_) throw ProtocolError("continuation without a message");
        partial_ += payload;
        if (fin) {
          out.push_back({*partial_op_, std::move(partial_)});
          partial_.clear();
          partial_op_.reset();
        }
        break;
      default:
        throw ProtocolError("unknown opcode");
    }
  }
  return out;
}

std::optional<HttpRequest> parse_http_request(std::string_view head) {
  const std::size_t eol = std::min(head.find("\r\n"), head.size());
  const std::string_view line = head.substr(0, eol);
  const std::size_t a = line.find(' ');
  const std::size_t b = a == std::string_view::npos ? a : line.find(' ', a + 1);
  if (b == std::string_view::npos) return std::nullopt;
  HttpRequest req;
  req.method = std::string(line.substr(0, a));
  req.target = std::string(line.substr(a + 1, b - a - 1));
  req.version = std::string(line.substr(b + 1));
  if (req.method.empty() || req.target.empty() || req.version.rfind("HTTP/1.", 0) != 0) return std::nullopt;
  auto headers = parse_headers(head.substr(std::min(eol + 2, head.size())));
  if (!headers) return std::nullopt;
  req.headers = std::move(*headers);
  return req;
}

bool is_websocket_upgrade(const HttpRequest& req) {
  const auto get = [&](const char* k) {
    const auto it = req.headers.find(k);
    return it == req.headers.end() ? std::string() : it->second;
  };
  return req.method == "GET" && has_token(get("upgrade"), "websocket") && has_token(get("connection"), "upgrade") &&
         !get("sec-websocket-key").empty() && get("sec-websocket-version") == "13";
}

HttpResponse http_get(const std::string& host, int port, const std::string& target) {
  const int fd = connect_tcp(host, port);
  HttpResponse res;
  try {
    send_all(fd, "GET " + target + " HTTP/1.1\r\nHost: " + host + "\r\nConnection: close\r\n\r\n");
    auto [head, rest] = read_head(fd);
    const std::size_t eol = std::min(head.find("\r\n"), head.size());
    const std::string status_line = head.substr(0, eol);
    const std::size_t sp = status_line.find(' ');
    if (sp == std::string::npos) throw ProtocolError("bad status line");
    res.status = std::stoi(status_line.substr(sp + 1, 3));
    auto headers = parse_headers(std::string_view(head).substr(std::min(eol + 2, head.size())));
    if (!headers) throw ProtocolError("malformed response header");
    res.headers = std::move(*headers);
    res.body = std::move(rest);
    char buf[4096];
    for (;;) {
      const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      res.body.append(buf, static_cast<std::size_t>(n));
    }
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  return res;
}

WebSocketClient::WebSocketClient(const std::string& host, int port, const std::string& path)
    : fd_(connect_tcp(host, port)) {
  try {
    const std::string key = base64_encode("teleteach-client");
    send_all(fd_, "GET " + path + " HTTP/1.1\r\nHost: " + host + ":" + std::to_string(port) +
                      "\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: " + key +
                      "\r\nSec-WebSocket-Version: 13\r\n\r\n");
    auto [head, rest] = read_head(fd_);
    if (head.rfind("HTTP/1.1 101", 0) != 0) {
      throw ProtocolError("upgrade refused: " + head.substr(0, head.find("\r\n")));
    }
    const auto headers = parse_headers(std::string_view(head).substr(std::min(head.find("\r\n") + 2, head.size())));
    if (!headers) throw ProtocolError("malformed handshake response");
    const auto it = headers->find("sec-websocket-accept");
    if (it == headers->end() || it->second != websocket_accept_key(key)) throw ProtocolError("bad accept key");
    pending_ = parser_.feed(rest);
  } catch (...) {
    ::close(fd_);
    throw;
  }
}

WebSocketClient::~WebSocketClient() {
  if (fd_ >= 0) ::close(fd_);
}

void WebSocketClient::send_raw(std::string_view bytes) { send_all(fd_, bytes); }

void WebSocketClient::send_text(std::string_view text) {
  next_mask_ = next_mask_ * 1664525u + 1013904223u;
  send_all(fd_, encode_frame(Opcode::kText, text, true, next_mask_));
}

std::optional<std::string> WebSocketClient::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    while (!pending_.empty()) {
      WsMessage m = std::move(pending_.front());
      pending_.erase(pending_.begin());
      if (m.op == Opcode::kText) return std::move(m.payload);
      if (m.op == Opcode::kPing) {
        next_mask_ = next_mask_ * 1664525u + 1013904223u;
        send_all(fd_, encode_frame(Opcode::kPong, m.payload, true, next_mask_));
      }
      if (m.op == Opcode::kClose) {
        closed_ = true;
        return std::nullopt;
      }
    }
    if (closed_) return std::nullopt;
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() < 0) return std::nullopt;
    pollfd p{fd_, POLLIN, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
    if (rc < 0 && errno == EINTR) continue;
    if (rc <= 0) return std::nullopt;
    char buf[16384];
    const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      closed_ = true;
      return std::nullopt;
    }
    pending_ = parser_.feed(std::string_view(buf, static_cast<std::size_t>(n)));
  }
}

void WebSocketClient::close() {
  if (fd_ < 0 || closed_) return;
  try {
    next_mask_ = next_mask_ * 1664525u + 1013904223u;
    send_all(fd_, encode_frame(Opcode::kClose, std::string("\x03\xe8", 2), true, next_mask_));
  } catch (const std::system_error&) {
  }
  closed_ = true;
  ::shutdown(fd_, SHUT_WR);
}

}  // namespace teleteach
