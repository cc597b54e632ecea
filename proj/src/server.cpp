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

#include "teleteach/server.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/eventfd.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <system_error>
#include <thread>
#include <vector>

#include "teleteach/session.hpp"
#include "teleteach/websocket.hpp"

namespace teleteach {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

bool send_all(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

std::string status_text(int status) {
  switch (status) {
    case 200: return "OK";
    case 400: return "Bad Request";
    case 403: return "Forbidden";
    case 404: return "Not Found";
    case 405: return "Method Not Allowed";
    default: return "Error";
  }
}

std::string http_response(int status, const std::string& type, const std::string& body, bool head_only = false) {
  std::ostringstream out;
  out << "HTTP/1.1 " << status << ' ' << status_text(status) << "\r\n"
      << "Content-Type: " << type << "\r\n"
      << "Content-Length: " << body.size() << "\r\n"
      << "Connection: close\r\n\r\n";
  if (!head_only) out << body;
  return out.str();
}

std::string content_type(const fs::path& p) {
  static const std::map<std::string, std::string> kTypes = {
      {".html", "text/html; charset=utf-8"},  {".js", "text/javascript; charset=utf-8"},
      {".mjs", "text/javascript; charset=utf-8"}, {".css", "text/css; charset=utf-8"},
      {".json", "application/json"},          {".map", "application/json"},
      {".svg", "image/svg+xml"},              {".png", "image/png"},
      {".ico", "image/x-icon"},               {".txt", "text/plain; charset=utf-8"},
      {".wasm", "application/wasm"}};
  const auto it = kTypes.find(p.extension().string());
  return it == kTypes.end() ? "application/octet-stream" : it->second;
}

std::optional<std::string> percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 2 >= s.size()) return std::nullopt;
    const auto hex = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    const int hi = hex(s[i + 1]), lo = hex(s[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    const char c = static_cast<char>(hi * 16 + lo);
    if (c == '\0') return std::nullopt;
    out.push_back(c);
    i += 2;
  }
  return out;
}

std::string static_response(const std::string& root, const HttpRequest& req) {
  const bool head = req.method == "HEAD";
  if (req.method != "GET" && !head) return http_response(405, "text/plain", "method not allowed\n");
  const std::string raw = req.target.substr(0, req.target.find('?'));
  const auto path = percent_decode(raw);
  if (!path || path->empty() || path->front() != '/') return http_response(400, "text/plain", "bad path\n");
  if (root.empty()) return http_response(404, "text/plain", "not found\n", head);

  std::error_code ec;
  const fs::path base = fs::canonical(root, ec);
  if (ec) return http_response(404, "text/plain", "not found\n", head);
  std::string rel = path->substr(1);
  if (rel.empty() || rel.back() == '/') rel += "index.html";
  const fs::path full = fs::weakly_canonical(base / rel, ec);
  if (ec) return http_response(404, "text/plain", "not found\n", head);
  const auto [mismatch, unused] = std::mismatch(base.begin(), base.end(), full.begin(), full.end());
  (void)unused;
  if (mismatch != base.end()) return http_response(403, "text/plain", "forbidden\n", head);
  if (!fs::is_regular_file(full, ec)) return http_response(404, "text/plain", "not found\n", head);

  std::ifstream in(full, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return http_response(200, content_type(full), body.str(), head);
}

}  // namespace

struct Connection {
  int fd = -1;
  int wake = -1;
  bool controller = false;
  std::size_t capacity = 1;
  std::mutex m;
  std::deque<std::string> replies;
  std::deque<std::string> telemetry;

  ~Connection() {
    if (wake >= 0) ::close(wake);
    if (fd >= 0) ::close(fd);
  }

  void notify() const {
    const std::uint64_t one = 1;
    [[maybe_unused]] const ssize_t n = ::write(wake, &one, sizeof one);
  }
  void reply(std::string msg) {
    {
      const std::lock_guard lk(m);
      replies.push_back(std::move(msg));
    }
    notify();
  }
  // Returns the number of frames dropped to make room.
  int publish(const std::string& msg) {
    int dropped = 0;
    {
      const std::lock_guard lk(m);
      while (telemetry.size() >= capacity) {
        telemetry.pop_front();
        ++dropped;
      }
      telemetry.push_back(msg);
    }
    notify();
    return dropped;
  }
};

struct Input {
  std::shared_ptr<Connection> from;
  std::string line;
  bool begin = false;
};

struct SessionServer::Impl {
  WorldConfig world_cfg;
  SessionConfig cfg;
  Session session;
  std::string hello_controller, hello_observer;

  int listen_fd = -1;
  int bound_port = 0;
  std::atomic<bool> running{false};
  std::thread accept_thread, sim_thread;

  mutable std::mutex conns_m;
  std::vector<std::shared_ptr<Connection>> conns;
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };
  std::vector<Worker> workers;
  bool has_controller = false;

  std::mutex in_m;
  std::condition_variable in_cv;
  std::deque<Input> inputs;
  bool controller_present = false;

  std::atomic<std::int64_t> ticks{0}, dropped{0}, rejected{0};

  Impl(const WorldConfig& w, const SessionConfig& c) : world_cfg(w), cfg(c), session(w, c) {
    hello_controller = session.hello(true).dump() + "\n";
    hello_observer = session.hello(false).dump() + "\n";
  }

  void accept_loop();
  void sim_loop();
  void serve(int fd);
  void run_websocket(const std::shared_ptr<Connection>& c, std::string pending);
  void enqueue(const std::shared_ptr<Connection>& c, std::string line);
};

void SessionServer::Impl::accept_loop() {
  while (running) {
    pollfd p{listen_fd, POLLIN, 0};
    const int rc = ::poll(&p, 1, 100);
    if (rc <= 0) continue;
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    const std::lock_guard lk(conns_m);
    std::erase_if(workers, [](Worker& w) {
      if (!*w.done) return false;
      w.thread.join();
      return true;
    });
    auto done = std::make_shared<std::atomic<bool>>(false);
    workers.push_back({std::thread([this, fd, done] {
                         serve(fd);
                         *done = true;
                       }),
                       done});
  }
}

void SessionServer::Impl::sim_loop() {
  const double dt = world_cfg.dt;
  auto anchor = Clock::now();
  std::int64_t anchor_tick = 0;
  std::int64_t tick = 0;
  std::deque<Input> batch;
  while (running) {
    {
      std::unique_lock lk(in_m);
      if (!controller_present) {
        in_cv.wait(lk, [&] { return !running || controller_present; });
        anchor = Clock::now();
        anchor_tick = tick;
      }
      batch.swap(inputs);
    }
    if (!running) break;
    for (Input& in : batch) {
      if (in.begin) {
        session.begin_client();
        continue;
      }
      in.from->reply(session.handle(in.line).dump() + "\n");
    }
    batch.clear();

    const std::optional<nlohmann::json> tel = session.tick();
    ++tick;
    ticks = tick;
    if (tel) {
      const std::string line = tel->dump() + "\n";
      const std::lock_guard lk(conns_m);
      for (const auto& c : conns) dropped += c->publish(line);
    }

    if (cfg.speed > 0.0) {
      const auto target =
          anchor + std::chrono::duration_cast<Clock::duration>(
                       std::chrono::duration<double>(static_cast<double>(tick - anchor_tick) * dt / cfg.speed));
      const auto now = Clock::now();
      if (now < target) {
        std::this_thread::sleep_until(target);
      } else if (now - target > std::chrono::milliseconds(100)) {
        anchor = now;
        anchor_tick = tick;
      }
    }
  }
}

void SessionServer::Impl::enqueue(const std::shared_ptr<Connection>& c, std::string line) {
  if (!c->controller) {
    c->reply(nlohmann::json{{"type", "error"}, {"id", nullptr}, {"detail", "read-only observer"}}.dump() + "\n");
    return;
  }
  {
    const std::lock_guard lk(in_m);
    if (inputs.size() < cfg.input_queue) {
      inputs.push_back({c, std::move(line), false});
      return;
    }
  }
  ++rejected;
  nlohmann::json id = nullptr;
  const nlohmann::json msg = nlohmann::json::parse(line, nullptr, false);
  if (msg.is_object() && msg.contains("seq")) id = msg["seq"];
  c->reply(nlohmann::json{{"type", "error"}, {"id", id}, {"detail", "input queue full"}}.dump() + "\n");
}

void SessionServer::Impl::serve(int fd) {
  std::string data;
  char buf[8192];
  const auto deadline = Clock::now() + std::chrono::seconds(5);
  std::size_t end = std::string::npos;
  while (running && (end = data.find("\r\n\r\n")) == std::string::npos) {
    if (data.size() > 16384 || Clock::now() > deadline) break;
    pollfd p{fd, POLLIN, 0};
    if (::poll(&p, 1, 100) <= 0) continue;
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n <= 0) break;
    data.append(buf, static_cast<std::size_t>(n));
  }
  const auto req = end == std::string::npos ? std::nullopt : parse_http_request(std::string_view(data).substr(0, end));
  if (!req) {
    if (end != std::string::npos || data.size() > 16384) send_all(fd, http_response(400, "text/plain", "bad request\n"));
    ::close(fd);
    return;
  }
  const std::string path = req->target.substr(0, req->target.find('?'));
  if (path != "/session") {
    send_all(fd, static_response(cfg.static_root, *req));
    ::shutdown(fd, SHUT_WR);
    ::close(fd);
    return;
  }
  if (!is_websocket_upgrade(*req)) {
    send_all(fd, http_response(400, "text/plain", "expected a WebSocket upgrade\n"));
    ::close(fd);
    return;
  }
  send_all(fd, "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
               "Sec-WebSocket-Accept: " +
                   websocket_accept_key(req->headers.at("sec-websocket-key")) + "\r\n\r\n");

  auto c = std::make_shared<Connection>();
  c->fd = fd;
  c->wake = ::eventfd(0, EFD_NONBLOCK);
  c->capacity = cfg.telemetry_queue;
  {
    const std::lock_guard lk(conns_m);
    c->controller = !has_controller;
    has_controller = has_controller || c->controller;
    c->reply(c->controller ? hello_controller : hello_observer);
    conns.push_back(c);
  }
  if (c->controller) {
    {
      const std::lock_guard lk(in_m);
      inputs.clear();
      inputs.push_back({c, {}, true});
      controller_present = true;
    }
    in_cv.notify_all();
  }

  try {
    run_websocket(c, data.substr(end + 4));
  } catch (const ProtocolError&) {
    send_all(fd, encode_frame(Opcode::kClose, std::string("\x03\xea", 2)));
  }

  {
    const std::lock_guard lk(conns_m);
    std::erase(conns, c);
    if (c->controller) has_controller = false;
  }
  if (c->controller) {
    const std::lock_guard lk(in_m);
    controller_present = false;
  }
}

void SessionServer::Impl::run_websocket(const std::shared_ptr<Connection>& c, std::string pending) {
  FrameParser parser(true);
  const auto on_bytes = [&](std::string_view bytes) {
    for (WsMessage& m : parser.feed(bytes)) {
      switch (m.op) {
        case Opcode::kText: {
          std::size_t pos = 0;
          while (pos < m.payload.size()) {
            const std::size_t eol = std::min(m.payload.find('\n', pos), m.payload.size());
            std::string line = m.payload.substr(pos, eol - pos);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) enqueue(c, std::move(line));
            pos = eol + 1;
          }
          break;
        }
        case Opcode::kBinary:
          c->reply(R"({"type":"error","id":null,"detail":"binary frames are not accepted"})" "\n");
          break;
        case Opcode::kPing:
          if (!send_all(c->fd, encode_frame(Opcode::kPong, m.payload))) return false;
          break;
        case Opcode::kClose:
          send_all(c->fd, encode_frame(Opcode::kClose, m.payload.substr(0, 2)));
          return false;
        default:
          break;
      }
    }
    return true;
  };
  if (!pending.empty() && !on_bytes(pending)) return;

  char buf[16384];
  while (running) {
    pollfd p[2] = {{c->fd, POLLIN, 0}, {c->wake, POLLIN, 0}};
    if (::poll(p, 2, 100) < 0 && errno != EINTR) return;
    if (p[1].revents & POLLIN) {
      std::uint64_t count = 0;
      [[maybe_unused]] const ssize_t n = ::read(c->wake, &count, sizeof count);
    }
    if (p[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      const ssize_t n = ::recv(c->fd, buf, sizeof buf, 0);
      if (n <= 0) return;
      if (!on_bytes(std::string_view(buf, static_cast<std::size_t>(n)))) return;
    }
    std::deque<std::string> replies, telemetry;
    {
      const std::lock_guard lk(c->m);
      replies.swap(c->replies);
      telemetry.swap(c->telemetry);
    }
    for (const std::string& msg : replies) {
      if (!send_all(c->fd, encode_frame(Opcode::kText, msg))) return;
    }
    for (const std::string& msg : telemetry) {
      if (!send_all(c->fd, encode_frame(Opcode::kText, msg))) return;
    }
  }
  send_all(c->fd, encode_frame(Opcode::kClose, std::string("\x03\xe9", 2)));
}

SessionServer::SessionServer(const WorldConfig& world, const SessionConfig& cfg)
    : impl_(std::make_unique<Impl>(world, cfg)) {}

SessionServer::~SessionServer() { stop(); }

int SessionServer::start() {
  Impl& s = *impl_;
  if (s.running) return s.bound_port;
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(s.cfg.port);
  if (const int rc = ::getaddrinfo(s.cfg.host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw ValidationError("session.host: cannot resolve '" + s.cfg.host + "': " + ::gai_strerror(rc));
  }
  int err = 0;
  for (addrinfo* ai = res; ai != nullptr && s.listen_fd < 0; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      s.listen_fd = fd;
    } else {
      err = errno;
      ::close(fd);
    }
  }
  ::freeaddrinfo(res);
  if (s.listen_fd < 0) throw std::system_error(err, std::generic_category(), "listen on port " + service);

  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  ::getsockname(s.listen_fd, reinterpret_cast<sockaddr*>(&addr), &len);
  s.bound_port = addr.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
                                            : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  s.running = true;
  s.sim_thread = std::thread([&s] { s.sim_loop(); });
  s.accept_thread = std::thread([&s] { s.accept_loop(); });
  return s.bound_port;
}

void SessionServer::stop() {
  Impl& s = *impl_;
  if (!s.running.exchange(false)) return;
  {
    const std::lock_guard lk(s.in_m);
  }
  s.in_cv.notify_all();
  if (s.accept_thread.joinable()) s.accept_thread.join();
  if (s.sim_thread.joinable()) s.sim_thread.join();
  ::close(s.listen_fd);
  s.listen_fd = -1;
  std::vector<Impl::Worker> workers;
  {
    const std::lock_guard lk(s.conns_m);
    for (const auto& c : s.conns) c->notify();
    workers.swap(s.workers);
  }
  for (Impl::Worker& w : workers) w.thread.join();
}

int SessionServer::port() const { return impl_->bound_port; }

ServerStats SessionServer::stats() const {
  ServerStats st;
  st.ticks = impl_->ticks;
  st.telemetry_dropped = impl_->dropped;
  st.inputs_rejected = impl_->rejected;
  const std::lock_guard lk(impl_->conns_m);
  st.connections = static_cast<int>(impl_->conns.size());
  st.controller = impl_->has_controller;
  return st;
}

}  // namespace teleteach
