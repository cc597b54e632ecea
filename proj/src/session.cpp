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

#include "teleteach/session.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "teleteach/telemetry.hpp"

namespace teleteach {

using nlohmann::json;

namespace {

json ack(std::int64_t seq) { return {{"type", "ack"}, {"id", seq}}; }

json error(const json& id, const std::string& detail) {
  return {{"type", "error"}, {"id", id}, {"detail", detail}};
}

double number(const json& msg, const char* key) {
  if (!msg.contains(key)) return 0.0;
  const json& v = msg.at(key);
  if (!v.is_number()) throw ValidationError(std::string(key) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(std::string(key) + " must be finite");
  return d;
}

std::pair<double, double> pair_of(const json& msg, const char* key) {
  const json& v = msg.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ValidationError(std::string(key) + " must be [number, number]");
  }
  const double a = v[0].get<double>(), b = v[1].get<double>();
  if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError(std::string(key) + " must be finite");
  return {a, b};
}

int normal_axis(const SessionConfig& cfg) { return 3 - cfg.plane_u - cfg.plane_v; }

}  // namespace

Vec6 plane_mask(const SessionConfig& cfg) {
  Vec6 m = Vec6::Zero();
  m[cfg.plane_u] = 1.0;
  m[cfg.plane_v] = 1.0;
  if (cfg.twist_moment) m[3 + normal_axis(cfg)] = 1.0;
  return m;
}

std::optional<HandTarget> pointer_hand(const std::optional<PointerInput>& pointer,
                                       const std::optional<SkillScript>& script, double t,
                                       const RobotState& tr, const WorldConfig& world,
                                       const SessionConfig& cfg) {
  if (!pointer && !script) return std::nullopt;
  HandTarget hand;
  if (pointer && pointer->has_position) {
    const double dt = t - pointer->t;
    hand.pose = world.home;
    hand.pose.p[cfg.plane_u] += pointer->u + pointer->du * dt;
    hand.pose.p[cfg.plane_v] += pointer->v + pointer->dv * dt;
    hand.rate[cfg.plane_u] = pointer->du;
    hand.rate[cfg.plane_v] = pointer->dv;
    hand.mask = plane_mask(cfg);
  } else if (script) {
    const ScriptSample s = skill_trajectory(*script, t);
    hand.pose = s.pose;
    hand.rate = s.rate;
  } else {
    hand.pose = tr.pose;
    hand.rate = tr.twist.pose_rate();
    hand.mask = plane_mask(cfg);
  }
  if (pointer) {
    hand.push.force[cfg.plane_u] = pointer->fx;
    hand.push.force[cfg.plane_v] = pointer->fy;
    if (cfg.twist_moment) hand.push.moment[normal_axis(cfg)] = pointer->mz;
  }
  return hand;
}

Session::Session(const WorldConfig& world, const SessionConfig& cfg)
    : world_cfg_(world), pending_cfg_(world), cfg_(cfg), world_(world) {
  cfg_.validate();
  stride_ = std::max(1, static_cast<int>(std::lround(1.0 / (cfg_.telemetry_hz * world_cfg_.dt))));
}

json Session::hello(bool controller) const {
  return {{"type", "hello"},
          {"protocol", kSessionProtocol},
          {"version", kSessionProtocolVersion},
          {"dt", world_cfg_.dt},
          {"telemetry_hz", 1.0 / (stride_ * world_cfg_.dt)},
          {"plane", {cfg_.plane_u, cfg_.plane_v}},
          {"home", pose_to_json(world_cfg_.home)},
          {"presets", skill_preset_ids()},
          {"role", controller ? "controller" : "observer"}};
}

json Session::handle(const std::string& line) {
  json msg;
  try {
    msg = json::parse(line);
  } catch (const json::parse_error&) {
    return error(nullptr, "malformed JSON");
  }
  if (!msg.is_object()) return error(nullptr, "message must be a JSON object");
  if (!msg.contains("seq") || !msg["seq"].is_number_integer()) {
    return error(nullptr, "missing integer seq");
  }
  const auto seq = msg["seq"].get<std::int64_t>();
  if (seq <= last_seq_) {
    return error(seq, "seq must increase (last " + std::to_string(last_seq_) + ")");
  }
  last_seq_ = seq;
  try {
    return apply(msg, seq);
  } catch (const ValidationError& e) {
    return error(seq, e.what());
  } catch (const json::exception& e) {
    return error(seq, e.what());
  }
}

json Session::apply(const json& msg, std::int64_t seq) {
  const json& type = msg.value("type", json());
  if (type == "command") return command(msg, seq);
  if (type != "force_input") return error(seq, "unknown message type");

  if (msg.value("release", false)) {
    pointer_.reset();
    return ack(seq);
  }
  PointerInput in;
  in.t = world_.time();
  if (msg.contains("pointer")) {
    std::tie(in.u, in.v) = pair_of(msg, "pointer");
    in.has_position = true;
  }
  if (msg.contains("velocity")) std::tie(in.du, in.dv) = pair_of(msg, "velocity");
  in.fx = number(msg, "fx");
  in.fy = number(msg, "fy");
  in.mz = number(msg, "mz");
  if (in.has_position && std::max(std::abs(in.u), std::abs(in.v)) > kWorkspaceAmplitude) {
    return error(seq, "pointer outside the workspace");
  }
  pointer_ = in;
  return ack(seq);
}

json Session::command(const json& msg, std::int64_t seq) {
  const std::string name = msg.value("command", "");
  if (name == "reset") {
    world_cfg_ = pending_cfg_;
    world_ = World(world_cfg_);
    pointer_.reset();
    script_.reset();
    return ack(seq);
  }
  if (name == "stop_script") {
    script_.reset();
    return ack(seq);
  }
  if (name == "start_script") {
    SkillScript s = skill_preset(msg.value("id", ""), world_cfg_.home);
    s.start = world_.time();
    s.stop = std::numeric_limits<double>::infinity();
    script_ = s;
    return ack(seq);
  }
  if (name == "set_param") {
    const std::string key = msg.value("key", "");
    if (!msg.contains("value")) return error(seq, "set_param needs a value");
    const std::string section = key.substr(0, key.find('.'));
    static const char* kWorldSections[] = {"world", "dmp", "afo", "autonomy", "robots", "channel"};
    if (key.find('.') == std::string::npos ||
        std::none_of(std::begin(kWorldSections), std::end(kWorldSections),
                     [&](const char* s) { return section == s; })) {
      return error(seq, "unknown parameter '" + key + "'");
    }
    AppConfig app = default_config();
    app.world = pending_cfg_;
    app.scenario.world = pending_cfg_;
    json doc = config_to_json(app);
    std::string pointer_path = "/" + key;
    std::replace(pointer_path.begin(), pointer_path.end(), '.', '/');
    const json::json_pointer ptr(pointer_path);
    if (!doc.contains(ptr)) return error(seq, "unknown parameter '" + key + "'");
    doc[ptr] = msg["value"];
    const AppConfig updated = config_from_json(doc);
    pending_cfg_ = updated.world;
    if (section == "autonomy") {
      world_.allocation() = updated.world.autonomy;
      world_cfg_.autonomy = updated.world.autonomy;
      return ack(seq);
    }
    json reply = ack(seq);
    reply["detail"] = "applies on reset";
    return reply;
  }
  return error(seq, "unknown command '" + name + "'");
}

std::optional<json> Session::tick() {
  world_.set_hand(pointer_hand(pointer_, script_, world_.time(), world_.tr(), world_cfg_, cfg_));
  const TelemetryFrame& f = world_.tick();
  if (f.tick % stride_ != 0) return std::nullopt;
  return json{{"type", "telemetry"}, {"frame", frame_to_json(f)}};
}

}  // namespace teleteach
