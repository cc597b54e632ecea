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

// Interactive teaching session, independent of any transport.
//
// Inbound messages (one JSON object each, all carrying an increasing "seq"):
//   {"type":"force_input","seq":n,"pointer":[u,v],"velocity":[du,dv],
//    "fx":N,"fy":N,"mz":Nm,"release":false}
//   {"type":"command","seq":n,"command":"reset"}
//   {"type":"command","seq":n,"command":"set_param","key":"autonomy.lambda_f","value":10}
//   {"type":"command","seq":n,"command":"start_script","id":"R1"}
//   {"type":"command","seq":n,"command":"stop_script"}
// Outbound: hello (first), telemetry {"frame": telemetry.v1 frame}, and
// ack {"id": seq} / error {"id": seq or null, "detail": text}.
//
// The pointer (u, v) is a displacement in metres from the home pose along
// the session plane axes; the hand pulls the therapist robot toward it
// through the scripted arm's spring-damper, restricted to the plane.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "teleteach/config.hpp"

namespace teleteach {

inline constexpr const char* kSessionProtocol = "session.v1";
inline constexpr int kSessionProtocolVersion = 1;

struct PointerInput {
  double u = 0.0, v = 0.0;
  double du = 0.0, dv = 0.0;
  double fx = 0.0, fy = 0.0, mz = 0.0;
  bool has_position = false;
  /// Sim time the sample arrived; the target is extrapolated from here.
  double t = 0.0;
};

/// Wrench mask for the session plane: the two pointer axes, plus the moment
/// about the plane normal when twist_moment is set.
Vec6 plane_mask(const SessionConfig& cfg);

/// Hand target at time t. A pointer with a position pulls toward home +
/// (u, v) + (du, dv)·(t − t_sample) along the plane axes; otherwise the
/// running script (if any) sets the target and the pointer only pushes.
/// With neither, the target rides on the therapist robot so only the push
/// acts. Shared by the session and by direct World runs.
std::optional<HandTarget> pointer_hand(const std::optional<PointerInput>& pointer,
                                       const std::optional<SkillScript>& script, double t,
                                       const RobotState& tr, const WorldConfig& world,
                                       const SessionConfig& cfg);

class Session {
 public:
  Session(const WorldConfig& world, const SessionConfig& cfg);

  nlohmann::json hello(bool controller) const;

  /// A new controlling client: its sequence numbers start afresh.
  void begin_client() { last_seq_ = -1; }

  /// Applies one inbound line and returns the ack or error reply.
  nlohmann::json handle(const std::string& line);

  /// Advances one tick. Returns a telemetry message on every
  /// telemetry_stride()-th tick.
  std::optional<nlohmann::json> tick();

  int telemetry_stride() const { return stride_; }
  const World& world() const { return world_; }
  const SessionConfig& config() const { return cfg_; }
  bool script_running() const { return script_.has_value(); }

 private:
  nlohmann::json apply(const nlohmann::json& msg, std::int64_t seq);
  nlohmann::json command(const nlohmann::json& msg, std::int64_t seq);

  WorldConfig world_cfg_;
  WorldConfig pending_cfg_;
  SessionConfig cfg_;
  World world_;
  int stride_ = 1;
  std::int64_t last_seq_ = -1;
  std::optional<PointerInput> pointer_;
  std::optional<SkillScript> script_;
};

}  // namespace teleteach
