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

// The tele-teaching world: therapist robot, patient robot, the link between
// them, the skill learner and the autonomy allocator, advanced at 1 kHz.

#pragma once

#include <cstdint>
#include <optional>

#include "teleteach/autonomy.hpp"
#include "teleteach/control.hpp"
#include "teleteach/learner.hpp"

namespace teleteach {

struct Stiffness {
  double trans = 500.0;
  double rot = 20.0;
};

struct RobotsConfig {
  RobotParams tr;
  RobotParams pr;
  Stiffness k_th;
  Stiffness k_thp;
  Stiffness k0;
  ArmConfig arm;
  /// Also scale the therapist-side gains by η, on top of the η·u_th scaling.
  bool tr_gain_ramp = false;
};

struct ChannelConfig {
  int delay_ticks = 0;
  double drop_probability = 0.0;
};

struct WorldConfig {
  PdmpConfig dmp;
  AfoConfig afo;
  AllocationConfig autonomy;
  RobotsConfig robots;
  ChannelConfig channel;
  double dt = 1e-3;
  int learn_every = 2;
  std::uint64_t seed = 1;
  Pose home{Vec3(0.5, 0.0, 0.4), UnitQuaternion()};

  void validate() const;
};

struct TelemetryFrame {
  std::int64_t tick = 0;
  double t = 0.0;
  Pose tr_pose, pr_pose, x_ref;
  Twist tr_twist, pr_twist;
  Wrench f_h_th, u_p;
  double mu = 0.0, eta = 0.0, omega = 0.0, s = 0.0;
  double err_norm = 0.0, i_s = 0.0, i_h = 0.0;
  Vec6 kp = Vec6::Zero();
  bool learning = false;
};

/// Where the therapist's hand is heading this tick.
struct HandTarget {
  Pose pose;
  Vec6 rate = Vec6::Zero();
  /// Restricts the resulting wrench to these components (1 keeps, 0 drops).
  Vec6 mask = Vec6::Ones();
  /// Extra operator wrench on top of the arm's spring-damper.
  Wrench push;
};

class World {
 public:
  explicit World(const WorldConfig& cfg);

  /// Hand target for subsequent ticks; nullopt releases the therapist robot.
  void set_hand(const std::optional<HandTarget>& hand) { hand_ = hand; }
  const std::optional<HandTarget>& hand() const { return hand_; }

  /// Advances one control tick and returns its telemetry.
  const TelemetryFrame& tick();

  /// Back to the initial state, same configuration.
  void reset();

  /// Tunes allocation thresholds on a live world.
  AllocationConfig& allocation() { return cfg_.autonomy; }

  const WorldConfig& config() const { return cfg_; }
  const TelemetryFrame& last() const { return frame_; }
  const RobotState& tr() const { return tr_; }
  const RobotState& pr() const { return pr_; }
  const SkillLearner& learner() const { return learner_; }
  const AutonomyState& autonomy() const { return auto_; }
  std::int64_t ticks() const { return tick_; }
  double time() const { return static_cast<double>(tick_) * cfg_.dt; }

 private:
  WorldConfig cfg_;
  GainSet g_th_, g_thp_, g_0_, g_arm_;
  Vec6 pr_inertia_;

  RobotState tr_, pr_;
  Channel to_pr_, to_tr_;
  SkillLearner learner_;
  AutonomyState auto_;
  std::optional<HandTarget> hand_;
  PdmpStep ref_;
  std::int64_t tick_ = 0;
  double err_norm_ = 0.0, i_s_ = 0.0, i_h_ = 0.0;
  TelemetryFrame frame_;
};

}  // namespace teleteach
