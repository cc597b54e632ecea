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

// Teleoperation controllers and the scripted human arm. All gains are
// diagonal 6-vectors acting on pose differences and pose rates.

#pragma once

#include <cstdint>
#include <deque>
#include <random>

#include "teleteach/robot.hpp"

namespace teleteach {

struct GainSet {
  Vec6 K = Vec6::Zero();
  Vec6 D = Vec6::Zero();

  /// D = 2√(K·m) per axis against the given robot's mass and inertia.
  static GainSet critical(double k_trans, double k_rot, const RobotParams& robot);
  GainSet scaled(double s) const { return {K * s, D * s}; }
};

/// K∘(x_a ⊖ x_b) + D∘(ẋ_a − ẋ_b).
Wrench pd_wrench(const Pose& x_a, const Vec6& xd_a, const Pose& x_b, const Vec6& xd_b,
                 const GainSet& gains);

/// Therapist-side PD toward the received patient pose.
Wrench tr_control(const Pose& x_p, const Vec6& xd_p, const RobotState& tr, const GainSet& gains);

struct PrCommand {
  Wrench u_p;
  Wrench u_imp;
  Wrench u_thp;
  Vec6 kp = Vec6::Zero();
  Vec6 dp = Vec6::Zero();
};

/// η-blend of reference impedance (stiffness ηK₀, feedforward M_c ẍ_ref)
/// and PD tracking of the received therapist pose.
PrCommand pr_control(const RobotState& pr, const Pose& x_th, const Vec6& xd_th, const Pose& x_ref,
                     const Vec6& xd_ref, const Vec6& xdd_ref, double eta, const GainSet& follow,
                     const GainSet& impedance, const Vec6& inertia);

struct ArmConfig {
  double stiffness_trans = 600.0;
  double stiffness_rot = 30.0;
  double force_max = 40.0;
  double moment_max = 4.0;
};

/// Spring-damper of the hand toward the demonstrated pose plus a deliberate
/// push, each component clipped to ±force_max / ±moment_max.
Wrench human_arm_wrench(const Pose& x_demo, const Vec6& xd_demo, const RobotState& tr,
                        const GainSet& arm, const ArmConfig& cfg, const Wrench& push = {});

/// Pose and pose rate as sent over the teleoperation link.
struct RobotSnapshot {
  Pose pose;
  Vec6 rate = Vec6::Zero();
};

/// One-way link with an integer tick delay and seeded packet drop. A
/// dropped packet leaves the receiver holding the previous value.
class Channel {
 public:
  Channel() = default;
  Channel(int delay_ticks, double drop_probability, std::uint64_t seed, const RobotSnapshot& initial);

  /// Sends this tick's packet and returns what the receiver holds now.
  const RobotSnapshot& exchange(const RobotSnapshot& sent);
  const RobotSnapshot& held() const { return held_; }

 private:
  int delay_ = 0;
  double drop_ = 0.0;
  std::mt19937_64 rng_;
  std::deque<RobotSnapshot> in_flight_;
  RobotSnapshot held_;
};

}  // namespace teleteach
