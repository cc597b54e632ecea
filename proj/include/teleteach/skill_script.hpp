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

// Analytic periodic demonstrations.

#pragma once

#include <string>
#include <vector>

#include "teleteach/geometry.hpp"

namespace teleteach {

/// Translation: base + aᵢ sin(kᵢ·2πft + φᵢ) per axis, kᵢ the harmonic
/// multiplier (2 on one axis gives a figure-eight). Orientation: base ⊗
/// rotation by r(t) with rᵢ = bᵢ sin(2πft + θᵢ). Time is measured from start.
struct SkillScript {
  std::string id = "custom";
  Vec3 amplitude = Vec3::Zero();
  Vec3 phase = Vec3::Zero();
  Eigen::Vector3i harmonic = Eigen::Vector3i::Ones();
  Vec3 rot_amplitude = Vec3::Zero();
  Vec3 rot_phase = Vec3::Zero();
  double frequency_hz = 0.3;
  double start = 0.0;
  double stop = 0.0;
  Pose base;

  bool active(double t) const { return t >= start && t < stop; }
  double period() const { return 1.0 / frequency_hz; }
  void validate() const;
};

struct ScriptSample {
  Pose pose;
  /// Pose rate [ṗ; ½ω], ω in the body frame.
  Vec6 rate = Vec6::Zero();
};

ScriptSample skill_trajectory(const SkillScript& script, double t);

/// Workspace half-extent accepted for translational amplitudes, m.
inline constexpr double kWorkspaceAmplitude = 0.3;
/// Largest accepted rotation amplitude per axis, rad.
inline constexpr double kRotationAmplitude = 1.2;

/// R1…R5 rehabilitation motions around `base`.
SkillScript skill_preset(const std::string& id, const Pose& base);
std::vector<std::string> skill_preset_ids();

}  // namespace teleteach
