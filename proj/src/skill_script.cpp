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

#include "teleteach/skill_script.hpp"

#include <cmath>
#include <numbers>

namespace teleteach {

void SkillScript::validate() const {
  if (!(frequency_hz > 0.0)) throw ValidationError("script " + id + ": frequency_hz must be > 0");
  if (!(stop >= start)) throw ValidationError("script " + id + ": stop must not precede start");
  if (!(amplitude.cwiseAbs().array() <= kWorkspaceAmplitude).all()) {
    throw ValidationError("script " + id + ": amplitude outside the workspace");
  }
  if (!(rot_amplitude.cwiseAbs().array() <= kRotationAmplitude).all()) {
    throw ValidationError("script " + id + ": rot_amplitude too large");
  }
  if (!(harmonic.array() >= 1).all()) throw ValidationError("script " + id + ": harmonic must be >= 1");
}

ScriptSample skill_trajectory(const SkillScript& script, double t) {
  const double w = 2.0 * std::numbers::pi * script.frequency_hz;
  const double tl = t - script.start;
  ScriptSample out;
  Vec3 p_dot;
  out.pose.p = script.base.p;
  for (int i = 0; i < 3; ++i) {
    const double wi = w * script.harmonic[i];
    out.pose.p[i] += script.amplitude[i] * std::sin(wi * tl + script.phase[i]);
    p_dot[i] = script.amplitude[i] * wi * std::cos(wi * tl + script.phase[i]);
  }
  Vec3 r, r_dot;
  for (int i = 0; i < 3; ++i) {
    r[i] = script.rot_amplitude[i] * std::sin(w * tl + script.rot_phase[i]);
    r_dot[i] = script.rot_amplitude[i] * w * std::cos(w * tl + script.rot_phase[i]);
  }
  out.pose.q = script.base.q * UnitQuaternion::from_rotation_vector(r);
  const Vec3 omega = so3_right_jacobian(r) * r_dot;
  out.rate << p_dot, 0.5 * omega;
  return out;
}

SkillScript skill_preset(const std::string& id, const Pose& base) {
  SkillScript s;
  s.id = id;
  s.base = base;
  s.frequency_hz = 0.3;
  constexpr double a = 0.05;
  constexpr double b = 0.3;
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (id == "R1") {
    s.amplitude = Vec3(a, 0, 0);
    s.rot_amplitude = Vec3(0, b, 0);
  } else if (id == "R2") {
    s.amplitude = Vec3(0, a, 0);
    s.rot_amplitude = Vec3(b, 0, 0);
  } else if (id == "R3") {
    s.amplitude = Vec3(0, 0, a);
    s.rot_amplitude = Vec3(0, b, 0);
  } else if (id == "R4" || id == "R5") {
    const int main = id == "R4" ? 1 : 0;
    s.amplitude[main] = 0.06;
    s.amplitude[2] = 0.03;
    s.harmonic[2] = 2;
    s.rot_amplitude = Vec3::Constant(0.15);
    s.rot_phase = Vec3(0.0, half_pi, std::numbers::pi);
  } else {
    throw ValidationError("unknown skill preset '" + id + "' (expected R1..R5)");
  }
  return s;
}

std::vector<std::string> skill_preset_ids() { return {"R1", "R2", "R3", "R4", "R5"}; }

}  // namespace teleteach
