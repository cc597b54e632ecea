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

// skill.v1: a learned periodic skill (weights, frequency, goal) together
// with the hash of the dmp/afo configuration that produced it.

#pragma once

#include <array>
#include <string>

#include <json.hpp>

#include "teleteach/learner.hpp"
#include "teleteach/world.hpp"

namespace teleteach {

inline constexpr const char* kSkillSchema = "skill.v1";

struct SkillFile {
  std::string config_hash;
  double omega = 0.0;
  Pose goal;
  BasisConfig translation;
  BasisConfig rotation;
  /// Rows 0..2 translation, 3..5 rotation.
  std::array<Eigen::VectorXd, 6> weights;

  bool operator==(const SkillFile& o) const;
};

SkillFile capture_skill(const SkillLearner& learner, const WorldConfig& world);

nlohmann::json skill_to_json(const SkillFile& skill);
/// Throws ValidationError naming the first malformed field.
SkillFile skill_from_json(const nlohmann::json& j);

/// Pretty-printed document with a trailing newline.
std::string skill_document(const SkillFile& skill);
void write_skill_file(const std::string& path, const SkillFile& skill);
SkillFile read_skill_file(const std::string& path);

}  // namespace teleteach
