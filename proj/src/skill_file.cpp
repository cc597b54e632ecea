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

#include "teleteach/skill_file.hpp"

#include <fstream>

#include "teleteach/config.hpp"
#include "teleteach/telemetry.hpp"

namespace teleteach {

using nlohmann::json;

namespace {

json basis(const BasisConfig& b) { return {{"N", b.count}, {"h", b.width}}; }

BasisConfig basis_from(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("N") || !j.contains("h") || !j["N"].is_number_integer() ||
      !j["h"].is_number()) {
    throw ValidationError("skill file: " + where + " needs integer N and number h");
  }
  BasisConfig b{j["N"].get<int>(), j["h"].get<double>()};
  if (b.count < 2 || !(b.width > 0.0)) throw ValidationError("skill file: " + where + " is out of range");
  return b;
}

}  // namespace

bool SkillFile::operator==(const SkillFile& o) const {
  if (config_hash != o.config_hash || omega != o.omega || goal.p != o.goal.p ||
      goal.q.coeffs() != o.goal.q.coeffs() || translation.count != o.translation.count ||
      translation.width != o.translation.width || rotation.count != o.rotation.count ||
      rotation.width != o.rotation.width) {
    return false;
  }
  for (int d = 0; d < 6; ++d) {
    if (weights[d].size() != o.weights[d].size() || weights[d] != o.weights[d]) return false;
  }
  return true;
}

SkillFile capture_skill(const SkillLearner& learner, const WorldConfig& world) {
  SkillFile s;
  s.config_hash = skill_config_hash(world);
  s.omega = learner.dmp().omega;
  s.goal = learner.dmp().goal;
  s.translation = learner.dmp_config().translation;
  s.rotation = learner.dmp_config().rotation;
  s.weights = learner.dmp().w;
  return s;
}

json skill_to_json(const SkillFile& skill) {
  json rows = json::array();
  for (const Eigen::VectorXd& w : skill.weights) {
    json row = json::array();
    for (Eigen::Index i = 0; i < w.size(); ++i) row.push_back(w[i]);
    rows.push_back(std::move(row));
  }
  return {{"schema", kSkillSchema},
          {"config_hash", skill.config_hash},
          {"omega", skill.omega},
          {"goal", pose_to_json(skill.goal)},
          {"basis", {{"translation", basis(skill.translation)}, {"rotation", basis(skill.rotation)}}},
          {"weights", std::move(rows)}};
}

SkillFile skill_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("skill file: expected a JSON object");
  if (j.value("schema", "") != kSkillSchema) {
    throw ValidationError(std::string("skill file: schema must be '") + kSkillSchema + "'");
  }
  SkillFile s;
  if (!j.contains("config_hash") || !j["config_hash"].is_string()) {
    throw ValidationError("skill file: config_hash must be a string");
  }
  s.config_hash = j["config_hash"].get<std::string>();
  if (!j.contains("omega") || !j["omega"].is_number() || !(j["omega"].get<double>() > 0.0)) {
    throw ValidationError("skill file: omega must be a positive number");
  }
  s.omega = j["omega"].get<double>();
  if (!j.contains("goal")) throw ValidationError("skill file: missing goal");
  s.goal = pose_from_json(j["goal"]);
  if (!j.contains("basis") || !j["basis"].is_object()) throw ValidationError("skill file: missing basis");
  s.translation = basis_from(j["basis"].value("translation", json()), "basis.translation");
  s.rotation = basis_from(j["basis"].value("rotation", json()), "basis.rotation");

  const json& rows = j.value("weights", json());
  if (!rows.is_array() || rows.size() != 6) throw ValidationError("skill file: weights must hold 6 rows");
  for (int d = 0; d < 6; ++d) {
    const int n = d < 3 ? s.translation.count : s.rotation.count;
    const json& row = rows[d];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      throw ValidationError("skill file: weights[" + std::to_string(d) + "] must hold " + std::to_string(n) +
                            " numbers");
    }
    s.weights[d].resize(n);
    for (int i = 0; i < n; ++i) {
      if (!row[i].is_number()) {
        throw ValidationError("skill file: weights[" + std::to_string(d) + "] must hold numbers");
      }
      s.weights[d][i] = row[i].get<double>();
    }
  }
  return s;
}

std::string skill_document(const SkillFile& skill) { return skill_to_json(skill).dump(2) + "\n"; }

void write_skill_file(const std::string& path, const SkillFile& skill) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write skill file '" + path + "'");
  out << skill_document(skill);
}

SkillFile read_skill_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open skill file '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ValidationError("skill file '" + path + "' is not valid JSON");
  return skill_from_json(j);
}

}  // namespace teleteach
