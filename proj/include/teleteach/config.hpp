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

// JSON configuration tree.
//
// Sections: dmp, afo, autonomy, robots, channel, scenario, plus world
// (dt, seed, home pose), sensitivity and session. Every key is optional;
// missing keys keep their defaults and unknown keys are rejected.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "teleteach/scenario.hpp"
#include "teleteach/sensitivity.hpp"

namespace teleteach {

struct SessionConfig {
  /// Listen address; the default keeps the server local.
  std::string host = "127.0.0.1";
  int port = 8080;
  double telemetry_hz = 60.0;
  /// Simulated seconds per wall-clock second; 0 runs unthrottled.
  double speed = 1.0;
  /// Directory served over plain HTTP; empty disables static files.
  std::string static_root = "web";
  /// Pose axes (0..2 = x, y, z) spanned by the pointer.
  int plane_u = 0;
  int plane_v = 2;
  /// Map the pointer twist gesture (mz) to the moment about the plane normal.
  bool twist_moment = false;
  std::size_t telemetry_queue = 256;
  std::size_t input_queue = 64;

  void validate() const;
};

struct AppConfig {
  WorldConfig world;
  ScenarioConfig scenario;
  SensitivityConfig sensitivity;
  SessionConfig session;
};

/// Defaults everywhere, scenario on the default two-skill timeline.
AppConfig default_config();

/// Builds and validates a config from a parsed document. Throws
/// ValidationError listing every offending key path, one per line.
AppConfig config_from_json(const nlohmann::json& doc);

/// Canonical document; config_from_json(config_to_json(c)) == c.
nlohmann::json config_to_json(const AppConfig& cfg);

/// Reads `path`; a missing or unparsable file is a ValidationError naming it.
nlohmann::json read_config_file(const std::string& path);

/// Applies "a.b.c=value". The value is parsed as JSON when it can be,
/// otherwise taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// read_config_file (if path non-empty) + overrides + config_from_json.
AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Path from TELETEACH_CONFIG, or empty.
std::string default_config_path();

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

/// Hash of the canonical dmp and afo sections, as 16 hex digits.
std::string skill_config_hash(const WorldConfig& world);

}  // namespace teleteach
