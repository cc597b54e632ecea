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

// On-disk and on-wire formats: telemetry.v1 NDJSON frames and CSV tables.
//
// A telemetry.v1 stream is one header object followed by one frame object
// per line. Poses are {"p": [x, y, z], "q": [w, x, y, z]}, twists
// {"v": [...], "omega": [...]}, wrenches {"force": [...], "moment": [...]}.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "teleteach/scenario.hpp"
#include "teleteach/sensitivity.hpp"

namespace teleteach {

inline constexpr const char* kTelemetrySchema = "telemetry.v1";

nlohmann::json pose_to_json(const Pose& p);
/// Throws ValidationError on a malformed or non-unit pose.
Pose pose_from_json(const nlohmann::json& j);

nlohmann::json frame_to_json(const TelemetryFrame& f);
TelemetryFrame frame_from_json(const nlohmann::json& j);

/// Header line contents: schema, dt, decimation and the skill config hash.
nlohmann::json telemetry_header(const WorldConfig& world, int decimation);

/// Writes the header on construction, then one compact line per frame.
class TelemetryWriter {
 public:
  TelemetryWriter(std::ostream& out, const nlohmann::json& header);
  void write(const TelemetryFrame& f);
  long frames() const { return frames_; }

 private:
  std::ostream& out_;
  long frames_ = 0;
};

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Per-phase scenario metrics; absent values are null.
nlohmann::json scenario_summary(const ScenarioResult& result);

/// RFC 4180 table with columns param,weight_std,rms_error_mm. Failed rows
/// carry empty metric cells.
std::string sensitivity_csv(const std::vector<SensitivityRow>& rows);

}  // namespace teleteach
