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

// Scripted teaching runs and their summary metrics.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "teleteach/skill_script.hpp"
#include "teleteach/world.hpp"

namespace teleteach {

/// One demonstration followed by autonomous execution until `end`.
struct ScenarioPhase {
  SkillScript script;
  /// The scripted hand lets go once η reaches 1 (or at script.stop).
  bool release_on_autonomy = true;
  /// Push (N) toward the script pose at phase start, held while η ≥ 0.1.
  /// Only used when the phase opens with the follower autonomous.
  double injection_force = 20.0;
  double end = 0.0;
};

struct ScenarioConfig {
  WorldConfig world;
  std::vector<ScenarioPhase> phases;
  double duration = 0.0;
  /// Autonomous-phase metrics start this many script periods after η = 1.
  double settle_periods = 1.0;
  /// Every n-th frame goes to the telemetry sink.
  int telemetry_decimation = 10;

  void validate() const;
  /// R1 at 0.3 Hz, then a force re-injection of R5 at 0.25 Hz offset by 8 cm.
  static ScenarioConfig default_timeline(const WorldConfig& world);
};

struct PhaseSummary {
  std::string skill;
  double demo_start = 0.0;
  double period = 0.0;
  std::optional<double> t_mu_one;
  std::optional<double> t_eta_one;
  std::optional<double> t_release;
  /// (t_mu_one − demo_start) / period.
  std::optional<double> periods_to_mu_one;
  /// (t_eta_one − t_mu_one) / period.
  std::optional<double> periods_to_eta_one;
  /// Injection start until η < 0.1; phases after the first only.
  std::optional<double> injection_latency;
  std::optional<double> t_relearn;
  double peak_hand_force = 0.0;
  std::optional<double> autonomous_rms_mm;
  std::optional<double> autonomous_rms_rad;
  double omega_final = 0.0;
  double omega_script = 0.0;
};

struct ScenarioResult {
  std::vector<PhaseSummary> phases;
  double duration = 0.0;
  bool max_quat_norm_ok = true;
  /// Learner state at the end of the run.
  SkillLearner learner;
};

using FrameSink = std::function<void(const TelemetryFrame&)>;

/// Runs the timeline; every decimated frame goes to `sink` if given.
/// Throws DivergenceError if a robot state blows up.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const FrameSink& sink = {});

}  // namespace teleteach
