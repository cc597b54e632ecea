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

// Hyperparameter sweeps of the learner on a one-dimensional sinusoid.

#pragma once

#include <string>
#include <vector>

#include "teleteach/pdmp.hpp"

namespace teleteach {

struct SensitivityConfig {
  double offset = 0.45;
  double amplitude = 0.05;
  /// Signal angular frequency, rad/s; the learner runs at this fixed Ω.
  double omega = 2.0 * 2.0 * 3.141592653589793 * 0.3;
  double duration = 40.0;
  double sample_hz = 500.0;
  double mu_ramp_start = 28.0;
  double mu_ramp_end = 30.0;
  double weight_window_start = 20.0;
  double weight_window_end = 28.0;
  double error_window_start = 30.0;
  double error_window_end = 40.0;
  PdmpConfig dmp;

  /// "h" or "lambda_fg".
  std::string param = "h";
  std::vector<double> values;

  void validate() const;
};

struct SensitivityRow {
  double value = 0.0;
  double weight_std = 0.0;
  double rms_error_mm = 0.0;
  /// Empty on success, otherwise why the row has no numbers.
  std::string failure;
};

/// One run of the learner with the dmp section of `cfg` as given.
SensitivityRow run_sensitivity_point(const SensitivityConfig& cfg, double value);

/// One row per sweep value, in order. A failing row does not stop the sweep.
std::vector<SensitivityRow> run_sensitivity(const SensitivityConfig& cfg);

}  // namespace teleteach
