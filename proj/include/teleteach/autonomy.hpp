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

// Learning level μ and control autonomy η.

#pragma once

#include "teleteach/types.hpp"

namespace teleteach {

struct AllocationConfig {
  double rho = 2.0;
  double epsilon = 0.02;
  double lambda_err = 0.03;
  double lambda_f = 8.0;
  double lambda_m = 2.0;
  /// Diagonal weighting of the pose error before taking its norm.
  Vec6 error_weights = Vec6::Ones();

  void validate() const;
};

struct AutonomyState {
  double mu = 0.0;
  double eta = 0.0;
};

/// μ is treated as 1 from this distance below it.
inline constexpr double kMuOneTolerance = 1e-9;

inline bool mu_is_one(double mu) { return mu >= 1.0 - kMuOneTolerance; }

/// ‖W·(x_ref ⊖ x)‖ for a pose difference already computed.
double weighted_error_norm(const Vec6& diff, const AllocationConfig& cfg);

/// (err/λ_err)⁴.
double skill_confidence(double err_norm, const AllocationConfig& cfg);
/// (‖f‖/λ_f)⁴ + (‖m‖/λ_m)⁴.
double intervention_index(const Wrench& w, const AllocationConfig& cfg);

/// μ̇ with only positive rates at μ = 0 and only negative rates at μ = 1.
double mu_rate(double mu, double i_s, const AllocationConfig& cfg);
/// η̇: rises only while μ = 1, falls regardless of μ.
double eta_rate(double eta, double mu, double i_h, const AllocationConfig& cfg);

/// Euler step on μ, clamped to [0, 1].
double mu_step(double mu, double i_s, double dt, const AllocationConfig& cfg);
/// Euler step on η, clamped to [0, 1].
double eta_step(double eta, double mu, double i_h, double dt, const AllocationConfig& cfg);

}  // namespace teleteach
