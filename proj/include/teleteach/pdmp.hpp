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

// Periodic dynamical movement primitive on R³×S³.
//
// Six output rows: three translational (m) and three rotational, the latter
// in the half-angle tangent coordinates returned by pose_diff. Velocities
// are pose rates [v; ½ω] throughout.

#pragma once

#include <array>

#include "teleteach/geometry.hpp"

namespace teleteach {

struct BasisConfig {
  int count = 30;
  double width = 31.0;
};

struct PdmpConfig {
  BasisConfig translation;
  BasisConfig rotation;
  double alpha_z = 25.0;
  double beta_z = 6.25;
  double forgetting = 0.9995;
  double initial_gain = 1.0;
  /// Restore P to initial_gain when μ falls below reset_threshold after
  /// having reached 1.
  bool reset_gain_on_relearn = true;
  double reset_threshold = 0.05;
  /// Low-pass cutoff applied to finite-difference demo derivatives.
  double derivative_cutoff_hz = 10.0;

  /// Amplitude modulation, fixed.
  static constexpr double kAmplitude = 1.0;

  const BasisConfig& basis_for(int dim) const { return dim < 3 ? translation : rotation; }
  void validate() const;
};

/// von Mises activations exp(h(cos(s − c_i) − 1)), centers 2πi/N.
Eigen::VectorXd basis_activations(double s, const BasisConfig& basis);

struct PdmpState {
  double s = 0.0;
  double omega = 1.0;
  std::array<Eigen::VectorXd, 6> w;
  std::array<Eigen::VectorXd, 6> p;
  Pose x_ref;
  Vec6 xd_ref = Vec6::Zero();
  Pose goal;

  /// Zero weights, P = initial_gain, s = 0, at rest on `start`.
  static PdmpState initial(const PdmpConfig& cfg, double omega, const Pose& start);
  void reset_gains(const PdmpConfig& cfg);
};

/// γ(s) per row: Σ wᵢψᵢ / Σ ψᵢ.
Vec6 forcing(double s, const PdmpState& state, const PdmpConfig& cfg);

/// Forcing that would make the DMP reproduce the given sample:
/// ẍ/Ω² − α_z(β_z(g ⊖ x) − ẋ/Ω).
Vec6 target_forcing(const Pose& x_d, const Vec6& xd_d, const Vec6& xdd_d, const Pose& goal,
                    double omega, const PdmpConfig& cfg);

/// One RLS sample at the current phase. Weights are left untouched when
/// μ ≥ 1; gains are always updated.
void rls_update(PdmpState& state, const Vec6& gamma_d, double mu, const PdmpConfig& cfg);

struct PdmpStep {
  Vec6 xdd = Vec6::Zero();
  Vec6 xd = Vec6::Zero();
  Pose x;
};

/// Advances the reference by dt with semi-implicit Euler and the phase by Ω·dt.
PdmpStep step(PdmpState& state, double dt, const PdmpConfig& cfg);

}  // namespace teleteach
