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

// Adaptive frequency oscillator: a phase oscillator with an adaptive
// Fourier series that entrains Ω to the fundamental of a scalar drive.

#pragma once

#include <array>
#include <deque>

#include "teleteach/geometry.hpp"

namespace teleteach {

struct AfoConfig {
  int harmonics = 5;
  double k_phi = 20.0;
  double k_omega = 10.0;
  double k_fourier = 0.3;
  double omega0 = 3.141592653589793;
  double omega_min = 0.1;
  double omega_max = 20.0;

  // Drive conditioning ahead of afo_step. The conditioned peak amplitude is
  // drive_amplitude·Ω, so the loop bandwidth tracks the estimate.
  double drive_amplitude = 0.05;
  double highpass_hz = 0.05;
  double normalization_tau = 5.0;

  // Input selection and learning arm.
  double selection_window = 2.0;
  double switch_ratio = 1.2;
  double reselect_below_mu = 0.1;
  double activity_threshold = 0.005;

  double averaging_periods = 1.0;

  void validate() const;
};

struct AfoState {
  double phi = 0.0;
  double omega = 0.0;
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  int input_dim = 0;

  static AfoState initial(const AfoConfig& cfg);
  /// Σ αc cos(cφ) + βc sin(cφ).
  double prediction() const;
};

/// One explicit Euler step. Adaptation of Ω and the Fourier coefficients is
/// scaled by (1 − μ). The phase keeps advancing, coupled to the error.
AfoState afo_step(const AfoState& state, double y, double mu, double dt, const AfoConfig& cfg);

/// First-order high-pass followed by RMS normalization to a fixed
/// amplitude, so the oscillator sees a zero-mean drive of known scale.
class DriveConditioner {
 public:
  DriveConditioner() = default;
  explicit DriveConditioner(const AfoConfig& cfg) : cfg_(cfg) {}

  /// Returns the conditioned sample scaled to peak amplitude `amplitude`.
  double push(double y, double amplitude, double dt);
  void reset() { *this = DriveConditioner(cfg_); }

 private:
  AfoConfig cfg_;
  bool primed_ = false;
  double prev_ = 0.0;
  double hp_ = 0.0;
  double mean_square_ = 0.0;
  long count_ = 0;
};

/// Sliding-window statistics over the six pose coordinates.
class ActivityWindow {
 public:
  void push(const Vec6& x, std::size_t capacity);
  Vec6 variance() const;
  bool full(std::size_t capacity) const { return samples_.size() >= capacity; }
  void clear();

 private:
  std::deque<Vec6> samples_;
  Vec6 sum_ = Vec6::Zero();
  Vec6 sum_sq_ = Vec6::Zero();
};

/// AFO plus per-dimension drive conditioning and input selection. Fed the
/// six pose coordinates at the learning rate.
class FrequencyEstimator {
 public:
  FrequencyEstimator() = default;
  explicit FrequencyEstimator(const AfoConfig& cfg);

  void update(const Vec6& coords, double mu, double dt);
  const AfoState& state() const { return state_; }
  /// (1 − μ)·Ω + μ·Ω̄, where Ω̄ is Ω averaged over averaging_periods of
  /// its own periods. Held constant while μ = 1.
  double omega() const;
  double averaged_omega() const;
  int input_dim() const { return state_.input_dim; }
  /// Forgets the selection statistics, e.g. when a new skill is taught.
  void clear_selection() { window_.clear(); }

 private:
  AfoConfig cfg_;
  AfoState state_;
  std::array<DriveConditioner, 6> drives_;
  ActivityWindow window_;
  std::deque<double> history_;
  double history_sum_ = 0.0;
  double mu_ = 0.0;
};

}  // namespace teleteach
