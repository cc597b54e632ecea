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

#include "teleteach/afo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace teleteach {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void AfoConfig::validate() const {
  if (harmonics < 0) throw ValidationError("afo.harmonics must be >= 0");
  if (!(k_phi >= 0.0)) throw ValidationError("afo.k_phi must be >= 0");
  if (!(k_omega >= 0.0)) throw ValidationError("afo.k_omega must be >= 0");
  if (!(k_fourier >= 0.0)) throw ValidationError("afo.k_fourier must be >= 0");
  if (!(omega_min > 0.0 && omega_max > omega_min)) {
    throw ValidationError("afo.omega_min/omega_max must satisfy 0 < min < max");
  }
  if (!(omega0 >= omega_min && omega0 <= omega_max)) {
    throw ValidationError("afo.omega0 must lie within [omega_min, omega_max]");
  }
  if (!(drive_amplitude > 0.0)) throw ValidationError("afo.drive_amplitude must be > 0");
  if (!(highpass_hz > 0.0)) throw ValidationError("afo.highpass_hz must be > 0");
  if (!(normalization_tau > 0.0)) throw ValidationError("afo.normalization_tau must be > 0");
  if (!(selection_window > 0.0)) throw ValidationError("afo.selection_window must be > 0");
  if (!(switch_ratio >= 1.0)) throw ValidationError("afo.switch_ratio must be >= 1");
  if (!(reselect_below_mu >= 0.0 && reselect_below_mu <= 1.0)) {
    throw ValidationError("afo.reselect_below_mu must lie in [0, 1]");
  }
  if (!(activity_threshold > 0.0)) throw ValidationError("afo.activity_threshold must be > 0");
  if (!(averaging_periods > 0.0)) throw ValidationError("afo.averaging_periods must be > 0");
}

AfoState AfoState::initial(const AfoConfig& cfg) {
  AfoState st;
  st.omega = cfg.omega0;
  st.alpha = Eigen::VectorXd::Zero(cfg.harmonics + 1);
  st.beta = Eigen::VectorXd::Zero(cfg.harmonics + 1);
  return st;
}

double AfoState::prediction() const {
  double y = 0.0;
  for (Eigen::Index c = 0; c < alpha.size(); ++c) {
    y += alpha[c] * std::cos(c * phi) + beta[c] * std::sin(c * phi);
  }
  return y;
}

AfoState afo_step(const AfoState& state, double y, double mu, double dt, const AfoConfig& cfg) {
  if (!(dt > 0.0)) throw ValidationError("afo_step: dt must be > 0");
  const double e = y - state.prediction();
  const double gate = 1.0 - mu;
  const double sin_phi = std::sin(state.phi);

  AfoState next = state;
  next.phi = std::fmod(state.phi + (state.omega - cfg.k_phi * e * sin_phi) * dt, kTwoPi);
  if (next.phi < 0.0) next.phi += kTwoPi;
  if (gate > 0.0) {
    next.omega = std::clamp(state.omega - gate * cfg.k_omega * e * sin_phi * dt, cfg.omega_min,
                            cfg.omega_max);
    for (Eigen::Index c = 0; c < state.alpha.size(); ++c) {
      next.alpha[c] += gate * cfg.k_fourier * std::cos(c * state.phi) * e * dt;
      next.beta[c] += gate * cfg.k_fourier * std::sin(c * state.phi) * e * dt;
    }
  }
  return next;
}

double DriveConditioner::push(double y, double amplitude, double dt) {
  if (!primed_) {
    prev_ = y;
    primed_ = true;
  }
  const double a = 1.0 / (1.0 + kTwoPi * cfg_.highpass_hz * dt);
  hp_ = a * (hp_ + y - prev_);
  prev_ = y;
  // Plain average until τ worth of samples exist, EMA afterwards.
  if (hp_ != 0.0 || count_ > 0) {
    ++count_;
    const double k = std::max(dt / cfg_.normalization_tau, 1.0 / static_cast<double>(count_));
    mean_square_ += k * (hp_ * hp_ - mean_square_);
  }
  if (mean_square_ <= 1e-12) return 0.0;
  // A sinusoid of peak a has mean square a²/2.
  return amplitude * hp_ / std::max(std::sqrt(2.0 * mean_square_), 1e-6);
}

void ActivityWindow::push(const Vec6& x, std::size_t capacity) {
  samples_.push_back(x);
  sum_ += x;
  sum_sq_ += x.cwiseProduct(x);
  while (samples_.size() > capacity) {
    const Vec6& old = samples_.front();
    sum_ -= old;
    sum_sq_ -= old.cwiseProduct(old);
    samples_.pop_front();
  }
}

Vec6 ActivityWindow::variance() const {
  if (samples_.empty()) return Vec6::Zero();
  const double n = static_cast<double>(samples_.size());
  const Vec6 mean = sum_ / n;
  return (sum_sq_ / n - mean.cwiseProduct(mean)).cwiseMax(0.0);
}

void ActivityWindow::clear() {
  samples_.clear();
  sum_.setZero();
  sum_sq_.setZero();
}

FrequencyEstimator::FrequencyEstimator(const AfoConfig& cfg) : cfg_(cfg), state_(AfoState::initial(cfg)) {
  drives_.fill(DriveConditioner(cfg));
}

void FrequencyEstimator::update(const Vec6& coords, double mu, double dt) {
  const double window = std::max(cfg_.selection_window, 2.0 * kTwoPi / state_.omega);
  const auto capacity = static_cast<std::size_t>(std::lround(window / dt));
  window_.push(coords, std::max<std::size_t>(capacity, 2));

  const double amplitude = cfg_.drive_amplitude * state_.omega;
  Vec6 conditioned;
  for (int d = 0; d < 6; ++d) conditioned[d] = drives_[d].push(coords[d], amplitude, dt);

  if (mu < cfg_.reselect_below_mu) {
    const Vec6 var = window_.variance();
    Eigen::Index best = 0;
    var.maxCoeff(&best);
    if (best != state_.input_dim && var[best] > cfg_.switch_ratio * var[state_.input_dim]) {
      state_.input_dim = static_cast<int>(best);
    }
  }
  const double drive = conditioned[state_.input_dim];
  state_ = afo_step(state_, drive, mu, dt, cfg_);
  mu_ = std::clamp(mu, 0.0, 1.0);
  if (mu >= 1.0) return;

  history_.push_back(state_.omega);
  history_sum_ += state_.omega;
  const auto span = static_cast<std::size_t>(
      std::max(1L, std::lround(cfg_.averaging_periods * kTwoPi / (state_.omega * dt))));
  while (history_.size() > span) {
    history_sum_ -= history_.front();
    history_.pop_front();
  }
}

double FrequencyEstimator::omega() const {
  return (1.0 - mu_) * state_.omega + mu_ * averaged_omega();
}

double FrequencyEstimator::averaged_omega() const {
  if (history_.empty()) return state_.omega;
  return history_sum_ / static_cast<double>(history_.size());
}

}  // namespace teleteach
