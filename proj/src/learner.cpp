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

#include "teleteach/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "teleteach/autonomy.hpp"

namespace teleteach {

Butterworth2::Butterworth2(double cutoff_hz, double sample_hz) {
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * sample_hz)) {
    throw ValidationError("low-pass cutoff must lie in (0, Nyquist)");
  }
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_hz);
  const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * k + k * k);
  b0_ = k * k * norm;
  b1_ = 2.0 * b0_;
  b2_ = b0_;
  a1_ = 2.0 * (k * k - 1.0) * norm;
  a2_ = (1.0 - std::numbers::sqrt2 * k + k * k) * norm;
}

Vec6 Butterworth2::push(const Vec6& x) {
  if (!primed_) {
    x1_ = x2_ = y1_ = y2_ = x;
    primed_ = true;
  }
  const Vec6 y = b0_ * x + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
  x2_ = x1_;
  x1_ = x;
  y2_ = y1_;
  y1_ = y;
  return y;
}

DemoDifferentiator::DemoDifferentiator(double cutoff_hz, double dt)
    : dt_(dt), lp_v_(cutoff_hz, 1.0 / dt), lp_a_(cutoff_hz, 1.0 / dt) {}

DemoSample DemoDifferentiator::push(const Pose& x) {
  DemoSample out;
  out.x = x;
  const Vec6 v_raw = prev_ ? Vec6(pose_diff(x, *prev_) / dt_) : Vec6::Zero();
  const Vec6 v = lp_v_.push(v_raw);
  const Vec6 a_raw = prev_ ? Vec6((v - prev_v_) / dt_) : Vec6::Zero();
  out.xd = v;
  out.xdd = lp_a_.push(a_raw);
  prev_ = x;
  prev_v_ = v;
  return out;
}

void DemoDifferentiator::reset() {
  prev_.reset();
  prev_v_.setZero();
  lp_v_.reset();
  lp_a_.reset();
}

Vec4 GoalEstimator::aligned(const UnitQuaternion& q) const {
  return anchor_->dot(q) < 0.0 ? Vec4(-q.coeffs()) : q.coeffs();
}

void GoalEstimator::push(const Pose& x, std::size_t window) {
  if (!anchor_) anchor_ = x.q;
  samples_.push_back(x);
  sum_p_ += x.p;
  sum_q_ += aligned(x.q);
  window = std::max<std::size_t>(window, 1);
  while (samples_.size() > window) {
    sum_p_ -= samples_.front().p;
    sum_q_ -= aligned(samples_.front().q);
    samples_.pop_front();
  }
}

Pose GoalEstimator::goal() const {
  if (samples_.empty()) return {};
  return {sum_p_ / static_cast<double>(samples_.size()), UnitQuaternion::normalized(sum_q_)};
}

void GoalEstimator::clear() {
  samples_.clear();
  anchor_.reset();
  sum_p_.setZero();
  sum_q_.setZero();
}

Vec6 pose_coordinates(const Pose& x, const Pose& anchor) {
  Vec6 out;
  out << x.p, quat_error(anchor.q, x.q);
  return out;
}

SkillLearner::SkillLearner(const PdmpConfig& dmp, const AfoConfig& afo)
    : dmp_cfg_(dmp), afo_cfg_(afo), afo_(afo), dmp_(PdmpState::initial(dmp, afo.omega0, Pose{})) {
  dmp_cfg_.validate();
  afo_cfg_.validate();
}

void SkillLearner::fix_frequency(double omega) {
  if (!(omega > 0.0)) throw ValidationError("fixed frequency must be > 0");
  fixed_omega_ = omega;
  dmp_.omega = omega;
}

double SkillLearner::omega() const { return fixed_omega_ ? *fixed_omega_ : afo_.omega(); }

void SkillLearner::learn(const Pose& demo, const Pose& drive, const Pose& hold, double mu, double dt) {
  if (!(dt > 0.0)) throw ValidationError("learning step must be > 0");
  if (dt != dt_learn_) {
    diff_ = DemoDifferentiator(dmp_cfg_.derivative_cutoff_hz, dt);
    dt_learn_ = dt;
  }
  if (!anchor_) anchor_ = demo;

  if (!fixed_omega_) afo_.update(pose_coordinates(drive, *anchor_), mu, dt);
  const DemoSample sample = diff_.push(demo);

  if (!armed_) {
    bool start = fixed_omega_.has_value();
    if (!start) {
      const auto capacity = static_cast<std::size_t>(std::lround(afo_cfg_.selection_window / dt));
      activity_.push(pose_coordinates(demo, *anchor_), capacity);
      start = activity_.full(capacity) &&
              activity_.variance().maxCoeff() > afo_cfg_.activity_threshold * afo_cfg_.activity_threshold;
    }
    if (!start) return;
    dmp_ = PdmpState::initial(dmp_cfg_, omega(), hold);
    goal_.clear();
    armed_ = true;
  }

  dmp_.omega = omega();
  if (mu_is_one(mu)) {
    reached_one_ = true;
  } else if (reached_one_ && mu < dmp_cfg_.reset_threshold) {
    reached_one_ = false;
    if (dmp_cfg_.reset_gain_on_relearn) dmp_.reset_gains(dmp_cfg_);
    afo_.clear_selection();
  }

  if (!mu_is_one(mu)) {
    const auto window = static_cast<std::size_t>(
        std::lround(2.0 * std::numbers::pi / (dmp_.omega * dt)));
    goal_.push(demo, window);
    dmp_.goal = goal_.goal();
  }

  const Vec6 gamma_d = target_forcing(sample.x, sample.xd, sample.xdd, dmp_.goal, dmp_.omega, dmp_cfg_);
  rls_update(dmp_, gamma_d, mu, dmp_cfg_);
  last_target_ = gamma_d;
}

PdmpStep SkillLearner::generate(const Pose& hold, double dt) {
  if (!armed_) {
    dmp_.x_ref = hold;
    dmp_.xd_ref.setZero();
    return {Vec6::Zero(), Vec6::Zero(), hold};
  }
  return step(dmp_, dt, dmp_cfg_);
}

void SkillLearner::reset() {
  SkillLearner fresh(dmp_cfg_, afo_cfg_);
  if (fixed_omega_) fresh.fix_frequency(*fixed_omega_);
  *this = std::move(fresh);
}

}  // namespace teleteach
