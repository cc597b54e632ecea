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

// Online skill learning: demonstration derivatives, goal anchoring, AFO and
// RLS glued together at the learning rate, DMP reproduction at the control
// rate.

#pragma once

#include <deque>
#include <optional>

#include "teleteach/afo.hpp"
#include "teleteach/pdmp.hpp"

namespace teleteach {

/// Second-order Butterworth low-pass (bilinear, prewarped) on six channels.
class Butterworth2 {
 public:
  Butterworth2() = default;
  Butterworth2(double cutoff_hz, double sample_hz);

  Vec6 push(const Vec6& x);
  void reset() { primed_ = false; }

 private:
  double b0_ = 1.0, b1_ = 0.0, b2_ = 0.0, a1_ = 0.0, a2_ = 0.0;
  bool primed_ = false;
  Vec6 x1_, x2_, y1_, y2_;
};

struct DemoSample {
  Pose x;
  Vec6 xd = Vec6::Zero();
  Vec6 xdd = Vec6::Zero();
};

/// Finite differences of a pose stream, each derivative low-passed.
class DemoDifferentiator {
 public:
  DemoDifferentiator() = default;
  DemoDifferentiator(double cutoff_hz, double dt);

  DemoSample push(const Pose& x);
  void reset();

 private:
  double dt_ = 1.0;
  std::optional<Pose> prev_;
  Vec6 prev_v_ = Vec6::Zero();
  Butterworth2 lp_v_, lp_a_;
};

/// Running mean of the demonstration over the most recent period:
/// arithmetic on translation, normalized sign-aligned sum on orientation.
class GoalEstimator {
 public:
  void push(const Pose& x, std::size_t window);
  Pose goal() const;
  bool empty() const { return samples_.empty(); }
  void clear();

 private:
  std::deque<Pose> samples_;
  std::optional<UnitQuaternion> anchor_;
  Vec3 sum_p_ = Vec3::Zero();
  Vec4 sum_q_ = Vec4::Zero();

  Vec4 aligned(const UnitQuaternion& q) const;
};

/// Pose in six coordinates relative to an anchor: [p; quat_error(anchor, q)].
Vec6 pose_coordinates(const Pose& x, const Pose& anchor);

class SkillLearner {
 public:
  SkillLearner() = default;
  SkillLearner(const PdmpConfig& dmp, const AfoConfig& afo);

  /// Bypasses the oscillator and arms on the first sample.
  void fix_frequency(double omega);

  /// One learning tick. `demo` feeds target forcing, `drive` feeds the
  /// frequency estimator. `hold` seeds the reference on arming.
  void learn(const Pose& demo, const Pose& drive, const Pose& hold, double mu, double dt);

  /// One reference tick. Before arming the reference rests on `hold`.
  PdmpStep generate(const Pose& hold, double dt);

  void reset();

  bool armed() const { return armed_; }
  double omega() const;
  const PdmpState& dmp() const { return dmp_; }
  const PdmpConfig& dmp_config() const { return dmp_cfg_; }
  const FrequencyEstimator& frequency() const { return afo_; }
  const std::optional<Vec6>& last_target() const { return last_target_; }

 private:
  PdmpConfig dmp_cfg_;
  AfoConfig afo_cfg_;
  FrequencyEstimator afo_;
  std::optional<double> fixed_omega_;

  PdmpState dmp_;
  DemoDifferentiator diff_;
  GoalEstimator goal_;
  ActivityWindow activity_;
  std::optional<Pose> anchor_;
  bool armed_ = false;
  bool reached_one_ = false;
  std::optional<Vec6> last_target_;
  double dt_learn_ = 0.0;
};

}  // namespace teleteach
