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

#include "teleteach/control.hpp"

#include <algorithm>
#include <cmath>

namespace teleteach {

GainSet GainSet::critical(double k_trans, double k_rot, const RobotParams& robot) {
  GainSet g;
  g.K << Vec3::Constant(k_trans), Vec3::Constant(k_rot);
  for (int i = 0; i < 3; ++i) {
    g.D[i] = 2.0 * std::sqrt(k_trans * robot.mass[i]);
    g.D[3 + i] = 2.0 * std::sqrt(k_rot * robot.inertia[i]);
  }
  return g;
}

Wrench pd_wrench(const Pose& x_a, const Vec6& xd_a, const Pose& x_b, const Vec6& xd_b,
                 const GainSet& gains) {
  return Wrench::from_vec6(gains.K.cwiseProduct(pose_diff(x_a, x_b)) +
                           gains.D.cwiseProduct(xd_a - xd_b));
}

Wrench tr_control(const Pose& x_p, const Vec6& xd_p, const RobotState& tr, const GainSet& gains) {
  return pd_wrench(x_p, xd_p, tr.pose, tr.twist.pose_rate(), gains);
}

PrCommand pr_control(const RobotState& pr, const Pose& x_th, const Vec6& xd_th, const Pose& x_ref,
                     const Vec6& xd_ref, const Vec6& xdd_ref, double eta, const GainSet& follow,
                     const GainSet& impedance, const Vec6& inertia) {
  PrCommand out;
  const Vec6 xd_p = pr.twist.pose_rate();
  out.kp = eta * impedance.K;
  out.dp = eta * impedance.D;
  out.u_imp = Wrench::from_vec6(inertia.cwiseProduct(xdd_ref)) +
              pd_wrench(x_ref, xd_ref, pr.pose, xd_p, GainSet{out.kp, out.dp});
  out.u_thp = pd_wrench(x_th, xd_th, pr.pose, xd_p, follow);
  out.u_p = out.u_imp * eta + out.u_thp * (1.0 - eta);
  return out;
}

Wrench human_arm_wrench(const Pose& x_demo, const Vec6& xd_demo, const RobotState& tr,
                        const GainSet& arm, const ArmConfig& cfg, const Wrench& push) {
  Wrench w = pd_wrench(x_demo, xd_demo, tr.pose, tr.twist.pose_rate(), arm) + push;
  w.force = w.force.cwiseMax(-cfg.force_max).cwiseMin(cfg.force_max);
  w.moment = w.moment.cwiseMax(-cfg.moment_max).cwiseMin(cfg.moment_max);
  return w;
}

Channel::Channel(int delay_ticks, double drop_probability, std::uint64_t seed,
                 const RobotSnapshot& initial)
    : delay_(delay_ticks), drop_(drop_probability), rng_(seed), held_(initial) {
  if (delay_ticks < 0) throw ValidationError("channel.delay_ticks must be >= 0");
  if (!(drop_probability >= 0.0 && drop_probability < 1.0)) {
    throw ValidationError("channel.drop_probability must lie in [0, 1)");
  }
}

const RobotSnapshot& Channel::exchange(const RobotSnapshot& sent) {
  in_flight_.push_back(sent);
  if (static_cast<int>(in_flight_.size()) > delay_) {
    // 53 random bits mapped to [0, 1); identical on every platform.
    const bool dropped = drop_ > 0.0 && static_cast<double>(rng_() >> 11) * 0x1.0p-53 < drop_;
    if (!dropped) held_ = in_flight_.front();
    in_flight_.pop_front();
  }
  return held_;
}

}  // namespace teleteach
