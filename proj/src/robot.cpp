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

#include "teleteach/robot.hpp"

#include <cmath>
#include <sstream>

namespace teleteach {

namespace {

void guard(const char* name, const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(v[i]) || std::abs(v[i]) > kDivergenceLimit) {
      std::ostringstream os;
      os << "divergence: " << name << "[" << i << "] = " << v[i] << " exceeds " << kDivergenceLimit;
      throw DivergenceError(os.str());
    }
  }
}

}  // namespace

Vec6 RobotParams::pose_rate_inertia() const {
  Vec6 m;
  m << mass, 2.0 * inertia;
  return m;
}

void RobotParams::validate(const std::string& path) const {
  if (!(mass.array() > 0.0).all()) throw ValidationError(path + ".mass entries must be > 0");
  if (!(inertia.array() > 0.0).all()) throw ValidationError(path + ".inertia entries must be > 0");
  if (!(damping_trans.array() >= 0.0).all()) {
    throw ValidationError(path + ".damping_trans entries must be >= 0");
  }
  if (!(damping_rot.array() >= 0.0).all()) {
    throw ValidationError(path + ".damping_rot entries must be >= 0");
  }
}

RobotState robot_step(const RobotState& state, const Wrench& u, const Wrench& f_h,
                      const RobotParams& params, double dt) {
  if (!(dt > 0.0)) throw ValidationError("robot_step: dt must be > 0");
  RobotState next = state;
  const Vec3 force = u.force + f_h.force - params.damping_trans.cwiseProduct(state.twist.v);
  const Vec3 moment = u.moment + f_h.moment - params.damping_rot.cwiseProduct(state.twist.omega);
  next.twist.v += force.cwiseQuotient(params.mass) * dt;
  next.twist.omega += moment.cwiseQuotient(params.inertia) * dt;
  next.pose.p += next.twist.v * dt;
  guard("v", next.twist.v);
  guard("omega", next.twist.omega);
  guard("p", next.pose.p);
  next.pose.q = integrate_quat(state.pose.q, next.twist.omega, dt);
  next.applied = f_h;
  return next;
}

}  // namespace teleteach
