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

// Cartesian surrogate robot: diagonal mass and inertia, viscous damping,
// no Coriolis terms.

#pragma once

#include "teleteach/geometry.hpp"

namespace teleteach {

struct RobotParams {
  Vec3 mass = Vec3::Constant(3.0);
  Vec3 inertia = Vec3::Constant(0.05);
  Vec3 damping_trans = Vec3::Constant(2.0);
  Vec3 damping_rot = Vec3::Constant(0.05);

  /// diag(m, 2I): inertia seen by wrenches in pose-rate coordinates.
  Vec6 pose_rate_inertia() const;
  void validate(const std::string& path) const;
};

struct RobotState {
  Pose pose;
  Twist twist;
  Wrench applied;
};

/// Components beyond this magnitude abort the run.
inline constexpr double kDivergenceLimit = 1e3;

/// Semi-implicit Euler on the surrogate dynamics. `u` is the control
/// wrench, `f_h` the external one. Throws DivergenceError on blow-up.
RobotState robot_step(const RobotState& state, const Wrench& u, const Wrench& f_h,
                      const RobotParams& params, double dt);

}  // namespace teleteach
