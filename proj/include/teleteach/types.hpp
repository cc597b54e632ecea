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

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace teleteach {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Bad input: non-unit quaternion, non-positive step, malformed config.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Log map requested between a quaternion and its antipode.
class AntipodalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A simulated state left the admissible envelope.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Force (N) and moment (N·m), moment expressed in the body frame.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();

  static Wrench from_vec6(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }
  Vec6 as_vec6() const {
    Vec6 out;
    out << force, moment;
    return out;
  }
  Wrench operator+(const Wrench& o) const { return {force + o.force, moment + o.moment}; }
  Wrench operator*(double s) const { return {force * s, moment * s}; }
};

/// Linear velocity (m/s) and body-frame angular velocity (rad/s).
struct Twist {
  Vec3 v = Vec3::Zero();
  Vec3 omega = Vec3::Zero();

  /// Pose-rate coordinates [v; ½ω] used by the DMP and the controllers.
  Vec6 pose_rate() const {
    Vec6 out;
    out << v, 0.5 * omega;
    return out;
  }
  static Twist from_pose_rate(const Vec6& xd) { return {xd.head<3>(), 2.0 * xd.tail<3>()}; }
};

}  // namespace teleteach
