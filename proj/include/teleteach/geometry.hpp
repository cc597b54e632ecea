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

// Unit-quaternion geometry on S³.
//
// Quaternions are scalar-first (w, x, y, z) everywhere, in memory and on
// disk. Nothing in here canonicalizes the sign of a quaternion silently:
// log_map/exp_map work on the raw sphere, while quat_error, pose_diff and
// quat_derivative pick the shortest arc by flipping the second argument
// when the two quaternions sit in opposite hemispheres.

#pragma once

#include "teleteach/types.hpp"

namespace teleteach {

/// Hamilton product of two arbitrary 4-vectors in (w, x, y, z) order.
Vec4 hamilton(const Vec4& a, const Vec4& b);

class UnitQuaternion {
 public:
  /// Tolerance applied when validating user-supplied components.
  static constexpr double kUnitTolerance = 1e-9;

  UnitQuaternion() : q_(1.0, 0.0, 0.0, 0.0) {}

  /// Throws ValidationError unless |‖q‖ − 1| ≤ kUnitTolerance. The stored
  /// value is renormalized so the invariant holds to rounding.
  UnitQuaternion(double w, double x, double y, double z);

  /// Normalizes an arbitrary non-zero 4-vector.
  static UnitQuaternion normalized(const Vec4& coeffs);
  /// Checked construction; the coefficients are kept exactly as given.
  static UnitQuaternion from_coeffs(const Vec4& coeffs);
  /// Rotation by |r| radians about r/|r|.
  static UnitQuaternion from_rotation_vector(const Vec3& r);
  static UnitQuaternion identity() { return {}; }

  double w() const { return q_[0]; }
  double x() const { return q_[1]; }
  double y() const { return q_[2]; }
  double z() const { return q_[3]; }
  const Vec4& coeffs() const { return q_; }
  Vec3 vec() const { return q_.tail<3>(); }

  UnitQuaternion inverse() const;
  UnitQuaternion operator-() const;
  UnitQuaternion operator*(const UnitQuaternion& rhs) const;
  double dot(const UnitQuaternion& rhs) const { return q_.dot(rhs.q_); }

  /// Full-angle rotation vector, shortest representative.
  Vec3 to_rotation_vector() const;

 private:
  struct Unchecked {};
  UnitQuaternion(const Vec4& q, Unchecked) : q_(q) {}

  Vec4 q_;
};

/// Tangent vector on S³ together with the point it is attached to.
/// A base of identity means the body frame.
struct Tangent4 {
  Vec4 v = Vec4::Zero();
  UnitQuaternion base;

  bool at_identity() const { return base.coeffs() == UnitQuaternion().coeffs(); }
  double norm() const { return v.norm(); }
};

/// R³ × S³ pose.
struct Pose {
  Vec3 p = Vec3::Zero();
  UnitQuaternion q;
};

/// Arc length arccos(Q0ᵀQ) on the raw sphere, in [0, π].
double geodesic_distance(const UnitQuaternion& q0, const UnitQuaternion& q);
/// Arc length after the shortest-arc flip, in [0, π/2]. Symmetric.
double shortest_geodesic_distance(const UnitQuaternion& q0, const UnitQuaternion& q);

/// Logarithmic map at q0. Throws AntipodalError when q = −q0 (within 1e-9
/// of geodesic distance π), where the geodesic direction is undefined.
Tangent4 log_map(const UnitQuaternion& q0, const UnitQuaternion& q);

/// Exponential map at q0. dq must be orthogonal to q0 within 1e-6.
UnitQuaternion exp_map(const UnitQuaternion& q0, const Tangent4& dq);

/// Maps T_{q0}S³ to the body frame: q0⁻¹ ⊗ dq.
Tangent4 left_trivialize(const UnitQuaternion& q0, const Tangent4& dq);
/// Inverse of left_trivialize: q0 ⊗ dq.
Tangent4 left_detrivialize(const UnitQuaternion& q0, const Tangent4& body);

/// vec(q_ref⁻¹ ⊗ Log_{q_ref}(q)) after the shortest-arc flip of q. Its norm
/// is the shortest geodesic distance; it points from q_ref toward q.
Vec3 quat_error(const UnitQuaternion& q_ref, const UnitQuaternion& q);

/// x_ref ⊖ x = [p_ref − p; e], where e = quat_error(q, q_ref) is the body-
/// frame displacement from the current orientation toward the reference, so
/// both blocks point from x to x_ref.
Vec6 pose_diff(const Pose& x_ref, const Pose& x);

/// Body-frame angular velocity taking q_t to q_next in dt seconds:
/// ω = 2·vec(q_t⁻¹ ⊗ Log_{q_t}(q_next))/dt.
Vec3 quat_derivative(const UnitQuaternion& q_t, const UnitQuaternion& q_next, double dt);

/// q_t ⊗ Exp_1(½[0, ω]dt), renormalized.
UnitQuaternion integrate_quat(const UnitQuaternion& q_t, const Vec3& omega, double dt);

/// Right Jacobian of SO(3) at rotation vector r: maps ṙ to the body-frame
/// angular velocity of from_rotation_vector(r).
Eigen::Matrix3d so3_right_jacobian(const Vec3& r);

}  // namespace teleteach
