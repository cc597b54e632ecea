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

#include "teleteach/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace teleteach {

namespace {

constexpr double kAntipodalTolerance = 1e-9;
constexpr double kTangentTolerance = 1e-6;

std::string describe(const Vec4& q) {
  std::ostringstream os;
  os << "(" << q[0] << ", " << q[1] << ", " << q[2] << ", " << q[3] << ")";
  return os.str();
}

// Returns q or −q, whichever lies in the hemisphere of ref.
Vec4 align_to(const Vec4& ref, const Vec4& q) { return ref.dot(q) < 0.0 ? Vec4(-q) : q; }

// Raw S³ logarithm. The ratio d/‖v‖ is evaluated through atan2 so it stays
// bounded (→ 1) as the two points approach each other; only an exact
// coincidence returns the zero vector.
Vec4 raw_log(const Vec4& q0, const Vec4& q) {
  const double c = std::clamp(q0.dot(q), -1.0, 1.0);
  Vec4 v = q - c * q0;
  v -= v.dot(q0) * q0;
  const double s = v.norm();
  const double d = std::atan2(s, c);
  if (std::abs(d - std::numbers::pi) <= kAntipodalTolerance) {
    throw AntipodalError("log_map: antipodal pair " + describe(q0) + " / " + describe(q) +
                         " has no unique geodesic");
  }
  if (s == 0.0) return Vec4::Zero();
  return v * (d / s);
}

}  // namespace

Vec4 hamilton(const Vec4& a, const Vec4& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z)
    : q_(from_coeffs(Vec4(w, x, y, z)).coeffs().normalized()) {}

UnitQuaternion UnitQuaternion::from_coeffs(const Vec4& coeffs) {
  const double n = coeffs.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitTolerance) {
    throw ValidationError("quaternion " + describe(coeffs) + " is not unit-norm");
  }
  return {coeffs, Unchecked{}};
}

UnitQuaternion UnitQuaternion::normalized(const Vec4& coeffs) {
  const double n = coeffs.norm();
  if (!std::isfinite(n) || n < 1e-12) {
    throw ValidationError("cannot normalize quaternion " + describe(coeffs));
  }
  return {coeffs / n, Unchecked{}};
}

UnitQuaternion UnitQuaternion::from_rotation_vector(const Vec3& r) {
  const double half = 0.5 * r.norm();
  // sin(half)/|r| written as ½·sinc(half) to stay finite at r = 0.
  const double k = half < 1e-8 ? 0.5 * (1.0 - half * half / 6.0) : std::sin(half) / r.norm();
  Vec4 q;
  q << std::cos(half), k * r;
  return normalized(q);
}

UnitQuaternion UnitQuaternion::inverse() const {
  return {Vec4(q_[0], -q_[1], -q_[2], -q_[3]), Unchecked{}};
}

UnitQuaternion UnitQuaternion::operator-() const { return {Vec4(-q_), Unchecked{}}; }

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& rhs) const {
  return normalized(hamilton(q_, rhs.q_));
}

Vec3 UnitQuaternion::to_rotation_vector() const {
  const Vec4 q = q_[0] < 0.0 ? Vec4(-q_) : q_;
  const double s = q.tail<3>().norm();
  if (s == 0.0) return Vec3::Zero();
  const double angle = 2.0 * std::atan2(s, q[0]);
  return q.tail<3>() * (angle / s);
}

double geodesic_distance(const UnitQuaternion& q0, const UnitQuaternion& q) {
  return std::acos(std::clamp(q0.dot(q), -1.0, 1.0));
}

double shortest_geodesic_distance(const UnitQuaternion& q0, const UnitQuaternion& q) {
  return std::acos(std::clamp(std::abs(q0.dot(q)), 0.0, 1.0));
}

Tangent4 log_map(const UnitQuaternion& q0, const UnitQuaternion& q) {
  return {raw_log(q0.coeffs(), q.coeffs()), q0};
}

UnitQuaternion exp_map(const UnitQuaternion& q0, const Tangent4& dq) {
  const double n = dq.v.norm();
  if (!std::isfinite(n)) throw ValidationError("exp_map: non-finite tangent vector");
  if (std::abs(q0.coeffs().dot(dq.v)) > kTangentTolerance) {
    throw ValidationError("exp_map: tangent vector is not orthogonal to its base");
  }
  if (n == 0.0) return q0;
  const double sinc = n < 1e-8 ? 1.0 - n * n / 6.0 : std::sin(n) / n;
  return UnitQuaternion::normalized(q0.coeffs() * std::cos(n) + dq.v * sinc);
}

Tangent4 left_trivialize(const UnitQuaternion& q0, const Tangent4& dq) {
  return {hamilton(q0.inverse().coeffs(), dq.v), UnitQuaternion::identity()};
}

Tangent4 left_detrivialize(const UnitQuaternion& q0, const Tangent4& body) {
  return {hamilton(q0.coeffs(), body.v), q0};
}

Vec3 quat_error(const UnitQuaternion& q_ref, const UnitQuaternion& q) {
  const Vec4 aligned = align_to(q_ref.coeffs(), q.coeffs());
  const Vec4 dq = raw_log(q_ref.coeffs(), aligned);
  return hamilton(q_ref.inverse().coeffs(), dq).tail<3>();
}

Vec6 pose_diff(const Pose& x_ref, const Pose& x) {
  Vec6 out;
  out << x_ref.p - x.p, quat_error(x.q, x_ref.q);
  return out;
}

Vec3 quat_derivative(const UnitQuaternion& q_t, const UnitQuaternion& q_next, double dt) {
  if (!(dt > 0.0)) throw ValidationError("quat_derivative: dt must be positive");
  return 2.0 * quat_error(q_t, q_next) / dt;
}

UnitQuaternion integrate_quat(const UnitQuaternion& q_t, const Vec3& omega, double dt) {
  if (!(dt > 0.0)) throw ValidationError("integrate_quat: dt must be positive");
  const Vec3 half = 0.5 * omega * dt;
  const double n = half.norm();
  const double sinc = n < 1e-8 ? 1.0 - n * n / 6.0 : std::sin(n) / n;
  Vec4 step;
  step << std::cos(n), sinc * half;
  return UnitQuaternion::normalized(hamilton(q_t.coeffs(), step));
}

Eigen::Matrix3d so3_right_jacobian(const Vec3& r) {
  const double theta = r.norm();
  Eigen::Matrix3d k;
  k << 0.0, -r.z(), r.y(), r.z(), 0.0, -r.x(), -r.y(), r.x(), 0.0;
  if (theta < 1e-6) {
    return Eigen::Matrix3d::Identity() - 0.5 * k + k * k / 6.0;
  }
  const double t2 = theta * theta;
  return Eigen::Matrix3d::Identity() - (1.0 - std::cos(theta)) / t2 * k +
         (theta - std::sin(theta)) / (t2 * theta) * k * k;
}

}  // namespace teleteach
