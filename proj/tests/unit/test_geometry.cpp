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

#include <doctest.h>

#include <Eigen/Geometry>

#include "support.hpp"
#include "teleteach/geometry.hpp"

using namespace teleteach;
using testing::Gen;
using testing::sign_free_distance;

namespace {

constexpr double kPi = std::numbers::pi;
const UnitQuaternion kId;
const UnitQuaternion kQx45(std::cos(kPi / 4), std::sin(kPi / 4), 0, 0);

Eigen::Quaterniond eig(const UnitQuaternion& q) { return {q.w(), q.x(), q.y(), q.z()}; }

// Body-frame half-angle vector of q0⁻¹q through Eigen's angle-axis, valid
// when the relative rotation has w >= 0.
Vec3 eigen_half_angle(const UnitQuaternion& q0, const UnitQuaternion& q) {
  const Eigen::AngleAxisd aa(eig(q0).conjugate() * eig(q));
  return 0.5 * aa.angle() * aa.axis();
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("unit quaternion construction is checked") {
    CHECK_THROWS_AS(UnitQuaternion(1.0, 0.1, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(UnitQuaternion::from_coeffs(Vec4(0, 0, 0, 0)), ValidationError);
    CHECK_THROWS_AS(UnitQuaternion::normalized(Vec4::Zero()), ValidationError);
    CHECK_NOTHROW(UnitQuaternion(1.0 + 5e-10, 0.0, 0.0, 0.0));
    const Vec4 c(0.5, 0.5, 0.5, 0.5 + 1e-10);
    CHECK(UnitQuaternion::from_coeffs(c).coeffs() == c);
  }

  TEST_CASE("hamilton product matches Eigen") {
    Gen g(1);
    for (int i = 0; i < 200; ++i) {
      const UnitQuaternion a = g.quaternion(), b = g.quaternion();
      const Eigen::Quaterniond e = eig(a) * eig(b);
      CHECK((a * b).coeffs().isApprox(Vec4(e.w(), e.x(), e.y(), e.z()), 1e-14));
    }
  }

  TEST_CASE("log map worked examples") {
    CHECK(log_map(kQx45, kQx45).v.norm() == 0.0);
    const Tangent4 d = log_map(kId, kQx45);
    CHECK(d.v.isApprox(Vec4(0, kPi / 4, 0, 0), 1e-15));
    CHECK(geodesic_distance(kId, kQx45) == doctest::Approx(kPi / 4).epsilon(1e-15));
  }

  TEST_CASE("log map of the antipode throws") {
    Gen g(2);
    const UnitQuaternion q = g.quaternion();
    CHECK_THROWS_AS(log_map(q, -q), AntipodalError);
    CHECK_NOTHROW(log_map(q, g.near(-q, 1e-6, 1e-6)));
  }

  TEST_CASE("log map agrees with Eigen angle-axis") {
    Gen g(3);
    for (int i = 0; i < 1000; ++i) {
      const UnitQuaternion q0 = g.quaternion();
      const UnitQuaternion q = g.near(q0, 0.0, kPi / 2 - 1e-3);
      const Tangent4 body = left_trivialize(q0, log_map(q0, q));
      CHECK(body.v[0] == doctest::Approx(0.0).epsilon(1e-12));
      CHECK((body.v.tail<3>() - eigen_half_angle(q0, q)).norm() < 1e-10);
    }
  }

  TEST_CASE("exp map worked examples") {
    Gen g(4);
    const UnitQuaternion q0 = g.quaternion();
    CHECK(exp_map(q0, Tangent4{Vec4::Zero(), q0}).coeffs() == q0.coeffs());
    CHECK(exp_map(kId, Tangent4{Vec4(0, kPi / 4, 0, 0), kId}).coeffs().isApprox(kQx45.coeffs(), 1e-15));
  }

  TEST_CASE("exp inverts log and preserves norm") {
    Gen g(5);
    for (int i = 0; i < 2000; ++i) {
      const UnitQuaternion q0 = g.quaternion(), q = g.quaternion();
      const Tangent4 d = log_map(q0, q);
      CHECK(d.norm() == doctest::Approx(geodesic_distance(q0, q)).epsilon(1e-9));
      const UnitQuaternion back = exp_map(q0, d);
      CHECK((back.coeffs() - q.coeffs()).norm() < 1e-9);
      CHECK(std::abs(back.coeffs().norm() - 1.0) < 1e-12);
    }
  }

  TEST_CASE("trivialization is linear and invertible") {
    Gen g(6);
    const Vec4 dq = g.vec4();
    CHECK(left_trivialize(kId, Tangent4{dq, kId}).v == dq);
    for (int i = 0; i < 1000; ++i) {
      const UnitQuaternion q0 = g.quaternion();
      const Tangent4 u = g.tangent(q0), v = g.tangent(q0);
      const double a = g.uniform(-3, 3), b = g.uniform(-3, 3);
      const Vec4 lhs = left_trivialize(q0, Tangent4{a * u.v + b * v.v, q0}).v;
      const Vec4 rhs = a * left_trivialize(q0, u).v + b * left_trivialize(q0, v).v;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((left_detrivialize(q0, left_trivialize(q0, u)).v - u.v).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("quat_error examples and norm") {
    Gen g(7);
    const UnitQuaternion q = g.quaternion();
    CHECK(quat_error(q, q).norm() == 0.0);
    CHECK(quat_error(kId, kQx45).isApprox(Vec3(kPi / 4, 0, 0), 1e-15));
    for (int i = 0; i < 1000; ++i) {
      const UnitQuaternion a = g.quaternion(), b = g.quaternion();
      CHECK(quat_error(a, b).norm() == doctest::Approx(shortest_geodesic_distance(a, b)).epsilon(1e-9));
      CHECK(quat_error(a, b).norm() <= kPi / 2 + 1e-12);
      // Sign of the representative does not matter.
      CHECK((quat_error(a, b) - quat_error(a, -b)).norm() < 1e-12);
    }
  }

  TEST_CASE("pose_diff rows point toward the reference") {
    Pose x;
    CHECK(pose_diff(x, x).isZero());
    Pose ref = x;
    ref.p = Vec3(0.1, 0, 0);
    Vec6 expect = Vec6::Zero();
    expect[0] = 0.1;
    CHECK(pose_diff(ref, x).isApprox(expect, 1e-15));
    ref = x;
    ref.q = kQx45;
    expect = Vec6::Zero();
    expect[3] = kPi / 4;
    CHECK(pose_diff(ref, x).isApprox(expect, 1e-15));
  }

  TEST_CASE("quat_derivative examples") {
    Gen g(8);
    const UnitQuaternion q = g.quaternion();
    CHECK(quat_derivative(q, q, 1e-3).norm() < 1e-12);
    CHECK(quat_derivative(kId, kQx45, 1.0).isApprox(Vec3(kPi / 2, 0, 0), 1e-15));
  }

  TEST_CASE("integrate_quat examples") {
    Gen g(9);
    const UnitQuaternion q = g.quaternion();
    CHECK(integrate_quat(q, Vec3::Zero(), 1e-3).coeffs() == q.coeffs());
    CHECK((integrate_quat(kId, Vec3(kPi, 0, 0), 1.0).coeffs() - Vec4(0, 1, 0, 0)).norm() < 1e-15);
  }

  TEST_CASE("integration flow composes") {
    Gen g(10);
    for (int i = 0; i < 20; ++i) {
      const UnitQuaternion q0 = g.quaternion();
      const Vec3 w = g.vec3(3.0);
      UnitQuaternion q = q0;
      for (int k = 0; k < 1000; ++k) q = integrate_quat(q, w, 1e-3);
      CHECK(sign_free_distance(q, integrate_quat(q0, w, 1.0)) < 1e-6);
    }
  }

  TEST_CASE("quat_derivative recovers the integrated rate") {
    Gen g(11);
    for (int i = 0; i < 2000; ++i) {
      const UnitQuaternion q = g.quaternion();
      const Vec3 w = g.vec3(10.0);
      CHECK((quat_derivative(q, integrate_quat(q, w, 1e-3), 1e-3) - w).norm() < 1e-6);
    }
  }

  TEST_CASE("rotation vectors agree with Eigen") {
    Gen g(12);
    for (int i = 0; i < 500; ++i) {
      const Vec3 r = g.vec3(3.0);
      const Eigen::Quaterniond e(Eigen::AngleAxisd(r.norm(), r.normalized()));
      const UnitQuaternion q = UnitQuaternion::from_rotation_vector(r);
      CHECK(sign_free_distance(q, UnitQuaternion(e.w(), e.x(), e.y(), e.z())) < 1e-12);
      if (r.norm() < kPi) CHECK((q.to_rotation_vector() - r).norm() < 1e-9);
    }
    CHECK(UnitQuaternion::from_rotation_vector(Vec3::Zero()).coeffs() == kId.coeffs());
  }

  TEST_CASE("right Jacobian matches finite differences") {
    Gen g(13);
    for (int i = 0; i < 200; ++i) {
      const Vec3 r = g.vec3(1.5);
      const Vec3 rd = g.vec3(1.0);
      const double h = 1e-6;
      const UnitQuaternion a = UnitQuaternion::from_rotation_vector(r - 0.5 * h * rd);
      const UnitQuaternion b = UnitQuaternion::from_rotation_vector(r + 0.5 * h * rd);
      const Vec3 numeric = quat_derivative(a, b, h);
      CHECK((so3_right_jacobian(r) * rd - numeric).norm() < 1e-6);
    }
    CHECK(so3_right_jacobian(Vec3::Zero()).isIdentity(1e-15));
  }

  TEST_CASE("geodesic distances") {
    Gen g(14);
    for (int i = 0; i < 500; ++i) {
      const UnitQuaternion a = g.quaternion(), b = g.quaternion();
      CHECK(geodesic_distance(a, b) >= 0.0);
      CHECK(geodesic_distance(a, b) <= kPi);
      CHECK(shortest_geodesic_distance(a, b) == doctest::Approx(shortest_geodesic_distance(b, a)));
      CHECK(shortest_geodesic_distance(a, -b) == doctest::Approx(shortest_geodesic_distance(a, b)));
    }
  }
}
