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

// Random generators for the property tests.

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "teleteach/geometry.hpp"

namespace teleteach::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  Vec3 vec3(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)}; }
  Vec4 vec4(double scale = 1.0) {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
  }
  Vec6 vec6(double scale = 1.0) {
    Vec6 v;
    for (int i = 0; i < 6; ++i) v[i] = uniform(-scale, scale);
    return v;
  }

  /// Uniform on S³ (normalized Gaussian 4-vector).
  UnitQuaternion quaternion() {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec4 v;
    do {
      v = {n(rng_), n(rng_), n(rng_), n(rng_)};
    } while (v.norm() < 1e-6);
    return UnitQuaternion::normalized(v);
  }

  /// A quaternion at geodesic distance in [lo, hi] from q0.
  UnitQuaternion near(const UnitQuaternion& q0, double lo, double hi) {
    const Vec3 axis = vec3().normalized();
    return q0 * UnitQuaternion::from_rotation_vector(axis * 2.0 * uniform(lo, hi));
  }

  /// Tangent vector at q0 (orthogonal to q0).
  Tangent4 tangent(const UnitQuaternion& q0, double scale = 1.0) {
    const Vec4 v = vec4(scale);
    return {v - q0.coeffs() * q0.coeffs().dot(v), q0};
  }

  Pose pose(double p_scale = 0.5) { return {vec3(p_scale), quaternion()}; }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Quaternion equality up to sign.
inline double sign_free_distance(const UnitQuaternion& a, const UnitQuaternion& b) {
  return std::min((a.coeffs() - b.coeffs()).norm(), (a.coeffs() + b.coeffs()).norm());
}

}  // namespace teleteach::testing
