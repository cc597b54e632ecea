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

#include "teleteach/autonomy.hpp"

#include <algorithm>
#include <cmath>

namespace teleteach {

namespace {

double pow4(double x) {
  const double x2 = x * x;
  return x2 * x2;
}

}  // namespace

void AllocationConfig::validate() const {
  if (!(rho > 0.0)) throw ValidationError("autonomy.rho must be > 0");
  if (!(epsilon > 0.0)) throw ValidationError("autonomy.epsilon must be > 0");
  if (!(lambda_err > 0.0)) throw ValidationError("autonomy.lambda_err must be > 0");
  if (!(lambda_f > 0.0)) throw ValidationError("autonomy.lambda_f must be > 0");
  if (!(lambda_m > 0.0)) throw ValidationError("autonomy.lambda_m must be > 0");
  if (!(error_weights.array() >= 0.0).all()) {
    throw ValidationError("autonomy.error_weights entries must be >= 0");
  }
}

double weighted_error_norm(const Vec6& diff, const AllocationConfig& cfg) {
  return diff.cwiseProduct(cfg.error_weights).norm();
}

double skill_confidence(double err_norm, const AllocationConfig& cfg) {
  return pow4(err_norm / cfg.lambda_err);
}

double intervention_index(const Wrench& w, const AllocationConfig& cfg) {
  return pow4(w.force.norm() / cfg.lambda_f) + pow4(w.moment.norm() / cfg.lambda_m);
}

double mu_rate(double mu, double i_s, const AllocationConfig& cfg) {
  const double r = (mu / cfg.rho + cfg.epsilon) * (1.0 - i_s);
  if (mu <= 0.0) return std::max(r, 0.0);
  if (mu >= 1.0) return std::min(r, 0.0);
  return r;
}

double eta_rate(double eta, double mu, double i_h, const AllocationConfig& cfg) {
  const double r = (eta / cfg.rho + cfg.epsilon) * (1.0 - i_h);
  const double gate = mu_is_one(mu) ? 1.0 : 0.0;
  const double up = std::max(r, 0.0);
  const double down = std::min(r, 0.0);
  if (eta <= 0.0) return std::max(r * gate, 0.0);
  if (eta >= 1.0) return std::min(r, 0.0);
  return down + up * gate;
}

double mu_step(double mu, double i_s, double dt, const AllocationConfig& cfg) {
  if (!(dt > 0.0)) throw ValidationError("mu_step: dt must be > 0");
  return std::clamp(mu + mu_rate(mu, i_s, cfg) * dt, 0.0, 1.0);
}

double eta_step(double eta, double mu, double i_h, double dt, const AllocationConfig& cfg) {
  if (!(dt > 0.0)) throw ValidationError("eta_step: dt must be > 0");
  return std::clamp(eta + eta_rate(eta, mu, i_h, cfg) * dt, 0.0, 1.0);
}

}  // namespace teleteach
