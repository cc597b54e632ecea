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

#include "teleteach/pdmp.hpp"

#include <cmath>
#include <numbers>

namespace teleteach {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_basis(const BasisConfig& b, const char* name) {
  if (b.count < 2) throw ValidationError(std::string("dmp.") + name + ".count must be >= 2");
  if (!(b.width > 0.0)) throw ValidationError(std::string("dmp.") + name + ".width must be > 0");
}

}  // namespace

void PdmpConfig::validate() const {
  check_basis(translation, "translation");
  check_basis(rotation, "rotation");
  if (!(alpha_z > 0.0)) throw ValidationError("dmp.alpha_z must be > 0");
  if (!(beta_z > 0.0)) throw ValidationError("dmp.beta_z must be > 0");
  if (!(forgetting > 0.9 && forgetting <= 1.0)) {
    throw ValidationError("dmp.lambda_fg must lie in (0.9, 1]");
  }
  if (!(initial_gain > 0.0)) throw ValidationError("dmp.initial_gain must be > 0");
  if (!(reset_threshold > 0.0 && reset_threshold < 1.0)) {
    throw ValidationError("dmp.reset_threshold must lie in (0, 1)");
  }
  if (!(derivative_cutoff_hz > 0.0)) throw ValidationError("dmp.derivative_cutoff_hz must be > 0");
}

Eigen::VectorXd basis_activations(double s, const BasisConfig& basis) {
  Eigen::VectorXd psi(basis.count);
  for (int i = 0; i < basis.count; ++i) {
    const double c = kTwoPi * i / basis.count;
    psi[i] = std::exp(basis.width * (std::cos(s - c) - 1.0));
  }
  return psi;
}

PdmpState PdmpState::initial(const PdmpConfig& cfg, double omega, const Pose& start) {
  if (!(omega > 0.0)) throw ValidationError("DMP frequency must be > 0");
  PdmpState st;
  st.omega = omega;
  for (int d = 0; d < 6; ++d) st.w[d] = Eigen::VectorXd::Zero(cfg.basis_for(d).count);
  st.reset_gains(cfg);
  st.x_ref = start;
  st.goal = start;
  return st;
}

void PdmpState::reset_gains(const PdmpConfig& cfg) {
  for (int d = 0; d < 6; ++d) p[d] = Eigen::VectorXd::Constant(cfg.basis_for(d).count, cfg.initial_gain);
}

Vec6 forcing(double s, const PdmpState& state, const PdmpConfig& cfg) {
  const Eigen::VectorXd psi_t = basis_activations(s, cfg.translation);
  const Eigen::VectorXd psi_r = basis_activations(s, cfg.rotation);
  Vec6 gamma;
  for (int d = 0; d < 6; ++d) {
    const Eigen::VectorXd& psi = d < 3 ? psi_t : psi_r;
    gamma[d] = PdmpConfig::kAmplitude * psi.dot(state.w[d]) / psi.sum();
  }
  return gamma;
}

Vec6 target_forcing(const Pose& x_d, const Vec6& xd_d, const Vec6& xdd_d, const Pose& goal,
                    double omega, const PdmpConfig& cfg) {
  if (!(omega > 0.0)) throw ValidationError("target_forcing: frequency must be > 0");
  return xdd_d / (omega * omega) -
         cfg.alpha_z * (cfg.beta_z * pose_diff(goal, x_d) - xd_d / omega);
}

void rls_update(PdmpState& state, const Vec6& gamma_d, double mu, const PdmpConfig& cfg) {
  constexpr double r = PdmpConfig::kAmplitude;
  const double lambda = cfg.forgetting;
  const Eigen::VectorXd psi_t = basis_activations(state.s, cfg.translation);
  const Eigen::VectorXd psi_r = basis_activations(state.s, cfg.rotation);
  const bool frozen = mu >= 1.0;
  for (int d = 0; d < 6; ++d) {
    const Eigen::VectorXd& psi = d < 3 ? psi_t : psi_r;
    Eigen::VectorXd& w = state.w[d];
    Eigen::VectorXd& p = state.p[d];
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      // P − P²r²/(λ/ψ + Pr²), divided by λ, rearranged to stay finite as ψ → 0.
      p[i] = p[i] / (lambda + psi[i] * p[i] * r * r);
      if (!frozen) {
        const double e = (1.0 - mu) * (gamma_d[d] - w[i]);
        w[i] += psi[i] * e * p[i] * r;
      }
    }
  }
}

PdmpStep step(PdmpState& state, double dt, const PdmpConfig& cfg) {
  if (!(dt > 0.0)) throw ValidationError("DMP step: dt must be > 0");
  const double om = state.omega;
  const Vec6 gamma = forcing(state.s, state, cfg);
  PdmpStep out;
  out.xdd = om * om *
            (cfg.alpha_z * (cfg.beta_z * pose_diff(state.goal, state.x_ref) - state.xd_ref / om) +
             gamma);
  state.xd_ref += out.xdd * dt;
  state.x_ref.p += state.xd_ref.head<3>() * dt;
  state.x_ref.q = integrate_quat(state.x_ref.q, 2.0 * state.xd_ref.tail<3>(), dt);
  state.s = std::fmod(state.s + om * dt, kTwoPi);
  out.xd = state.xd_ref;
  out.x = state.x_ref;
  return out;
}

}  // namespace teleteach
