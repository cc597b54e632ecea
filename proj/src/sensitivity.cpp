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

#include "teleteach/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "teleteach/learner.hpp"
#include "teleteach/robot.hpp"

namespace teleteach {

void SensitivityConfig::validate() const {
  dmp.validate();
  if (!(omega > 0.0)) throw ValidationError("sensitivity.omega must be > 0");
  if (!(duration > 0.0)) throw ValidationError("sensitivity.duration must be > 0");
  if (!(sample_hz > 0.0)) throw ValidationError("sensitivity.sample_hz must be > 0");
  auto window = [&](double a, double b, const char* name) {
    if (!(a >= 0.0 && a < b && b <= duration)) {
      throw ValidationError(std::string("sensitivity.") + name + " must lie within the run");
    }
  };
  window(mu_ramp_start, mu_ramp_end, "mu_ramp");
  window(weight_window_start, weight_window_end, "weight_window");
  window(error_window_start, error_window_end, "error_window");
  if (param != "h" && param != "lambda_fg") {
    throw ValidationError("sensitivity.param must be 'h' or 'lambda_fg'");
  }
  for (double v : values) {
    if (!(v > 0.0)) throw ValidationError("sensitivity.values must be > 0");
  }
}

SensitivityRow run_sensitivity_point(const SensitivityConfig& cfg, double value) {
  SensitivityRow row;
  row.value = value;
  PdmpConfig dmp = cfg.dmp;
  if (cfg.param == "h") {
    dmp.translation.width = value;
    dmp.rotation.width = value;
  } else {
    dmp.forgetting = value;
  }
  try {
    dmp.validate();
  } catch (const ValidationError& e) {
    row.failure = e.what();
    return row;
  }

  SkillLearner learner(dmp, AfoConfig{});
  learner.fix_frequency(cfg.omega);
  const double dt = 1.0 / cfg.sample_hz;
  const auto samples = static_cast<long>(std::lround(cfg.duration * cfg.sample_hz));
  const int n = dmp.translation.count;

  auto signal = [&](double t) {
    return Pose{Vec3(cfg.offset + cfg.amplitude * std::sin(cfg.omega * t), 0.0, 0.0), UnitQuaternion()};
  };
  auto mu_at = [&](double t) {
    if (t < cfg.mu_ramp_start) return 0.0;
    if (t >= cfg.mu_ramp_end) return 1.0;
    return (t - cfg.mu_ramp_start) / (cfg.mu_ramp_end - cfg.mu_ramp_start);
  };

  const Pose start = signal(0.0);
  Eigen::VectorXd w_sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w_sq = Eigen::VectorXd::Zero(n);
  long w_count = 0;
  double err_sq = 0.0;
  long err_count = 0;

  try {
    for (long k = 0; k <= samples; ++k) {
      const double t = static_cast<double>(k) * dt;
      const Pose demo = signal(t);
      learner.learn(demo, demo, start, mu_at(t), dt);

      const Eigen::VectorXd& w = learner.dmp().w[0];
      if (t >= cfg.weight_window_start && t < cfg.weight_window_end) {
        w_sum += w;
        w_sq += w.cwiseProduct(w);
        ++w_count;
      }
      if (t >= cfg.error_window_start && t <= cfg.error_window_end) {
        const double e = learner.dmp().x_ref.p.x() - demo.p.x();
        err_sq += e * e;
        ++err_count;
      }
      const PdmpStep out = learner.generate(start, dt);
      if (!std::isfinite(out.x.p.x()) || std::abs(out.x.p.x()) > kDivergenceLimit ||
          !w.allFinite() || w.cwiseAbs().maxCoeff() > kDivergenceLimit) {
        throw DivergenceError("learner diverged at t = " + std::to_string(t));
      }
    }
  } catch (const DivergenceError& e) {
    row.failure = e.what();
    return row;
  }

  const Eigen::VectorXd mean = w_sum / static_cast<double>(w_count);
  const Eigen::VectorXd var =
      (w_sq / static_cast<double>(w_count) - mean.cwiseProduct(mean)).cwiseMax(0.0);
  row.weight_std = var.cwiseSqrt().mean();
  row.rms_error_mm = 1000.0 * std::sqrt(err_sq / static_cast<double>(err_count));
  return row;
}

std::vector<SensitivityRow> run_sensitivity(const SensitivityConfig& cfg) {
  cfg.validate();
  std::vector<SensitivityRow> rows;
  rows.reserve(cfg.values.size());
  for (double v : cfg.values) rows.push_back(run_sensitivity_point(cfg, v));
  return rows;
}

}  // namespace teleteach
