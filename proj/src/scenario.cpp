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

#include "teleteach/scenario.hpp"

#include <cmath>

namespace teleteach {

void ScenarioConfig::validate() const {
  world.validate();
  if (!(duration > 0.0)) throw ValidationError("scenario.duration must be > 0");
  if (telemetry_decimation < 1) throw ValidationError("scenario.telemetry_decimation must be >= 1");
  if (!(settle_periods >= 0.0)) throw ValidationError("scenario.settle_periods must be >= 0");
  double prev_start = -1.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const ScenarioPhase& ph = phases[i];
    ph.script.validate();
    const std::string where = "scenario.phases[" + std::to_string(i) + "]";
    if (!(ph.script.start > prev_start)) throw ValidationError(where + " must start after the previous phase");
    if (!(ph.end >= ph.script.stop)) throw ValidationError(where + ".end must not precede the script stop");
    prev_start = ph.script.start;
  }
}

ScenarioConfig ScenarioConfig::default_timeline(const WorldConfig& world) {
  ScenarioConfig cfg;
  cfg.world = world;

  ScenarioPhase first;
  first.script = skill_preset("R1", world.home);
  first.script.start = 1.0;
  first.script.stop = 31.0;
  first.end = 45.0;

  ScenarioPhase second;
  Pose shifted = world.home;
  shifted.p.x() += 0.08;
  second.script = skill_preset("R5", shifted);
  second.script.frequency_hz = 0.25;
  second.script.start = 45.0;
  second.script.stop = 85.0;
  second.end = 100.0;

  cfg.phases = {first, second};
  cfg.duration = 100.0;
  return cfg;
}

namespace {

struct PhaseTracker {
  bool mu_dropped = false;
  bool released = false;
  bool started = false;
  bool injecting = false;
  double sq_mm = 0.0;
  double sq_rad = 0.0;
  long samples = 0;
};

// Unit vector from the robot toward the script position, or along the
// script velocity when the two coincide.
Vec3 injection_direction(const ScriptSample& s, const Pose& robot) {
  const Vec3 gap = s.pose.p - robot.p;
  if (gap.norm() > 1e-3) return gap.normalized();
  const Vec3 v = s.rate.head<3>();
  return v.norm() > 1e-9 ? Vec3(v.normalized()) : Vec3::UnitX();
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const FrameSink& sink) {
  cfg.validate();
  World world(cfg.world);
  ScenarioResult result;
  result.duration = cfg.duration;
  result.phases.resize(cfg.phases.size());
  std::vector<PhaseTracker> track(cfg.phases.size());
  for (std::size_t i = 0; i < cfg.phases.size(); ++i) {
    const SkillScript& s = cfg.phases[i].script;
    result.phases[i].skill = s.id;
    result.phases[i].demo_start = s.start;
    result.phases[i].period = s.period();
    result.phases[i].omega_script = 2.0 * 3.141592653589793 * s.frequency_hz;
  }

  const auto total = static_cast<std::int64_t>(std::llround(cfg.duration / cfg.world.dt));
  for (std::int64_t k = 0; k < total; ++k) {
    const double t = world.time();
    int current = -1;
    for (std::size_t i = 0; i < cfg.phases.size(); ++i) {
      if (cfg.phases[i].script.start <= t) current = static_cast<int>(i);
    }

    std::optional<HandTarget> hand;
    if (current >= 0) {
      const ScenarioPhase& ph = cfg.phases[current];
      if (ph.script.active(t) && !track[current].released) {
        const ScriptSample s = skill_trajectory(ph.script, t);
        hand = HandTarget{s.pose, s.rate, Vec6::Ones(), {}};
        PhaseTracker& tr = track[current];
        if (!tr.started) {
          tr.started = true;
          tr.injecting = ph.injection_force > 0.0 && world.autonomy().eta >= 0.1;
        }
        if (world.autonomy().eta < 0.1) tr.injecting = false;
        if (tr.injecting) hand->push.force = injection_direction(s, world.tr().pose) * ph.injection_force;
      }
    }
    world.set_hand(hand);
    const TelemetryFrame& f = world.tick();

    for (const Pose* pose : {&f.tr_pose, &f.pr_pose, &f.x_ref}) {
      if (std::abs(pose->q.coeffs().norm() - 1.0) > 1e-9) result.max_quat_norm_ok = false;
    }
    if (sink && k % cfg.telemetry_decimation == 0) sink(f);
    if (current < 0) continue;

    const ScenarioPhase& ph = cfg.phases[current];
    PhaseSummary& sum = result.phases[current];
    PhaseTracker& tr = track[current];
    if (hand) sum.peak_hand_force = std::max(sum.peak_hand_force, f.f_h_th.force.norm());
    if (!mu_is_one(f.mu)) tr.mu_dropped = true;
    if (current > 0) {
      if (!sum.injection_latency && f.eta < 0.1) sum.injection_latency = f.t - ph.script.start;
      if (!sum.t_relearn && f.mu < cfg.world.dmp.reset_threshold) sum.t_relearn = f.t;
    }
    if (!sum.t_mu_one && tr.mu_dropped && mu_is_one(f.mu)) {
      sum.t_mu_one = f.t;
      sum.periods_to_mu_one = (f.t - ph.script.start) / ph.script.period();
    }
    if (sum.t_mu_one && !sum.t_eta_one && f.eta >= 1.0 - kMuOneTolerance) {
      sum.t_eta_one = f.t;
      sum.periods_to_eta_one = (f.t - *sum.t_mu_one) / ph.script.period();
    }
    if (ph.release_on_autonomy && sum.t_eta_one && !tr.released) {
      tr.released = true;
      sum.t_release = f.t;
    }
    if (sum.t_eta_one && f.t >= *sum.t_eta_one + cfg.settle_periods * ph.script.period() && f.t < ph.end) {
      const ScriptSample s = skill_trajectory(ph.script, f.t);
      tr.sq_mm += (1000.0 * (f.pr_pose.p - s.pose.p)).squaredNorm();
      const double d = shortest_geodesic_distance(f.pr_pose.q, s.pose.q);
      tr.sq_rad += d * d;
      ++tr.samples;
    }
    sum.omega_final = f.omega;
  }

  result.learner = world.learner();
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (track[i].samples > 0) {
      const auto n = static_cast<double>(track[i].samples);
      result.phases[i].autonomous_rms_mm = std::sqrt(track[i].sq_mm / n);
      result.phases[i].autonomous_rms_rad = std::sqrt(track[i].sq_rad / n);
    }
  }
  return result;
}

}  // namespace teleteach
