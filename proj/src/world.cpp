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

#include "teleteach/world.hpp"

namespace teleteach {

namespace {

void check_stiffness(const Stiffness& k, const std::string& path) {
  if (!(k.trans >= 0.0) || !(k.rot >= 0.0)) throw ValidationError(path + " entries must be >= 0");
}

}  // namespace

void WorldConfig::validate() const {
  dmp.validate();
  afo.validate();
  autonomy.validate();
  robots.tr.validate("robots.tr");
  robots.pr.validate("robots.pr");
  check_stiffness(robots.k_th, "robots.k_th");
  check_stiffness(robots.k_thp, "robots.k_thp");
  check_stiffness(robots.k0, "robots.k0");
  if (!(robots.arm.stiffness_trans >= 0.0) || !(robots.arm.stiffness_rot >= 0.0)) {
    throw ValidationError("robots.arm stiffness must be >= 0");
  }
  if (!(robots.arm.force_max > 0.0)) throw ValidationError("robots.arm.force_max must be > 0");
  if (!(robots.arm.moment_max > 0.0)) throw ValidationError("robots.arm.moment_max must be > 0");
  if (channel.delay_ticks < 0) throw ValidationError("channel.delay_ticks must be >= 0");
  if (!(channel.drop_probability >= 0.0 && channel.drop_probability < 1.0)) {
    throw ValidationError("channel.drop_probability must lie in [0, 1)");
  }
  if (!(dt > 0.0)) throw ValidationError("world.dt must be > 0");
  if (learn_every < 1) throw ValidationError("world.learn_every must be >= 1");
}

World::World(const WorldConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const RobotsConfig& r = cfg_.robots;
  g_th_ = GainSet::critical(r.k_th.trans, r.k_th.rot, r.tr);
  g_thp_ = GainSet::critical(r.k_thp.trans, r.k_thp.rot, r.pr);
  g_0_ = GainSet::critical(r.k0.trans, r.k0.rot, r.pr);
  g_arm_ = GainSet::critical(r.arm.stiffness_trans, r.arm.stiffness_rot, r.tr);
  pr_inertia_ = r.pr.pose_rate_inertia();
  reset();
}

void World::reset() {
  tr_ = RobotState{};
  tr_.pose = cfg_.home;
  pr_ = tr_;
  const RobotSnapshot rest{cfg_.home, Vec6::Zero()};
  to_pr_ = Channel(cfg_.channel.delay_ticks, cfg_.channel.drop_probability, cfg_.seed, rest);
  to_tr_ = Channel(cfg_.channel.delay_ticks, cfg_.channel.drop_probability, cfg_.seed ^ 0x9e3779b97f4a7c15ULL,
                   rest);
  learner_ = SkillLearner(cfg_.dmp, cfg_.afo);
  auto_ = AutonomyState{};
  hand_.reset();
  ref_ = PdmpStep{Vec6::Zero(), Vec6::Zero(), cfg_.home};
  tick_ = 0;
  err_norm_ = i_s_ = i_h_ = 0.0;
  frame_ = TelemetryFrame{};
  frame_.tr_pose = frame_.pr_pose = frame_.x_ref = cfg_.home;
  frame_.omega = learner_.omega();
}

const TelemetryFrame& World::tick() {
  const double dt = cfg_.dt;

  const RobotSnapshot th_at_p = to_pr_.exchange({tr_.pose, tr_.twist.pose_rate()});
  const RobotSnapshot p_at_th = to_tr_.exchange({pr_.pose, pr_.twist.pose_rate()});

  const Wrench f_h = hand_ ? Wrench::from_vec6(
                                 human_arm_wrench(hand_->pose, hand_->rate, tr_, g_arm_, cfg_.robots.arm, hand_->push)
                                     .as_vec6()
                                     .cwiseProduct(hand_->mask))
                           : Wrench{};

  if (tick_ % cfg_.learn_every == 0) {
    const double dt_learn = dt * cfg_.learn_every;
    learner_.learn(th_at_p.pose, pr_.pose, pr_.pose, auto_.mu, dt_learn);
    i_h_ = intervention_index(f_h, cfg_.autonomy);
    if (learner_.armed()) {
      const Pose& measured = auto_.eta > 0.0 ? pr_.pose : th_at_p.pose;
      err_norm_ = weighted_error_norm(pose_diff(ref_.x, measured), cfg_.autonomy);
      i_s_ = skill_confidence(err_norm_, cfg_.autonomy);
      auto_.mu = mu_step(auto_.mu, i_s_, dt_learn, cfg_.autonomy);
      auto_.eta = eta_step(auto_.eta, auto_.mu, i_h_, dt_learn, cfg_.autonomy);
    }
  }

  ref_ = learner_.generate(pr_.pose, dt);

  const double eta = auto_.eta;
  const GainSet g_th = cfg_.robots.tr_gain_ramp ? g_th_.scaled(eta) : g_th_;
  const Wrench u_th = tr_control(p_at_th.pose, p_at_th.rate, tr_, g_th);
  const PrCommand pr_cmd = pr_control(pr_, th_at_p.pose, th_at_p.rate, ref_.x, ref_.xd, ref_.xdd, eta,
                                      g_thp_, g_0_, pr_inertia_);

  tr_ = robot_step(tr_, u_th * eta, f_h, cfg_.robots.tr, dt);
  pr_ = robot_step(pr_, pr_cmd.u_p, Wrench{}, cfg_.robots.pr, dt);
  ++tick_;

  frame_.tick = tick_;
  frame_.t = time();
  frame_.tr_pose = tr_.pose;
  frame_.pr_pose = pr_.pose;
  frame_.x_ref = ref_.x;
  frame_.tr_twist = tr_.twist;
  frame_.pr_twist = pr_.twist;
  frame_.f_h_th = f_h;
  frame_.u_p = pr_cmd.u_p;
  frame_.mu = auto_.mu;
  frame_.eta = auto_.eta;
  frame_.omega = learner_.omega();
  frame_.s = learner_.dmp().s;
  frame_.err_norm = err_norm_;
  frame_.i_s = i_s_;
  frame_.i_h = i_h_;
  frame_.kp = pr_cmd.kp;
  frame_.learning = learner_.armed();
  return frame_;
}

}  // namespace teleteach
