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

#include "teleteach/telemetry.hpp"

#include <charconv>

#include "teleteach/config.hpp"

namespace teleteach {

using nlohmann::json;

namespace {

template <int N>
json vec(const Eigen::Matrix<double, N, 1>& v) {
  json a = json::array();
  for (int i = 0; i < N; ++i) a.push_back(v[i]);
  return a;
}

template <int N>
Eigen::Matrix<double, N, 1> vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(N)) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) {
    if (!j[i].is_number()) throw ValidationError(std::string(what) + ": expected numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

json twist(const Twist& t) { return {{"v", vec(t.v)}, {"omega", vec(t.omega)}}; }
json wrench(const Wrench& w) { return {{"force", vec(w.force)}, {"moment", vec(w.moment)}}; }

Twist twist_from(const json& j) {
  return {vec_from<3>(member(j, "v"), "v"), vec_from<3>(member(j, "omega"), "omega")};
}
Wrench wrench_from(const json& j) {
  return {vec_from<3>(member(j, "force"), "force"), vec_from<3>(member(j, "moment"), "moment")};
}

}  // namespace

json pose_to_json(const Pose& p) { return {{"p", vec(p.p)}, {"q", vec(p.q.coeffs())}}; }

Pose pose_from_json(const json& j) {
  Pose p;
  p.p = vec_from<3>(member(j, "p"), "p");
  p.q = UnitQuaternion::from_coeffs(vec_from<4>(member(j, "q"), "q"));
  return p;
}

json frame_to_json(const TelemetryFrame& f) {
  return {{"tick", f.tick},
          {"t", f.t},
          {"tr_pose", pose_to_json(f.tr_pose)},
          {"pr_pose", pose_to_json(f.pr_pose)},
          {"x_ref", pose_to_json(f.x_ref)},
          {"tr_twist", twist(f.tr_twist)},
          {"pr_twist", twist(f.pr_twist)},
          {"f_h_th", wrench(f.f_h_th)},
          {"u_p", wrench(f.u_p)},
          {"mu", f.mu},
          {"eta", f.eta},
          {"Omega", f.omega},
          {"s", f.s},
          {"err_norm", f.err_norm},
          {"I_s", f.i_s},
          {"I_h", f.i_h},
          {"K_p", vec(f.kp)},
          {"learning", f.learning}};
}

TelemetryFrame frame_from_json(const json& j) {
  TelemetryFrame f;
  const json& tick = member(j, "tick");
  if (!tick.is_number_integer()) throw ValidationError("field 'tick' must be an integer");
  f.tick = tick.get<std::int64_t>();
  f.t = number(j, "t");
  f.tr_pose = pose_from_json(member(j, "tr_pose"));
  f.pr_pose = pose_from_json(member(j, "pr_pose"));
  f.x_ref = pose_from_json(member(j, "x_ref"));
  f.tr_twist = twist_from(member(j, "tr_twist"));
  f.pr_twist = twist_from(member(j, "pr_twist"));
  f.f_h_th = wrench_from(member(j, "f_h_th"));
  f.u_p = wrench_from(member(j, "u_p"));
  f.mu = number(j, "mu");
  f.eta = number(j, "eta");
  f.omega = number(j, "Omega");
  f.s = number(j, "s");
  f.err_norm = number(j, "err_norm");
  f.i_s = number(j, "I_s");
  f.i_h = number(j, "I_h");
  f.kp = vec_from<6>(member(j, "K_p"), "K_p");
  const json& learning = member(j, "learning");
  if (!learning.is_boolean()) throw ValidationError("field 'learning' must be a boolean");
  f.learning = learning.get<bool>();
  return f;
}

json telemetry_header(const WorldConfig& world, int decimation) {
  return {{"schema", kTelemetrySchema},
          {"dt", world.dt},
          {"decimation", decimation},
          {"seed", world.seed},
          {"config_hash", skill_config_hash(world)}};
}

TelemetryWriter::TelemetryWriter(std::ostream& out, const json& header) : out_(out) {
  out_ << header.dump() << '\n';
}

void TelemetryWriter::write(const TelemetryFrame& f) {
  out_ << frame_to_json(f).dump() << '\n';
  ++frames_;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json scenario_summary(const ScenarioResult& result) {
  const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json phases = json::array();
  for (const PhaseSummary& p : result.phases) {
    phases.push_back({{"skill", p.skill},
                      {"demo_start", p.demo_start},
                      {"period", p.period},
                      {"t_mu_one", opt(p.t_mu_one)},
                      {"t_eta_one", opt(p.t_eta_one)},
                      {"t_release", opt(p.t_release)},
                      {"periods_to_mu_one", opt(p.periods_to_mu_one)},
                      {"periods_to_eta_one", opt(p.periods_to_eta_one)},
                      {"injection_latency", opt(p.injection_latency)},
                      {"t_relearn", opt(p.t_relearn)},
                      {"peak_hand_force", p.peak_hand_force},
                      {"autonomous_rms_mm", opt(p.autonomous_rms_mm)},
                      {"autonomous_rms_rad", opt(p.autonomous_rms_rad)},
                      {"omega_final", p.omega_final},
                      {"omega_script", p.omega_script}});
  }
  return {{"duration", result.duration}, {"unit_quaternions", result.max_quat_norm_ok}, {"phases", phases}};
}

std::string sensitivity_csv(const std::vector<SensitivityRow>& rows) {
  std::string out = "param,weight_std,rms_error_mm\r\n";
  for (const SensitivityRow& r : rows) {
    out += format_double(r.value) + ",";
    if (r.failure.empty()) out += format_double(r.weight_std) + "," + format_double(r.rms_error_mm);
    else out += ",";
    out += "\r\n";
  }
  return out;
}

}  // namespace teleteach
