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

#include "teleteach/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace teleteach {

using nlohmann::json;

namespace {

// The same field list drives parsing (Reader) and serialization (Writer).

class Reader {
 public:
  Reader(const json& node, std::string path, std::vector<std::string>& errors)
      : node_(node), path_(std::move(path)), errors_(errors) {
    if (!node_.is_object()) fail(path_.empty() ? "(root)" : path_, "expected an object");
  }

  template <typename T>
  void field(const char* key, T& out) {
    const json* v = take(key);
    if (v == nullptr) return;
    convert(*v, out, where(key));
  }

  template <typename F>
  void object(const char* key, F&& visit) {
    const json* v = take(key);
    if (v == nullptr) return;
    Reader child(*v, where(key), errors_);
    if (v->is_object()) {
      visit(child);
      child.finish();
    }
  }

  /// Raw access for fields with custom structure.
  const json* raw(const char* key) { return take(key); }

  void finish() {
    if (!node_.is_object()) return;
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) fail(where(key.c_str()), "unknown key");
    }
  }

  std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  void fail(const std::string& path, const std::string& what) { errors_.push_back(path + ": " + what); }
  std::vector<std::string>& errors() { return errors_; }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    if (!node_.is_object()) return nullptr;
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void convert(const json& v, double& out, const std::string& path) {
    if (!v.is_number()) return fail(path, "expected a number");
    out = v.get<double>();
  }
  void convert(const json& v, int& out, const std::string& path) {
    if (!v.is_number_integer()) return fail(path, "expected an integer");
    out = v.get<int>();
  }
  void convert(const json& v, std::uint64_t& out, const std::string& path) {
    if (!v.is_number_unsigned()) return fail(path, "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }
  void convert(const json& v, bool& out, const std::string& path) {
    if (!v.is_boolean()) return fail(path, "expected true or false");
    out = v.get<bool>();
  }
  void convert(const json& v, std::string& out, const std::string& path) {
    if (!v.is_string()) return fail(path, "expected a string");
    out = v.get<std::string>();
  }
  template <int N>
  void convert(const json& v, Eigen::Matrix<double, N, 1>& out, const std::string& path) {
    if (!v.is_array() || v.size() != static_cast<std::size_t>(N)) {
      return fail(path, "expected an array of " + std::to_string(N) + " numbers");
    }
    for (int i = 0; i < N; ++i) {
      if (!v[i].is_number()) return fail(path, "expected an array of " + std::to_string(N) + " numbers");
      out[i] = v[i].get<double>();
    }
  }
  void convert(const json& v, Eigen::Vector3i& out, const std::string& path) {
    if (!v.is_array() || v.size() != 3) return fail(path, "expected an array of 3 integers");
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number_integer()) return fail(path, "expected an array of 3 integers");
      out[i] = v[i].get<int>();
    }
  }
  void convert(const json& v, std::vector<double>& out, const std::string& path) {
    if (!v.is_array()) return fail(path, "expected an array of numbers");
    std::vector<double> values;
    for (const json& x : v) {
      if (!x.is_number()) return fail(path, "expected an array of numbers");
      values.push_back(x.get<double>());
    }
    out = std::move(values);
  }
  void convert(const json& v, UnitQuaternion& out, const std::string& path) {
    Vec4 q;
    const std::size_t before = errors_.size();
    convert(v, q, path);
    if (errors_.size() != before) return;
    try {
      out = UnitQuaternion::from_coeffs(q);
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
  }

  const json& node_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

class Writer {
 public:
  explicit Writer(json& node) : node_(node) { node_ = json::object(); }

  template <typename T>
  void field(const char* key, const T& value) {
    node_[key] = encode(value);
  }

  template <typename F>
  void object(const char* key, F&& visit) {
    json child;
    Writer w(child);
    visit(w);
    node_[key] = std::move(child);
  }

  json& node() { return node_; }

 private:
  template <typename T>
  static json encode(const T& v) {
    return v;
  }
  template <int N>
  static json encode(const Eigen::Matrix<double, N, 1>& v) {
    json a = json::array();
    for (int i = 0; i < N; ++i) a.push_back(v[i]);
    return a;
  }
  static json encode(const Eigen::Vector3i& v) { return json::array({v[0], v[1], v[2]}); }
  static json encode(const UnitQuaternion& q) { return encode(q.coeffs()); }

  json& node_;
};

template <typename V, typename C>
void visit_dmp(V& v, C& c) {
  v.field("N", c.translation.count);
  v.field("h", c.translation.width);
  v.field("alpha_z", c.alpha_z);
  v.field("beta_z", c.beta_z);
  v.field("lambda_fg", c.forgetting);
  v.field("initial_gain", c.initial_gain);
  v.field("reset_gain_on_relearn", c.reset_gain_on_relearn);
  v.field("reset_threshold", c.reset_threshold);
  v.field("derivative_cutoff_hz", c.derivative_cutoff_hz);
}

template <typename V, typename C>
void visit_afo(V& v, C& c) {
  v.field("harmonics", c.harmonics);
  v.field("k_phi", c.k_phi);
  v.field("k_omega", c.k_omega);
  v.field("k_fourier", c.k_fourier);
  v.field("omega0", c.omega0);
  v.field("omega_min", c.omega_min);
  v.field("omega_max", c.omega_max);
  v.field("drive_amplitude", c.drive_amplitude);
  v.field("highpass_hz", c.highpass_hz);
  v.field("normalization_tau", c.normalization_tau);
  v.field("selection_window", c.selection_window);
  v.field("switch_ratio", c.switch_ratio);
  v.field("reselect_below_mu", c.reselect_below_mu);
  v.field("activity_threshold", c.activity_threshold);
  v.field("averaging_periods", c.averaging_periods);
}

template <typename V, typename C>
void visit_autonomy(V& v, C& c) {
  v.field("rho", c.rho);
  v.field("epsilon", c.epsilon);
  v.field("lambda_err", c.lambda_err);
  v.field("lambda_f", c.lambda_f);
  v.field("lambda_m", c.lambda_m);
  v.field("error_weights", c.error_weights);
}

template <typename V, typename C>
void visit_robot(V& v, C& c) {
  v.field("mass", c.mass);
  v.field("inertia", c.inertia);
  v.field("damping_trans", c.damping_trans);
  v.field("damping_rot", c.damping_rot);
}

template <typename V, typename C>
void visit_stiffness(V& v, C& c) {
  v.field("trans", c.trans);
  v.field("rot", c.rot);
}

template <typename V, typename C>
void visit_robots(V& v, C& c) {
  v.object("tr", [&](V& s) { visit_robot(s, c.tr); });
  v.object("pr", [&](V& s) { visit_robot(s, c.pr); });
  v.object("k_th", [&](V& s) { visit_stiffness(s, c.k_th); });
  v.object("k_thp", [&](V& s) { visit_stiffness(s, c.k_thp); });
  v.object("k0", [&](V& s) { visit_stiffness(s, c.k0); });
  v.object("arm", [&](V& s) {
    s.field("stiffness_trans", c.arm.stiffness_trans);
    s.field("stiffness_rot", c.arm.stiffness_rot);
    s.field("force_max", c.arm.force_max);
    s.field("moment_max", c.arm.moment_max);
  });
  v.field("tr_gain_ramp", c.tr_gain_ramp);
}

template <typename V, typename C>
void visit_channel(V& v, C& c) {
  v.field("delay_ticks", c.delay_ticks);
  v.field("drop_probability", c.drop_probability);
}

template <typename V, typename C>
void visit_world(V& v, C& c) {
  v.field("dt", c.dt);
  v.field("learn_every", c.learn_every);
  v.field("seed", c.seed);
  v.object("home", [&](V& s) {
    s.field("p", c.home.p);
    s.field("q", c.home.q);
  });
}

template <typename V, typename C>
void visit_script_shape(V& v, C& s) {
  v.field("frequency_hz", s.frequency_hz);
  v.field("amplitude", s.amplitude);
  v.field("phase", s.phase);
  v.field("harmonic", s.harmonic);
  v.field("rot_amplitude", s.rot_amplitude);
  v.field("rot_phase", s.rot_phase);
  v.field("start", s.script_start);
  v.field("stop", s.script_stop);
}

// Flattened view of a ScenarioPhase as it appears on disk.
struct PhaseFields {
  std::string skill = "R1";
  double frequency_hz = 0.3;
  Vec3 amplitude = Vec3::Zero(), phase = Vec3::Zero();
  Eigen::Vector3i harmonic = Eigen::Vector3i::Ones();
  Vec3 rot_amplitude = Vec3::Zero(), rot_phase = Vec3::Zero();
  double script_start = 0.0, script_stop = 0.0;
  Vec3 base_offset = Vec3::Zero();
  double end = 0.0;
  bool release_on_autonomy = true;
  double injection_force = 20.0;

  static PhaseFields from(const ScenarioPhase& ph, const Pose& home) {
    PhaseFields f;
    const SkillScript& s = ph.script;
    f.skill = s.id;
    f.frequency_hz = s.frequency_hz;
    f.amplitude = s.amplitude;
    f.phase = s.phase;
    f.harmonic = s.harmonic;
    f.rot_amplitude = s.rot_amplitude;
    f.rot_phase = s.rot_phase;
    f.script_start = s.start;
    f.script_stop = s.stop;
    f.base_offset = s.base.p - home.p;
    f.end = ph.end;
    f.release_on_autonomy = ph.release_on_autonomy;
    f.injection_force = ph.injection_force;
    return f;
  }
};

template <typename V, typename C>
void visit_phase(V& v, C& f) {
  visit_script_shape(v, f);
  v.field("base_offset", f.base_offset);
  v.field("end", f.end);
  v.field("release_on_autonomy", f.release_on_autonomy);
  v.field("injection_force", f.injection_force);
}

template <typename V, typename C>
void visit_sensitivity(V& v, C& c) {
  v.field("offset", c.offset);
  v.field("amplitude", c.amplitude);
  v.field("omega", c.omega);
  v.field("duration", c.duration);
  v.field("sample_hz", c.sample_hz);
  v.field("mu_ramp_start", c.mu_ramp_start);
  v.field("mu_ramp_end", c.mu_ramp_end);
  v.field("weight_window_start", c.weight_window_start);
  v.field("weight_window_end", c.weight_window_end);
  v.field("error_window_start", c.error_window_start);
  v.field("error_window_end", c.error_window_end);
  v.field("param", c.param);
  v.field("values", c.values);
}

template <typename V, typename C>
void visit_session(V& v, C& c) {
  v.field("port", c.port);
  v.field("telemetry_hz", c.telemetry_hz);
  v.field("speed", c.speed);
  v.field("host", c.host);
  v.field("static_root", c.static_root);
  v.field("plane_u", c.plane_u);
  v.field("plane_v", c.plane_v);
  v.field("twist_moment", c.twist_moment);
  v.field("telemetry_queue", c.telemetry_queue);
  v.field("input_queue", c.input_queue);
}

void read_phases(Reader& r, const json& list, const Pose& home, std::vector<ScenarioPhase>& out) {
  const std::string base = r.where("phases");
  if (!list.is_array()) return r.fail(base, "expected an array");
  out.clear();
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = base + "[" + std::to_string(i) + "]";
    Reader pr(list[i], path, r.errors());
    if (!list[i].is_object()) continue;

    PhaseFields f;
    pr.field("skill", f.skill);
    SkillScript preset;
    bool known = true;
    try {
      preset = skill_preset(f.skill, home);
    } catch (const ValidationError&) {
      known = false;
    }
    if (known) {
      f = PhaseFields::from(ScenarioPhase{preset, true, 20.0, 0.0}, home);
    }
    visit_phase(pr, f);
    pr.finish();

    ScenarioPhase ph;
    ph.script = known ? preset : SkillScript{};
    ph.script.id = f.skill;
    ph.script.frequency_hz = f.frequency_hz;
    ph.script.amplitude = f.amplitude;
    ph.script.phase = f.phase;
    ph.script.harmonic = f.harmonic;
    ph.script.rot_amplitude = f.rot_amplitude;
    ph.script.rot_phase = f.rot_phase;
    ph.script.start = f.script_start;
    ph.script.stop = f.script_stop;
    ph.script.base = home;
    ph.script.base.p += f.base_offset;
    ph.end = f.end;
    ph.release_on_autonomy = f.release_on_autonomy;
    ph.injection_force = f.injection_force;
    out.push_back(ph);
  }
}

// Runs a validate() and records its message instead of throwing.
void check(std::vector<std::string>& errors, const std::function<void()>& validate) {
  try {
    validate();
  } catch (const ValidationError& e) {
    errors.emplace_back(e.what());
  }
}

}  // namespace

void SessionConfig::validate() const {
  if (host.empty()) throw ValidationError("session.host must not be empty");
  if (port < 0 || port > 65535) throw ValidationError("session.port must lie in [0, 65535]");
  if (!(telemetry_hz > 0.0)) throw ValidationError("session.telemetry_hz must be > 0");
  if (!(speed >= 0.0)) throw ValidationError("session.speed must be >= 0");
  if (plane_u < 0 || plane_u > 2 || plane_v < 0 || plane_v > 2 || plane_u == plane_v) {
    throw ValidationError("session.plane_u/plane_v must be two distinct axes in 0..2");
  }
  if (telemetry_queue < 1 || input_queue < 1) throw ValidationError("session queues must hold at least 1 message");
}

AppConfig default_config() {
  AppConfig cfg;
  cfg.scenario = ScenarioConfig::default_timeline(cfg.world);
  cfg.sensitivity.dmp = cfg.world.dmp;
  return cfg;
}

AppConfig config_from_json(const json& doc) {
  AppConfig cfg = default_config();
  std::vector<std::string> errors;
  Reader root(doc, "", errors);
  WorldConfig& w = cfg.world;

  // World first: the scenario phases are placed relative to world.home.
  root.object("world", [&](Reader& s) { visit_world(s, w); });
  root.object("dmp", [&](Reader& s) { visit_dmp(s, w.dmp); });
  root.object("afo", [&](Reader& s) { visit_afo(s, w.afo); });
  root.object("autonomy", [&](Reader& s) { visit_autonomy(s, w.autonomy); });
  root.object("robots", [&](Reader& s) { visit_robots(s, w.robots); });
  root.object("channel", [&](Reader& s) { visit_channel(s, w.channel); });

  ScenarioConfig& sc = cfg.scenario;
  sc.phases = ScenarioConfig::default_timeline(w).phases;
  root.object("scenario", [&](Reader& s) {
    s.field("duration", sc.duration);
    s.field("settle_periods", sc.settle_periods);
    s.field("telemetry_decimation", sc.telemetry_decimation);
    if (const json* list = s.raw("phases")) read_phases(s, *list, w.home, sc.phases);
  });
  root.object("sensitivity", [&](Reader& s) { visit_sensitivity(s, cfg.sensitivity); });
  root.object("session", [&](Reader& s) { visit_session(s, cfg.session); });
  root.finish();

  w.dmp.rotation = w.dmp.translation;
  sc.world = w;
  cfg.sensitivity.dmp = w.dmp;

  if (errors.empty()) {
    check(errors, [&] { w.dmp.validate(); });
    check(errors, [&] { w.afo.validate(); });
    check(errors, [&] { w.autonomy.validate(); });
    check(errors, [&] { w.robots.tr.validate("robots.tr"); });
    check(errors, [&] { w.robots.pr.validate("robots.pr"); });
    check(errors, [&] { w.validate(); });
    check(errors, [&] { sc.validate(); });
    check(errors, [&] { cfg.session.validate(); });
    if (!cfg.sensitivity.values.empty()) check(errors, [&] { cfg.sensitivity.validate(); });
  }
  if (!errors.empty()) {
    // The per-module checks overlap (world.validate re-runs dmp etc.).
    std::vector<std::string> unique;
    for (const std::string& e : errors) {
      if (std::find(unique.begin(), unique.end(), e) == unique.end()) unique.push_back(e);
    }
    std::string msg = "invalid configuration:";
    for (const std::string& e : unique) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  return cfg;
}

json config_to_json(const AppConfig& cfg) {
  AppConfig c = cfg;
  json doc;
  Writer root(doc);
  root.object("world", [&](Writer& s) { visit_world(s, c.world); });
  root.object("dmp", [&](Writer& s) { visit_dmp(s, c.world.dmp); });
  root.object("afo", [&](Writer& s) { visit_afo(s, c.world.afo); });
  root.object("autonomy", [&](Writer& s) { visit_autonomy(s, c.world.autonomy); });
  root.object("robots", [&](Writer& s) { visit_robots(s, c.world.robots); });
  root.object("channel", [&](Writer& s) { visit_channel(s, c.world.channel); });
  root.object("scenario", [&](Writer& s) {
    s.field("duration", c.scenario.duration);
    s.field("settle_periods", c.scenario.settle_periods);
    s.field("telemetry_decimation", c.scenario.telemetry_decimation);
    json list = json::array();
    for (const ScenarioPhase& ph : c.scenario.phases) {
      PhaseFields f = PhaseFields::from(ph, c.world.home);
      json node;
      Writer pw(node);
      pw.field("skill", f.skill);
      visit_phase(pw, f);
      list.push_back(std::move(node));
    }
    s.node()["phases"] = std::move(list);
  });
  root.object("sensitivity", [&](Writer& s) { visit_sensitivity(s, c.sensitivity); });
  root.object("session", [&](Writer& s) { visit_session(s, c.session); });
  return doc;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("override '" + assignment + "' must look like key.path=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ValidationError("override '" + assignment + "' has an empty key segment");
    path.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->is_object()) throw ValidationError("override '" + key + "' descends into a non-object");
    node = &(*node)[path[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw ValidationError("override '" + key + "' descends into a non-object");
  (*node)[path.back()] = std::move(value);
}

AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json doc = path.empty() ? json::object() : read_config_file(path);
  for (const std::string& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

std::string default_config_path() {
  const char* env = std::getenv("TELETEACH_CONFIG");
  return env == nullptr ? std::string() : std::string(env);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string skill_config_hash(const WorldConfig& world) {
  AppConfig c;
  c.world = world;
  const json doc = config_to_json(c);
  const json relevant = {{"dmp", doc["dmp"]}, {"afo", doc["afo"]}};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(relevant.dump())));
  return buf;
}

}  // namespace teleteach
