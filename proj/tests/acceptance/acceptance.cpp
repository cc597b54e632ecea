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

// Acceptance checks. Each criterion prints exactly one line,
// "PASS <name>: <measurements>" or "FAIL <name>: <failed clauses>".
// Usage: acceptance [name...]; no names runs them all.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "teleteach/afo.hpp"
#include "teleteach/autonomy.hpp"
#include "teleteach/geometry.hpp"
#include "teleteach/scenario.hpp"
#include "teleteach/sensitivity.hpp"

using namespace teleteach;
namespace fs = std::filesystem;

namespace {

// Reference tables.
constexpr std::array<double, 5> kWidthSweepH = {1, 3, 8, 31, 100};
constexpr std::array<double, 5> kWidthSweepStd = {17.93, 8.44, 4.56, 3.58, 3.47};
constexpr std::array<double, 5> kWidthSweepRms = {2.75, 2.18, 2.20, 2.25, 2.27};
constexpr std::array<double, 5> kForgettingSweepLambda = {0.99, 0.995, 0.999, 0.9995, 0.9999};

// Pinned tolerances.
constexpr double kMagnitudeFactor = 2.0;
constexpr double kWidthSweepSeconds = 60.0;
constexpr int kGeometryPairs = 10000;
constexpr double kRoundTripTol = 1e-9;
constexpr double kNormTol = 1e-9;
constexpr double kLinearityTol = 1e-12;
constexpr double kRateTol = 1e-6;
constexpr double kRateDt = 1e-3;
constexpr double kGeometrySeconds = 5.0;
constexpr int kAutonomySequences = 10000;
constexpr double kMuOneMargin = 1e-9;
constexpr double kMaxPeriodsToMu = 5.0;
constexpr double kMaxPeriodsToEta = 3.0;
constexpr double kMaxRmsMm = 5.0;
constexpr double kMaxRmsRad = 0.05;
constexpr double kInjectionFactor = 2.0;
constexpr double kMaxInjectionLatency = 1.0;
constexpr double kScenarioSeconds = 120.0;
constexpr double kAfoTolerance = 0.05;
constexpr double kAfoSeconds = 20.0;

class Report {
 public:
  explicit Report(std::string name) : name_(std::move(name)) {}
  void check(bool ok, const std::string& clause) {
    if (!ok) failed_.push_back(clause);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool print() const {
    const bool pass = failed_.empty();
    std::string line = (pass ? "PASS " : "FAIL ") + name_ + (pass ? ":" : ": not met:");
    for (const auto& s : pass ? notes_ : failed_) line += " " + s + ";";
    if (!pass && !notes_.empty()) {
      line += " [";
      for (std::size_t i = 0; i < notes_.size(); ++i) line += (i ? "; " : "") + notes_[i];
      line += "]";
    }
    std::cout << line << std::endl;
    return pass;
  }

 private:
  std::string name_;
  std::vector<std::string> failed_, notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

template <typename T>
std::string list(const std::vector<T>& v, const char* f = "%.4g") {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(f, static_cast<double>(v[i]));
  return s + "]";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool strictly_decreasing(const std::vector<SensitivityRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].weight_std < rows[i - 1].weight_std)) return false;
  }
  return true;
}

bool within_factor(double value, double reference) {
  return value >= reference / kMagnitudeFactor && value <= reference * kMagnitudeFactor;
}

bool width_sweep() {
  Report r("width_sweep");
  const auto t0 = std::chrono::steady_clock::now();
  SensitivityConfig cfg;
  cfg.param = "h";
  cfg.values.assign(kWidthSweepH.begin(), kWidthSweepH.end());
  r.check(cfg.dmp.translation.count == 30, "N = 30");
  r.check(cfg.dmp.forgetting == 0.9995, "lambda_fg = 0.9995");
  const auto rows = run_sensitivity(cfg);
  const double elapsed = seconds_since(t0);

  std::vector<double> std_dev, rms;
  for (const auto& row : rows) {
    r.check(row.failure.empty(), "h=" + fmt("%g", row.value) + " ran (" + row.failure + ")");
    std_dev.push_back(row.weight_std);
    rms.push_back(row.rms_error_mm);
  }
  r.check(strictly_decreasing(rows), "weight_std strictly decreasing in h " + list(std_dev));
  r.check(std::max_element(rms.begin(), rms.end()) == rms.begin(), "max RMS at h=1 " + list(rms));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    r.check(within_factor(std_dev[i], kWidthSweepStd[i]),
            "h=" + fmt("%g", kWidthSweepH[i]) + " weight_std " + fmt("%.4g", std_dev[i]) + " within x2 of " +
                fmt("%g", kWidthSweepStd[i]));
    r.check(within_factor(rms[i], kWidthSweepRms[i]),
            "h=" + fmt("%g", kWidthSweepH[i]) + " RMS " + fmt("%.4g", rms[i]) + " mm within x2 of " +
                fmt("%g", kWidthSweepRms[i]));
  }
  r.check(elapsed < kWidthSweepSeconds, "runtime " + fmt("%.2f", elapsed) + " s < 60 s");
  r.note("weight_std " + list(std_dev));
  r.note("rms_mm " + list(rms));
  r.note("runtime " + fmt("%.2f", elapsed) + " s");
  return r.print();
}

bool forgetting_sweep() {
  Report r("forgetting_sweep");
  SensitivityConfig cfg;
  cfg.param = "lambda_fg";
  cfg.dmp.translation.width = cfg.dmp.rotation.width = 31.0;
  cfg.values.assign(kForgettingSweepLambda.begin(), kForgettingSweepLambda.end());
  const auto rows = run_sensitivity(cfg);
  std::vector<double> std_dev, rms;
  for (const auto& row : rows) {
    r.check(row.failure.empty(), "lambda=" + fmt("%g", row.value) + " ran (" + row.failure + ")");
    std_dev.push_back(row.weight_std);
    rms.push_back(row.rms_error_mm);
  }
  r.check(strictly_decreasing(rows), "weight_std strictly decreasing in lambda_fg " + list(std_dev));
  const auto best = std::min_element(rms.begin(), rms.end()) - rms.begin();
  r.check(best > 0 && best + 1 < static_cast<long>(rms.size()), "RMS minimum at an interior lambda " + list(rms));
  r.note("weight_std " + list(std_dev));
  r.note("rms_mm " + list(rms));
  r.note("rms minimum at lambda_fg " + fmt("%g", kForgettingSweepLambda[static_cast<std::size_t>(best)]));
  return r.print();
}

UnitQuaternion random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec4 v;
  do {
    v = {n(rng), n(rng), n(rng), n(rng)};
  } while (v.norm() < 1e-6);
  return UnitQuaternion::normalized(v);
}

bool geometry() {
  Report r("geometry");
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double round_trip = 0.0, norm = 0.0, linearity = 0.0, rate = 0.0;
  int skipped = 0;
  for (int i = 0; i < kGeometryPairs; ++i) {
    const UnitQuaternion q0 = random_quaternion(rng), q1 = random_quaternion(rng);
    if (q0.coeffs().dot(q1.coeffs()) < -1.0 + 1e-12) {
      ++skipped;
      continue;
    }
    const Tangent4 d = log_map(q0, q1);
    const UnitQuaternion back = exp_map(q0, d);
    round_trip = std::max(round_trip, (back.coeffs() - q1.coeffs()).norm());
    norm = std::max(norm, std::abs(back.coeffs().norm() - 1.0));

    const Vec4 a4(u(rng), u(rng), u(rng), u(rng)), b4(u(rng), u(rng), u(rng), u(rng));
    const Tangent4 ta{a4 - q0.coeffs() * q0.coeffs().dot(a4), q0};
    const Tangent4 tb{b4 - q0.coeffs() * q0.coeffs().dot(b4), q0};
    const double alpha = 3.0 * u(rng), beta = 3.0 * u(rng);
    const Vec4 lhs = left_trivialize(q0, Tangent4{alpha * ta.v + beta * tb.v, q0}).v;
    const Vec4 rhs = alpha * left_trivialize(q0, ta).v + beta * left_trivialize(q0, tb).v;
    linearity = std::max(linearity, (lhs - rhs).cwiseAbs().maxCoeff());

    const Vec3 omega(10.0 * u(rng), 10.0 * u(rng), 10.0 * u(rng));
    const UnitQuaternion next = integrate_quat(q0, omega, kRateDt);
    norm = std::max(norm, std::abs(next.coeffs().norm() - 1.0));
    rate = std::max(rate, (quat_derivative(q0, next, kRateDt) - omega).norm());
  }
  const double elapsed = seconds_since(t0);
  r.check(skipped == 0, std::to_string(skipped) + " antipodal pairs");
  r.check(round_trip <= kRoundTripTol, "exp(log) round trip " + fmt("%.3g", round_trip) + " <= 1e-9");
  r.check(norm <= kNormTol, "norm preservation " + fmt("%.3g", norm) + " <= 1e-9");
  r.check(linearity <= kLinearityTol, "trivialization linearity " + fmt("%.3g", linearity) + " <= 1e-12");
  r.check(rate <= kRateTol, "rate recovery " + fmt("%.3g", rate) + " rad/s <= 1e-6");
  r.check(elapsed < kGeometrySeconds, "runtime " + fmt("%.2f", elapsed) + " s < 5 s");
  r.note(std::to_string(kGeometryPairs) + " pairs");
  r.note("round trip " + fmt("%.2e", round_trip));
  r.note("norm " + fmt("%.2e", norm));
  r.note("linearity " + fmt("%.2e", linearity));
  r.note("rate " + fmt("%.2e", rate) + " rad/s");
  r.note("runtime " + fmt("%.2f", elapsed) + " s");
  return r.print();
}

bool autonomy() {
  Report r("autonomy");
  std::mt19937_64 rng(20261);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  long bound_violations = 0, gate_violations = 0, mu_stuck = 0, eta_stuck = 0, steps = 0;
  const double horizon = 300.0;

  for (int seq = 0; seq < kAutonomySequences; ++seq) {
    AllocationConfig c;
    c.rho = uni(0.2, 4.0);
    c.epsilon = uni(1e-3, 0.1);
    c.lambda_err = uni(0.005, 0.1);
    c.lambda_f = uni(2.0, 20.0);
    c.lambda_m = uni(0.5, 5.0);
    const double dt = uni(1e-4, 1e-2);
    double mu = uni(0.0, 1.0), eta = uni(0.0, 1.0);

    auto advance = [&](double err, const Wrench& w) {
      const double i_s = skill_confidence(err, c), i_h = intervention_index(w, c);
      if (mu < 1.0 - kMuOneMargin && eta_rate(eta, mu, i_h, c) > 0.0) ++gate_violations;
      mu = mu_step(mu, i_s, dt, c);
      eta = eta_step(eta, mu, i_h, dt, c);
      if (!(mu >= 0.0 && mu <= 1.0 && eta >= 0.0 && eta <= 1.0)) ++bound_violations;
      ++steps;
    };

    // Arbitrary inputs.
    const int n = static_cast<int>(uni(50, 400));
    for (int k = 0; k < n; ++k) {
      Wrench w;
      w.force = Vec3(uni(-2, 2), uni(-2, 2), uni(-2, 2)) * c.lambda_f;
      w.moment = Vec3(uni(-1, 1), uni(-1, 1), uni(-1, 1)) * c.lambda_m;
      advance(uni(0.0, 3.0) * c.lambda_err, w);
    }
    // Sustained small error, no force.
    double t = 0.0;
    while (!mu_is_one(mu) && t < horizon) {
      advance(uni(0.0, 0.9) * c.lambda_err, Wrench{});
      t += dt;
    }
    if (!mu_is_one(mu)) ++mu_stuck;
    // Sustained force above threshold.
    const double scale = uni(1.1, 4.0);
    t = 0.0;
    while (eta > 0.0 && t < horizon) {
      Wrench w;
      w.force = Vec3(uni(-1, 1), uni(-1, 1), uni(-1, 1)).normalized() * scale * c.lambda_f;
      advance(uni(0.0, 0.9) * c.lambda_err, w);
      t += dt;
    }
    if (eta > 0.0) ++eta_stuck;
  }
  r.check(bound_violations == 0, std::to_string(bound_violations) + " steps left [0,1]");
  r.check(gate_violations == 0, std::to_string(gate_violations) + " steps with eta rising while mu < 1");
  r.check(mu_stuck == 0, std::to_string(mu_stuck) + " sequences where small error did not reach mu = 1");
  r.check(eta_stuck == 0, std::to_string(eta_stuck) + " sequences where force did not reach eta = 0");
  r.note(std::to_string(kAutonomySequences) + " sequences, " + std::to_string(steps) + " steps");
  return r.print();
}

bool scenario() {
  Report r("scenario");
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = ScenarioConfig::default_timeline(WorldConfig{});
  const ScenarioResult res = run_scenario(cfg);
  const double elapsed = seconds_since(t0);
  const double lambda_f = cfg.world.autonomy.lambda_f;

  r.check(res.max_quat_norm_ok, "unit quaternions throughout");
  for (std::size_t i = 0; i < res.phases.size(); ++i) {
    const PhaseSummary& p = res.phases[i];
    const std::string tag = p.skill + ": ";
    r.check(p.periods_to_mu_one && *p.periods_to_mu_one <= kMaxPeriodsToMu,
            tag + "mu = 1 within 5 periods (" +
                (p.periods_to_mu_one ? fmt("%.2f", *p.periods_to_mu_one) : std::string("never")) + ")");
    r.check(p.periods_to_eta_one && *p.periods_to_eta_one <= kMaxPeriodsToEta,
            tag + "eta = 1 within 3 further periods (" +
                (p.periods_to_eta_one ? fmt("%.2f", *p.periods_to_eta_one) : std::string("never")) + ")");
    r.check(p.autonomous_rms_mm && *p.autonomous_rms_mm < kMaxRmsMm,
            tag + "translational RMS < 5 mm (" +
                (p.autonomous_rms_mm ? fmt("%.3f", *p.autonomous_rms_mm) : std::string("none")) + ")");
    r.check(p.autonomous_rms_rad && *p.autonomous_rms_rad < kMaxRmsRad,
            tag + "orientation RMS < 0.05 rad (" +
                (p.autonomous_rms_rad ? fmt("%.4f", *p.autonomous_rms_rad) : std::string("none")) + ")");
    r.note(tag + "mu=1 after " + fmt("%.2f", p.periods_to_mu_one.value_or(NAN)) + " periods, eta=1 after " +
           fmt("%.2f", p.periods_to_eta_one.value_or(NAN)) + " more, RMS " +
           fmt("%.2f", p.autonomous_rms_mm.value_or(NAN)) + " mm / " +
           fmt("%.4f", p.autonomous_rms_rad.value_or(NAN)) + " rad");
    if (i == 0) continue;
    const ScenarioPhase& ph = cfg.phases[i];
    r.check(ph.injection_force >= kInjectionFactor * lambda_f, tag + "injection push >= 2 lambda_f");
    r.check(p.peak_hand_force >= kInjectionFactor * lambda_f,
            tag + "peak hand force " + fmt("%.1f", p.peak_hand_force) + " N >= 2 lambda_f");
    r.check(p.injection_latency && *p.injection_latency < kMaxInjectionLatency,
            tag + "eta < 0.1 within 1 s of injection (" +
                (p.injection_latency ? fmt("%.3f", *p.injection_latency) : std::string("never")) + ")");
    r.check(p.t_relearn.has_value(), tag + "learning restarted");
    r.note(tag + "injection latency " + fmt("%.3f", p.injection_latency.value_or(NAN)) + " s, relearn at t=" +
           fmt("%.3f", p.t_relearn.value_or(NAN)) + " s");
  }
  r.check(res.phases.size() == 2, "two skills taught");
  r.check(elapsed < kScenarioSeconds, "runtime " + fmt("%.2f", elapsed) + " s < 120 s");
  r.note("runtime " + fmt("%.2f", elapsed) + " s");
  return r.print();
}

bool afo() {
  Report r("afo");
  constexpr double kTarget = 2.0 * 2.0 * std::numbers::pi * 0.3;
  const double dt = 2e-3;
  FrequencyEstimator fe{AfoConfig{}};
  auto feed = [&](double t, double mu) {
    Vec6 x = Vec6::Zero();
    x[0] = 0.45 + 0.05 * std::sin(kTarget * t);
    fe.update(x, mu, dt);
  };
  long k = 0;
  const long n = std::lround(kAfoSeconds / dt);
  for (; k < n; ++k) feed(k * dt, 0.0);
  const double err = std::abs(fe.omega() / kTarget - 1.0);
  r.check(err <= kAfoTolerance, "Omega within 5% after 20 s (" + fmt("%.4f", fe.omega()) + " rad/s)");

  for (long j = 0; j < 1000; ++j, ++k) feed(k * dt, static_cast<double>(j) / 1000.0);
  feed(k * dt, 1.0);
  ++k;
  const double frozen = fe.omega();
  bool exact = true;
  for (long j = 0; j < 10000; ++j, ++k) {
    Vec6 x = Vec6::Zero();
    x[0] = 0.3 * std::sin(7.0 * k * dt);
    fe.update(x, 1.0, dt);
    if (fe.omega() != frozen) exact = false;
  }
  r.check(exact, "Omega bit-identical over 20 s at mu = 1");
  r.note("Omega " + fmt("%.5f", frozen) + " rad/s vs " + fmt("%.5f", kTarget) + " (error " +
         fmt("%.3f", 100.0 * err) + "%)");
  r.note("frozen exactly for 10000 updates");
  return r.print();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool determinism() {
  Report r("determinism");
  const fs::path root = fs::temp_directory_path() / "teleteach_acceptance_determinism";
  fs::remove_all(root);
  const std::string cli = TELETEACH_CLI;
  const std::string common = " --seed 7 --set channel.drop_probability=0.05 --set channel.delay_ticks=2";
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    const int s1 = std::system((cli + " scenario --out " + dir.string() + common + " >/dev/null 2>&1").c_str());
    const int s2 = std::system(
        (cli + " sensitivity --param lambda_fg --values 0.99,0.999,0.9999 --out " + dir.string() + " >/dev/null 2>&1")
            .c_str());
    r.check(s1 == 0, std::string("scenario run ") + run + " exited 0");
    r.check(s2 == 0, std::string("sensitivity run ") + run + " exited 0");
  }
  std::size_t bytes = 0;
  for (const char* file : {"telemetry.ndjson", "summary.json", "skill.json", "sensitivity.csv"}) {
    const std::string a = slurp(root / "a" / file), b = slurp(root / "b" / file);
    r.check(!a.empty(), std::string(file) + " written");
    r.check(a == b, std::string(file) + " byte-identical");
    bytes += a.size();
  }
  r.note("4 files, " + std::to_string(bytes) + " bytes each run, identical");
  fs::remove_all(root);
  return r.print();
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<bool()>> criteria = {
      {"width_sweep", width_sweep}, {"forgetting_sweep", forgetting_sweep}, {"geometry", geometry},       {"autonomy", autonomy},
      {"scenario", scenario}, {"afo", afo},   {"determinism", determinism},
  };
  std::vector<std::string> names(argv + 1, argv + argc);
  if (names.empty()) {
    names = {"width_sweep", "forgetting_sweep", "geometry", "autonomy", "scenario", "afo", "determinism"};
  }
  bool ok = true;
  for (const std::string& name : names) {
    const auto it = criteria.find(name);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion '" << name << "'\n";
      return 2;
    }
    try {
      ok = it->second() && ok;
    } catch (const std::exception& e) {
      std::cout << "FAIL " << name << ": exception: " << e.what() << std::endl;
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
