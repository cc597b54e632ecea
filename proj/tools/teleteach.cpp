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

// teleteach command-line entry point.
//
//   teleteach sensitivity --param h --values 1,3,8,31,100 [--config F] [--out D]
//   teleteach scenario [--config F] [--out D]
//   teleteach teach-serve [--port P] [--config F]
//   teleteach skill export F [--config C]
//   teleteach skill import F
//
// Exit status: 0 success, 1 invalid input, 2 the simulation diverged.

#include <pthread.h>

#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "teleteach/config.hpp"
#include "teleteach/server.hpp"
#include "teleteach/skill_file.hpp"
#include "teleteach/telemetry.hpp"
#include "teleteach/websocket.hpp"

namespace fs = std::filesystem;
using namespace teleteach;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitDiverged = 2;

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App& app) {
    app.add_option("--config", config, "JSON config file (default: $TELETEACH_CONFIG)");
    app.add_option("--set", overrides, "Override a config key, e.g. --set dmp.h=31")->type_name("KEY=VALUE");
    app.add_option("--seed", seed, "Override world.seed");
  }

  AppConfig load() const {
    std::vector<std::string> all = overrides;
    if (seed) all.push_back("world.seed=" + std::to_string(*seed));
    return load_config(config.empty() ? default_config_path() : config, all);
  }
};

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  out.close();
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

int cmd_sensitivity(const Common& common, const std::string& param, const std::vector<double>& values,
                    const std::string& out_dir) {
  AppConfig cfg = common.load();
  SensitivityConfig s = cfg.sensitivity;
  if (!param.empty()) s.param = param;
  if (!values.empty()) s.values = values;
  s.validate();

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<SensitivityRow> rows = run_sensitivity(s);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string csv = sensitivity_csv(rows);
  if (out_dir.empty()) {
    std::cout << csv;
  } else {
    write_file(prepare_dir(out_dir) / "sensitivity.csv", csv);
  }
  int failed = 0;
  for (const SensitivityRow& r : rows) {
    if (!r.failure.empty()) {
      std::cerr << "sensitivity: " << s.param << " = " << r.value << " failed: " << r.failure << "\n";
      ++failed;
    }
  }
  std::cerr << "sensitivity: " << rows.size() << " runs in " << secs << " s\n";
  return failed > 0 ? kExitDiverged : kExitOk;
}

// Runs the configured scenario, capturing telemetry.v1 when asked.
ScenarioResult run_with_outputs(const AppConfig& cfg, std::string* telemetry) {
  std::ostringstream ndjson;
  TelemetryWriter writer(ndjson, telemetry_header(cfg.world, cfg.scenario.telemetry_decimation));
  ScenarioResult result =
      run_scenario(cfg.scenario, telemetry ? FrameSink([&](const TelemetryFrame& f) { writer.write(f); }) : FrameSink());
  if (telemetry) *telemetry = ndjson.str();
  return result;
}

int cmd_scenario(const Common& common, const std::string& out_dir, std::optional<int> decimation) {
  AppConfig cfg = common.load();
  if (decimation) {
    cfg.scenario.telemetry_decimation = *decimation;
    cfg.scenario.validate();
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::string ndjson;
  const ScenarioResult result = run_with_outputs(cfg, out_dir.empty() ? nullptr : &ndjson);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string summary = scenario_summary(result).dump(2) + "\n";
  if (out_dir.empty()) {
    std::cout << summary;
  } else {
    const fs::path dir = prepare_dir(out_dir);
    write_file(dir / "telemetry.ndjson", ndjson);
    write_file(dir / "summary.json", summary);
    write_file(dir / "skill.json", skill_document(capture_skill(result.learner, cfg.world)));
  }
  std::cerr << "scenario: " << cfg.scenario.duration << " s simulated in " << secs << " s\n";
  return kExitOk;
}

int cmd_serve(const Common& common, std::optional<int> port, const std::string& host,
              const std::string& static_root, std::optional<double> speed) {
  AppConfig cfg = common.load();
  if (port) cfg.session.port = *port;
  if (!host.empty()) cfg.session.host = host;
  if (!static_root.empty()) cfg.session.static_root = static_root;
  if (speed) cfg.session.speed = *speed;
  cfg.session.validate();

  // Threads inherit the mask, so only sigwait below sees these.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  SessionServer server(cfg.world, cfg.session);
  const int bound = server.start();
  std::cerr << "teach-serve: http://" << cfg.session.host << ":" << bound << "/ (session at /session)\n";
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  const ServerStats st = server.stats();
  std::cerr << "teach-serve: stopped after " << st.ticks << " ticks, " << st.telemetry_dropped
            << " telemetry frames dropped\n";
  return kExitOk;
}

int cmd_skill_export(const Common& common, const std::string& path) {
  const AppConfig cfg = common.load();
  const ScenarioResult result = run_with_outputs(cfg, nullptr);
  write_skill_file(path, capture_skill(result.learner, cfg.world));
  std::cerr << "skill: wrote " << path << "\n";
  return kExitOk;
}

int cmd_skill_import(const std::string& path, const std::string& out) {
  const SkillFile skill = read_skill_file(path);
  std::cout << "schema " << kSkillSchema << "\n"
            << "config_hash " << skill.config_hash << "\n"
            << "omega " << format_double(skill.omega) << " rad/s\n"
            << "basis " << skill.translation.count << " x 6\n";
  if (!out.empty()) write_skill_file(out, skill);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("teleteach: tele-teaching simulation, experiments and session server");
  app.require_subcommand(1);

  Common sens_common, scen_common, serve_common, export_common;

  CLI::App* sens = app.add_subcommand("sensitivity", "Sweep a learner hyperparameter on the toy signal");
  std::string param, sens_out;
  std::vector<double> values;
  sens->add_option("--param", param, "h or lambda_fg")->check(CLI::IsMember({"h", "lambda_fg"}));
  sens->add_option("--values", values, "Comma-separated sweep values")->delimiter(',');
  sens->add_option("--out", sens_out, "Write sensitivity.csv here instead of stdout");
  sens_common.attach(*sens);

  CLI::App* scen = app.add_subcommand("scenario", "Run the scripted teach / execute / re-teach timeline");
  std::string scen_out;
  std::optional<int> decimation;
  scen->add_option("--out", scen_out, "Write telemetry.ndjson, summary.json and skill.json here");
  scen->add_option("--decimation", decimation, "Keep every n-th frame in telemetry.ndjson");
  scen_common.attach(*scen);

  CLI::App* serve = app.add_subcommand("teach-serve", "Serve the interactive session over WebSocket");
  std::optional<int> port;
  std::string host, static_root;
  std::optional<double> speed;
  serve->add_option("--port", port, "Listen port (0 picks a free one)");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--static-root", static_root, "Directory served over HTTP");
  serve->add_option("--speed", speed, "Simulated seconds per wall second, 0 unthrottled");
  serve_common.attach(*serve);

  CLI::App* skill = app.add_subcommand("skill", "Export or import a learned skill (skill.v1)");
  skill->require_subcommand(1);
  CLI::App* exp = skill->add_subcommand("export", "Run the scenario and save the final skill");
  std::string export_path;
  exp->add_option("file", export_path, "Output skill file")->required();
  export_common.attach(*exp);
  CLI::App* imp = skill->add_subcommand("import", "Validate a skill file and print a summary");
  std::string import_path, import_out;
  imp->add_option("file", import_path, "Skill file")->required();
  imp->add_option("--out", import_out, "Re-serialize the validated skill here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (*sens) return cmd_sensitivity(sens_common, param, values, sens_out);
    if (*scen) return cmd_scenario(scen_common, scen_out, decimation);
    if (*serve) return cmd_serve(serve_common, port, host, static_root, speed);
    if (*exp) return cmd_skill_export(export_common, export_path);
    if (*imp) return cmd_skill_import(import_path, import_out);
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
