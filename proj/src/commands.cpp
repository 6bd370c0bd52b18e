#include "stirap/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "stirap/errors.hpp"
#include "stirap/output.hpp"
#include "stirap/sweep.hpp"

#ifndef STIRAP_VERSION
#define STIRAP_VERSION "0.0.0"
#endif
#ifndef STIRAP_SCENARIO_DIR
#define STIRAP_SCENARIO_DIR "scenarios"
#endif

namespace stirap {
namespace fs = std::filesystem;
namespace {

constexpr const char* kToolName = "stirap-lab";

Json number_or_marker(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

// Files of one command invocation, kept in memory until the manifest is known.
class OutputSet {
 public:
  explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, const std::function<void(std::ostream&)>& writer) {
    std::ostringstream s;
    writer(s);
    files_.emplace_back(name, s.str());
  }

  // Writes every file plus the summary, whose manifest includes its own size.
  void finish(Json summary, bool with_summary) {
    fs::create_directories(dir_);
    std::string text;
    if (with_summary) {
      Json manifest = Json::array();
      for (const auto& [name, body] : files_) {
        manifest.push_back({{"name", name}, {"bytes", body.size()}});
      }
      manifest.push_back({{"name", "summary.json"}, {"bytes", 0}});
      // The summary's length depends on the digits of its own length; iterate
      // to the fixed point (two or three rounds).
      for (int round = 0; round < 8; ++round) {
        summary["files"] = manifest;
        text = summary.dump(2) + "\n";
        if (manifest.back()["bytes"] == text.size()) break;
        manifest.back()["bytes"] = text.size();
      }
    }
    for (const auto& [name, body] : files_) write(name, body);
    if (with_summary) write("summary.json", text);
  }

 private:
  void write(const std::string& name, const std::string& body) const {
    std::ofstream f(fs::path(dir_) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (fs::path(dir_) / name).string());
    f << body;
  }

  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

Json summary_header(const std::string& command, const ScenarioConfig& c) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = STIRAP_VERSION;
  j["command"] = command;
  j["scenario"] = c.id;
  j["config_hash"] = config_hash(c);
  return j;
}

void stamp_wall_time(Json& summary, const CommandOptions& o,
                     std::chrono::steady_clock::time_point start) {
  if (o.deterministic) {
    summary["wall_time_s"] = nullptr;
  } else {
    summary["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
}

Json scalars_json(const std::map<std::string, double>& scalars) {
  Json j = Json::object();
  for (const auto& [k, v] : scalars) j[k] = number_or_marker(v);
  return j;
}

bool wants(const ScenarioConfig& c, OutputKind kind) {
  return std::find(c.outputs.begin(), c.outputs.end(), kind) != c.outputs.end();
}

void write_error_json(const std::string& dir, const std::string& type, const std::string& message,
                      std::optional<double> time) {
  try {
    fs::create_directories(dir);
    Json j;
    j["tool"] = kToolName;
    j["version"] = STIRAP_VERSION;
    j["error"] = type;
    j["message"] = message;
    if (time) j["time"] = number_or_marker(*time);
    std::ofstream(fs::path(dir) / "error.json") << j.dump(2) << "\n";
  } catch (const std::exception&) {
    // The exit code still reports the failure.
  }
}

// Maps exceptions onto exit codes.
int guarded(const std::string& dir, std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const StiffnessError& e) {
    err << "numeric error: " << e.what() << "\n";
    write_error_json(dir, "stiffness", e.what(), e.time());
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    write_error_json(dir, "numeric", e.what(), std::nullopt);
    return kExitNumeric;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  }
}

// Schedule window of the single propagation a scenario performs.
std::optional<Setup> analysis_setup(const ScenarioConfig& c) {
  if (c.raw) {
    return Setup{c.raw->scheme.build(), c.raw->pulses, c.raw->t0, c.raw->t1, StateVector()};
  }
  return protocol_setup(*c.protocol);
}

void add_sweep_scalars(Json& summary, const SweepResult& s) {
  summary["observable"] = s.observable;
  summary["axes"] = Json::array();
  summary["axes"].push_back({{"path", s.axis1.name}, {"points", s.axis1.values.size()}});
  if (s.axis2) summary["axes"].push_back({{"path", s.axis2->name}, {"points", s.axis2->values.size()}});
  std::map<std::string, double> scalars{{"grid_min", s.grid.minCoeff()},
                                        {"grid_max", s.grid.maxCoeff()},
                                        {"grid_points", static_cast<double>(s.grid.size())}};
  if (!s.axis2) {
    std::vector<double> column(s.axis1.values.size());
    for (std::size_t i = 0; i < column.size(); ++i) column[i] = s.at(i);
    scalars["plateau_width_0.99"] = plateau_width(s.axis1.values, column, 0.99);
  }
  summary["sweep_scalars"] = scalars_json(scalars);
}

SweepResult sweep_with_progress(const ScenarioConfig& c, std::size_t threads, std::ostream& err) {
  std::size_t last_percent = 0;
  return run_sweep(c, threads, [&](std::size_t done, std::size_t total) {
    const std::size_t percent = done * 100 / total;
    if (percent >= last_percent + 10 || done == total) {
      last_percent = percent;
      err << "sweep: " << done << "/" << total << " points\n";
    }
  });
}

}  // namespace

std::string scenario_directory() {
  if (const char* env = std::getenv("STIRAP_SCENARIO_DIR"); env && *env) return env;
  return STIRAP_SCENARIO_DIR;
}

std::vector<ScenarioEntry> list_scenarios() {
  std::vector<ScenarioEntry> out;
  const fs::path dir = scenario_directory();
  if (!fs::is_directory(dir)) throw ConfigError("scenario directory not found: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    const ScenarioConfig c = load_config(entry.path().string());
    out.push_back({c.id.empty() ? entry.path().stem().string() : c.id, entry.path().string(),
                   c.description, c.tags, c.group});
  }
  std::sort(out.begin(), out.end(),
            [](const ScenarioEntry& a, const ScenarioEntry& b) { return a.id < b.id; });
  return out;
}

ScenarioConfig resolve_config(const std::string& path_or_id) {
  if (fs::is_regular_file(path_or_id)) return load_config(path_or_id);
  const fs::path bundled = fs::path(scenario_directory()) / (path_or_id + ".json");
  if (path_or_id.find('/') == std::string::npos && fs::is_regular_file(bundled)) {
    return load_config(bundled.string());
  }
  throw ConfigError(path_or_id + ": no such config file or bundled scenario id");
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int cmd_run(const std::string& config, const CommandOptions& o, std::ostream& err) {
  return guarded(o.out_dir, err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioConfig c = resolve_config(config);
    const ScenarioRun run = run_scenario(c, o.threads);
    std::optional<SweepResult> sweep;
    if (c.sweep) sweep = sweep_with_progress(c, o.threads, err);

    OutputSet files(o.out_dir);
    std::vector<std::string> notes = run.result.notes;
    const auto& traj = run.result.trajectory;
    if (wants(c, OutputKind::TrajectoryCsv)) {
      if (traj) {
        files.add("trajectory.csv", [&](std::ostream& s) { write_trajectory_csv(s, *traj); });
      } else {
        notes.push_back("trajectory_csv skipped: this run has no single trajectory");
      }
    }
    if (wants(c, OutputKind::PlotSvg)) {
      if (traj) {
        files.add("populations.svg", [&](std::ostream& s) {
          write_population_svg(s, *traj, c.id.empty() ? run.result.label : c.id);
        });
      } else {
        notes.push_back("plot_svg skipped: this run has no single trajectory");
      }
    }
    if (wants(c, OutputKind::AdiabaticityCsv)) {
      if (run.setup && run.setup->scheme.is_three_level_raman()) {
        const std::size_t samples = traj ? traj->size() : c.integrator.sample_count;
        const auto report =
            adiabaticity_report(run.setup->scheme, run.setup->schedule, run.setup->t0, run.setup->t1, samples);
        files.add("adiabaticity.csv", [&](std::ostream& s) { write_adiabaticity_csv(s, report); });
      } else {
        notes.push_back("adiabaticity_csv skipped: not a three-level Raman propagation");
      }
    }
    if (wants(c, OutputKind::PulseCsv)) {
      if (run.setup) {
        files.add("pulses.csv", [&](std::ostream& s) {
          write_schedule_csv(s, run.setup->schedule, run.setup->t0, run.setup->t1, c.integrator.sample_count);
        });
        for (const auto& [id, pulse] : run.setup->schedule.entries()) {
          if (const auto* n = std::get_if<NumericPulse>(&pulse)) {
            files.add("pulse_" + id + ".csv", [&](std::ostream& s) { write_pulse_csv(s, *n); });
          }
        }
      } else {
        notes.push_back("pulse_csv skipped: this protocol has no single schedule");
      }
    }
    if (sweep) files.add("sweep.csv", [&](std::ostream& s) { write_sweep_csv(s, *sweep); });

    Json summary = summary_header("run", c);
    stamp_wall_time(summary, o, start);
    summary["label"] = run.result.label;
    summary["scalars"] = scalars_json(run.result.scalars);
    if (run.ensemble) {
      summary["initial_spectrum"] = run.ensemble->initial_spectrum;
      summary["final_spectrum"] = run.ensemble->final_spectrum;
    }
    if (run.result.gate) {
      Json g = Json::array();
      for (int i = 0; i < 2; ++i) {
        Json row = Json::array();
        for (int j = 0; j < 2; ++j) row.push_back({(*run.result.gate)(i, j).real(), (*run.result.gate)(i, j).imag()});
        g.push_back(row);
      }
      summary["gate"] = g;
    }
    if (sweep) add_sweep_scalars(summary, *sweep);
    if (traj) summary["integrator_steps"] = {{"accepted", traj->stats.accepted}, {"rejected", traj->stats.rejected}};
    summary["notes"] = notes;
    files.finish(summary, wants(c, OutputKind::SummaryJson));
    return kExitOk;
  });
}

int cmd_sweep(const std::string& config, const CommandOptions& o, std::ostream& err) {
  return guarded(o.out_dir, err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioConfig c = resolve_config(config);
    if (!c.sweep) throw ConfigError(config + ": sweep: missing sweep block");
    const SweepResult s = sweep_with_progress(c, o.threads, err);
    OutputSet files(o.out_dir);
    files.add("sweep.csv", [&](std::ostream& out) { write_sweep_csv(out, s); });
    Json summary = summary_header("sweep", c);
    stamp_wall_time(summary, o, start);
    add_sweep_scalars(summary, s);
    files.finish(summary, true);
    return kExitOk;
  });
}

int cmd_analyze(const std::string& config, const CommandOptions& o, std::ostream& err) {
  return guarded(o.out_dir, err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioConfig c = resolve_config(config);
    const auto setup = analysis_setup(c);
    if (!setup) throw UnsupportedError(config + ": protocol has no single schedule to analyze");
    const auto report = adiabaticity_report(setup->scheme, setup->schedule, setup->t0, setup->t1,
                                            c.integrator.sample_count);
    OutputSet files(o.out_dir);
    files.add("adiabaticity.csv", [&](std::ostream& s) { write_adiabaticity_csv(s, report); });
    Json summary = summary_header("analyze", c);
    stamp_wall_time(summary, o, start);
    double min_ratio = kAdiabaticInfinity;
    for (double r : report.ratio) min_ratio = std::min(min_ratio, r);
    summary["scalars"] = scalars_json({{"global_area", report.global.area},
                                       {"overlap_time", report.global.overlap_time},
                                       {"mean_rms", report.global.mean_rms},
                                       {"no_overlap", report.global.empty ? 1.0 : 0.0},
                                       {"min_ratio", min_ratio}});
    files.finish(summary, true);
    return kExitOk;
  });
}

int cmd_list_scenarios(std::ostream& out, std::ostream& err) {
  return guarded(".", err, [&] {
    for (const auto& s : list_scenarios()) {
      std::string tags;
      for (const auto& t : s.tags) tags += (tags.empty() ? "" : ",") + t;
      out << s.id << "\tgroup " << s.group << "\t[" << tags << "]\t" << s.description << "\n";
    }
    return kExitOk;
  });
}

}  // namespace stirap
