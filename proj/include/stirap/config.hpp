#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stirap/ensemble.hpp"
#include "stirap/integrator.hpp"
#include "stirap/linkage.hpp"
#include "stirap/protocols.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

using Json = nlohmann::json;

enum class OutputKind { TrajectoryCsv, SummaryJson, AdiabaticityCsv, PlotSvg, PulseCsv };

const char* to_string(OutputKind kind);

// Level scheme as written in the config: a builder name plus its parameters
// with defaults filled in. "custom" lists levels and couplings explicitly.
struct SchemeSpec {
  std::string type;
  Json params;

  LevelScheme build() const;
  bool operator==(const SchemeSpec&) const = default;
};

struct InitialState {
  enum class Kind { Level, Vector, Ensemble };
  Kind kind = Kind::Level;
  std::size_t level = 0;
  StateVector vector;
  DiagonalEnsemble ensemble;

  bool operator==(const InitialState& o) const {
    return kind == o.kind && level == o.level && vector == o.vector &&
           ensemble.weights == o.ensemble.weights;
  }
};

// Direct propagation of a user-defined scheme and schedule.
struct RawSpec {
  SchemeSpec scheme;
  PulseSchedule pulses;
  double t0 = 0.0;
  double t1 = 1.0;
  InitialState initial;
  std::optional<std::size_t> target_level;

  bool operator==(const RawSpec&) const = default;
};

// Named protocol; params hold every field of the protocol's parameter set.
struct ProtocolSpec {
  std::string name;
  Json params;

  bool operator==(const ProtocolSpec&) const = default;
};

struct SweepAxisSpec {
  std::string path;  // dotted path into the canonical config document
  std::vector<double> values;

  bool operator==(const SweepAxisSpec&) const = default;
};

struct SweepSpec {
  std::string observable;
  std::vector<SweepAxisSpec> axes;  // one or two

  bool operator==(const SweepSpec&) const = default;
};

struct ScenarioConfig {
  std::string id;
  std::string description;
  std::vector<std::string> tags;
  int group = 0;
  std::string mode = "time";  // "time" or "spatial"
  std::optional<RawSpec> raw;
  std::optional<ProtocolSpec> protocol;
  IntegratorConfig integrator;
  std::optional<SweepSpec> sweep;
  std::vector<OutputKind> outputs;

  bool operator==(const ScenarioConfig&) const = default;
};

// Parses and validates. ConfigError messages start with `source` and the
// JSON path of the offending entry.
ScenarioConfig parse_config(const Json& document, const std::string& source = "config");
ScenarioConfig load_config(const std::string& path);
// Canonical document: defaults filled in, sweep axes as explicit value lists.
Json to_json(const ScenarioConfig& config);

Json to_json(const Pulse& pulse);
Pulse pulse_from_json(const Json& j, const std::string& path);

// Sets the numeric entry at a dotted path ("protocol.params.delay",
// "pulses.P.peak", "window.1"). ConfigError when the path does not
// name an existing number.
void set_by_path(Json& document, const std::string& path, double value);

// Runs the configured protocol (integrator overridden by the config's own).
ProtocolResult run_protocol(const ProtocolSpec& spec, const IntegratorConfig& integrator,
                            std::size_t threads);
// Setup of the single propagation a protocol performs, when it has one.
std::optional<Setup> protocol_setup(const ProtocolSpec& spec);

StirapParams stirap_params_from_json(const Json& params);

}  // namespace stirap
