#include <doctest.h>

#include <filesystem>

#include "stirap/commands.hpp"
#include "stirap/config.hpp"
#include "stirap/errors.hpp"

using namespace stirap;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(STIRAP_TEST_DATA) + "/" + name; }

std::string config_error(const Json& doc) {
  try {
    parse_config(doc, "doc");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("round trip is a fixed point for every bundled scenario") {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(STIRAP_SCENARIOS)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const ScenarioConfig first = load_config(entry.path().string());
    const Json canonical = to_json(first);
    const ScenarioConfig second = parse_config(canonical);
    CHECK(second == first);
    CHECK(to_json(second) == canonical);
    ++count;
  }
  CHECK(count == 12);
}

TEST_CASE("raw config with every feature round-trips") {
  const ScenarioConfig c = load_config(data("raw_everything.json"));
  REQUIRE(c.raw);
  CHECK(c.raw->scheme.type == "custom");
  CHECK(c.raw->pulses.time_origin() == 0.5);
  CHECK(std::holds_alternative<NumericPulse>(c.raw->pulses.at("S")));
  CHECK(c.raw->initial.kind == InitialState::Kind::Vector);
  CHECK(c.raw->initial.vector(2) == Complex(0.0, 0.8));
  CHECK(c.integrator.method == IntegrationMethod::ClassicalRk4);
  CHECK(c.outputs.size() == 5);
  const LevelScheme scheme = c.raw->scheme.build();
  CHECK(scheme.couplings()[1].strength_scale == 2.0);
  CHECK(parse_config(to_json(c)) == c);
}

TEST_CASE("protocol parameters are default-filled") {
  const ScenarioConfig c = parse_config(Json::parse(R"({"protocol": {"name": "stirap"}})"));
  REQUIRE(c.protocol);
  CHECK(c.protocol->params["peak_pump"] == 50.0);
  CHECK(c.protocol->params["delay"] == 1.1);
  const StirapParams p = stirap_params_from_json(c.protocol->params);
  CHECK(p.peak_stokes == 50.0);
  CHECK(c.outputs.size() == 2);
}

TEST_CASE("errors name the offending path") {
  CHECK(config_error(Json::parse(R"({"protocol": {"name": "stirap", "params": {"peek": 1}}})"))
            .find("protocol.params.peek") != std::string::npos);
  CHECK(config_error(Json::parse(R"({"protocol": {"name": "stirap", "params": {"delay": "x"}}})"))
            .find("protocol.params.delay") != std::string::npos);
  CHECK(config_error(Json::parse(R"({"protocol": {"name": "warp"}})")).find("protocol.name") !=
        std::string::npos);
  const Json raw = Json::parse(R"({
    "scheme": {"type": "lambda"},
    "pulses": {"P": {"kind": "gaussian", "peak": 1, "width": -1}, "S": {"kind": "constant", "peak": 1}},
    "window": [0, 1], "initial_state": {"level": 0}})");
  CHECK(config_error(raw).find("pulses.P") != std::string::npos);
  Json missing = raw;
  missing["pulses"].erase("S");
  missing["pulses"]["P"]["width"] = 1;
  CHECK(config_error(missing).find("unresolved pulse id 'S'") != std::string::npos);
  Json bad_level = missing;
  bad_level["pulses"]["S"] = {{"kind", "constant"}, {"peak", 1}};
  bad_level["initial_state"]["level"] = 5;
  CHECK(config_error(bad_level).find("initial_state.level") != std::string::npos);
  CHECK(config_error(Json::parse(R"({"outputs": ["trajectory_csv"]})")).find("protocol") !=
        std::string::npos);
}

TEST_CASE("malformed JSON reports its location") {
  try {
    load_config(data("malformed.json"));
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("malformed.json") != std::string::npos);
    CHECK(what.find("line 2") != std::string::npos);
  }
}

TEST_CASE("exactly one of protocol and raw propagation") {
  Json both = Json::parse(R"({"protocol": {"name": "stirap"}, "window": [0, 1]})");
  CHECK(config_error(both).find("not both") != std::string::npos);
  CHECK_FALSE(config_error(Json::object()).empty());
}

TEST_CASE("sweep axes") {
  CHECK_THROWS_AS(load_config(data("empty_axis.json")), ConfigError);
  const ScenarioConfig c = load_config(data("delay_sweep.json"));
  REQUIRE(c.sweep);
  CHECK(c.sweep->axes[0].values.size() == 41);
  CHECK(c.sweep->axes[0].values.back() == 3.0);
  Json bad = to_json(c);
  bad["sweep"]["axes"][0]["path"] = "protocol.params.nothing";
  CHECK(config_error(bad).find("sweep.axes.0.path") != std::string::npos);
}

TEST_CASE("set_by_path edits numbers only") {
  Json doc = Json::parse(R"({"a": {"b": [1.0, 2.0]}, "n": 3, "s": "x"})");
  set_by_path(doc, "a.b.1", 5.5);
  CHECK(doc["a"]["b"][1] == 5.5);
  set_by_path(doc, "n", 4.0);
  CHECK(doc["n"] == 4);
  CHECK_THROWS_AS(set_by_path(doc, "n", 4.5), ConfigError);
  CHECK_THROWS_AS(set_by_path(doc, "s", 1.0), ConfigError);
  CHECK_THROWS_AS(set_by_path(doc, "a.c", 1.0), ConfigError);
  CHECK_THROWS_AS(set_by_path(doc, "a.b.7", 1.0), ConfigError);
}

TEST_CASE("cavity schemes get their vacuum coupling") {
  const Json doc = Json::parse(R"({
    "scheme": {"type": "cavity_lambda", "g": 1.5},
    "pulses": {"drive": {"kind": "gaussian", "peak": 10, "width": 20}},
    "window": [-60, 60], "initial_state": {"level": 0}})");
  const ScenarioConfig c = parse_config(doc);
  REQUIRE(c.raw);
  CHECK(std::get<PulseShape>(c.raw->pulses.at("cavity")).peak == 3.0);
}

TEST_CASE("pulse JSON helpers") {
  const Pulse p = PulseShape::sum({PulseShape::gaussian(1, 2, 3, 0.5), PulseShape::constant(2)}, 0.1);
  CHECK(pulse_from_json(to_json(p), "p") == p);
  CHECK_THROWS_AS(pulse_from_json(Json::parse(R"({"kind": "zigzag"})"), "p"), ConfigError);
}

TEST_CASE("config hash follows the canonical document") {
  const ScenarioConfig a = parse_config(Json::parse(R"({"protocol": {"name": "stirap"}})"));
  const ScenarioConfig b =
      parse_config(Json::parse(R"({"protocol": {"name": "stirap", "params": {"delay": 1.1}}})"));
  const ScenarioConfig c =
      parse_config(Json::parse(R"({"protocol": {"name": "stirap", "params": {"delay": 1.2}}})"));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 16);
}
