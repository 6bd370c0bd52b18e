#include "stirap/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "stirap/errors.hpp"

namespace stirap {
namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Error context shared by one parse: the source name prefixes every message.
struct Context {
  std::string source;

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ConfigError(source + ": " + (path.empty() ? std::string("<root>") : path) + ": " + message);
  }
};

// Typed access to one JSON object that rejects unknown keys on finish().
class Obj {
 public:
  Obj(const Json& j, std::string path, const Context& ctx) : j_(j), path_(std::move(path)), ctx_(ctx) {
    if (!j.is_object()) ctx.fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string at(const std::string& key) const { return join(path_, key); }
  const Json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) ctx_.fail(at(key), "missing required entry");
    return j_.at(key);
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    used_.insert(key);
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      ctx_.fail(at(key), "missing required number");
    }
    const Json& v = j_.at(key);
    if (!v.is_number()) ctx_.fail(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) ctx_.fail(at(key), "expected a finite number");
    return x;
  }

  std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) {
    used_.insert(key);
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      ctx_.fail(at(key), "missing required integer");
    }
    const Json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      ctx_.fail(at(key), "expected a nonnegative integer");
    }
    return v.get<std::size_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    if (!j_.at(key).is_boolean()) ctx_.fail(at(key), "expected true or false");
    return j_.at(key).get<bool>();
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    used_.insert(key);
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      ctx_.fail(at(key), "missing required string");
    }
    if (!j_.at(key).is_string()) ctx_.fail(at(key), "expected a string");
    return j_.at(key).get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_array()) ctx_.fail(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) ctx_.fail(at(key) + "." + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
      if (!std::isfinite(out.back())) {
        ctx_.fail(at(key) + "." + std::to_string(i), "expected a finite number");
      }
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) ctx_.fail(join(path_, it.key()), "unknown entry");
    }
  }

  const Context& ctx() const { return ctx_; }
  const std::string& path() const { return path_; }

 private:
  const Json& j_;
  std::string path_;
  const Context& ctx_;
  std::set<std::string> used_;
};

Complex complex_from(const Json& v, const std::string& path, const Context& ctx) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    ctx.fail(path, "expected a complex number written as [re, im]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Json complex_to(Complex z) { return Json::array({z.real(), z.imag()}); }

// ---- pulses ---------------------------------------------------------------

const std::map<std::string, PulseKind>& kind_names() {
  static const std::map<std::string, PulseKind> names = {
      {"gaussian", PulseKind::Gaussian}, {"sin_squared", PulseKind::SinSquared},
      {"constant", PulseKind::Constant}, {"square", PulseKind::Square},
      {"sinusoid", PulseKind::Sinusoid}, {"sum", PulseKind::Sum}};
  return names;
}

std::string kind_name(PulseKind k) {
  for (const auto& [name, kind] : kind_names()) {
    if (kind == k) return name;
  }
  return "unknown";
}

PulseShape shape_from(const Json& j, const std::string& path, const Context& ctx) {
  Obj o(j, path, ctx);
  const std::string kind = o.text("kind");
  auto it = kind_names().find(kind);
  if (it == kind_names().end()) ctx.fail(o.at("kind"), "unknown pulse kind '" + kind + "'");
  PulseShape s;
  s.kind = it->second;
  s.phase = o.number("phase", 0.0);
  switch (s.kind) {
    case PulseKind::Constant:
      s.peak = o.number("peak");
      break;
    case PulseKind::Sinusoid:
      s.peak = o.number("peak");
      s.frequency = o.number("frequency");
      s.center = o.number("center", 0.0);
      break;
    case PulseKind::Sum: {
      const Json& comps = o.raw("components");
      if (!comps.is_array() || comps.empty()) ctx.fail(o.at("components"), "expected a nonempty array");
      for (std::size_t i = 0; i < comps.size(); ++i) {
        s.components.push_back(shape_from(comps[i], o.at("components") + "." + std::to_string(i), ctx));
      }
      break;
    }
    default:
      s.peak = o.number("peak");
      s.center = o.number("center", 0.0);
      s.width = o.number("width");
      break;
  }
  o.finish();
  try {
    validate(s);
  } catch (const ConfigError& e) {
    ctx.fail(path, e.what());
  }
  return s;
}

Json shape_to(const PulseShape& s) {
  Json j;
  j["kind"] = kind_name(s.kind);
  switch (s.kind) {
    case PulseKind::Constant:
      j["peak"] = s.peak;
      break;
    case PulseKind::Sinusoid:
      j["peak"] = s.peak;
      j["frequency"] = s.frequency;
      j["center"] = s.center;
      break;
    case PulseKind::Sum:
      j["components"] = Json::array();
      for (const auto& c : s.components) j["components"].push_back(shape_to(c));
      break;
    default:
      j["peak"] = s.peak;
      j["center"] = s.center;
      j["width"] = s.width;
      break;
  }
  j["phase"] = s.phase;
  return j;
}

Pulse pulse_from(const Json& j, const std::string& path, const Context& ctx) {
  if (j.is_object() && j.contains("kind") && j.at("kind") == "numeric") {
    Obj o(j, path, ctx);
    o.text("kind");
    std::vector<double> times = o.numbers("times");
    const Json& samples = o.raw("samples");
    if (!samples.is_array()) ctx.fail(o.at("samples"), "expected an array of [re, im] pairs");
    std::vector<Complex> values;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      values.push_back(complex_from(samples[i], o.at("samples") + "." + std::to_string(i), ctx));
    }
    o.finish();
    try {
      return NumericPulse(std::move(times), std::move(values));
    } catch (const ConfigError& e) {
      ctx.fail(path, e.what());
    }
  }
  return shape_from(j, path, ctx);
}

// ---- schemes --------------------------------------------------------------

Json normalize_scheme(const Json& j, const std::string& path, const Context& ctx) {
  Obj o(j, path, ctx);
  const std::string type = o.text("type");
  Json out;
  out["type"] = type;
  auto vec = [&](const std::string& key, std::size_t n, double fill) {
    if (!o.has(key)) return std::vector<double>(n, fill);
    auto v = o.numbers(key);
    if (n != 0 && v.size() != n) ctx.fail(o.at(key), "expected " + std::to_string(n) + " entries");
    return v;
  };
  if (type == "lambda" || type == "ladder") {
    out["Delta"] = o.number("Delta", 0.0);
    out["delta"] = o.number("delta", 0.0);
    out["gamma2"] = o.number("gamma2", 0.0);
  } else if (type == "tripod") {
    out["detunings"] = vec("detunings", 4, 0.0);
    out["gammas"] = vec("gammas", 4, 0.0);
  } else if (type == "cavity_lambda") {
    out["g"] = o.number("g");
    out["kappa"] = o.number("kappa", 0.0);
    out["gamma"] = o.number("gamma", 0.0);
    out["Delta_C"] = o.number("Delta_C", 0.0);
    out["Delta_D"] = o.number("Delta_D", 0.0);
  } else if (type == "chain") {
    const Json& ids = o.raw("pulse_ids");
    if (!ids.is_array()) ctx.fail(o.at("pulse_ids"), "expected an array of pulse ids");
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!ids[i].is_string()) ctx.fail(o.at("pulse_ids") + "." + std::to_string(i), "expected a string");
    }
    out["pulse_ids"] = ids;
    out["detunings"] = vec("detunings", ids.size() + 1, 0.0);
    out["gammas"] = vec("gammas", ids.size() + 1, 0.0);
  } else if (type == "custom") {
    out["label"] = o.text("label", std::string(scheme_labels::kChain));
    const Json& levels = o.raw("levels");
    if (!levels.is_array()) ctx.fail(o.at("levels"), "expected an array");
    out["levels"] = Json::array();
    for (std::size_t i = 0; i < levels.size(); ++i) {
      Obj l(levels[i], o.at("levels") + "." + std::to_string(i), ctx);
      Json lj;
      lj["detuning"] = l.number("detuning", 0.0);
      lj["decay_rate"] = l.number("decay_rate", 0.0);
      l.finish();
      out["levels"].push_back(lj);
    }
    const Json& couplings = o.raw("couplings");
    if (!couplings.is_array()) ctx.fail(o.at("couplings"), "expected an array");
    out["couplings"] = Json::array();
    for (std::size_t i = 0; i < couplings.size(); ++i) {
      Obj c(couplings[i], o.at("couplings") + "." + std::to_string(i), ctx);
      Json cj;
      cj["from"] = c.count("from");
      cj["to"] = c.count("to");
      cj["pulse"] = c.text("pulse");
      cj["phase"] = c.number("phase", 0.0);
      cj["scale"] = c.number("scale", 1.0);
      c.finish();
      out["couplings"].push_back(cj);
    }
  } else {
    ctx.fail(o.at("type"), "unknown scheme type '" + type + "'");
  }
  o.finish();
  return out;
}

LevelScheme build_scheme(const std::string& type, const Json& p) {
  auto vec = [&](const char* key) { return p.at(key).get<std::vector<double>>(); };
  if (type == "lambda") return lambda_scheme(p["Delta"], p["delta"], p["gamma2"]);
  if (type == "ladder") return ladder_scheme(p["Delta"], p["delta"], p["gamma2"]);
  if (type == "tripod") return tripod_scheme(vec("detunings"), vec("gammas"));
  if (type == "cavity_lambda") {
    return cavity_lambda_scheme(p["g"], p["kappa"], p["gamma"], p["Delta_C"], p["Delta_D"]);
  }
  if (type == "chain") {
    const auto ids = p.at("pulse_ids").get<std::vector<std::string>>();
    return chain_scheme(vec("detunings"), vec("gammas"), ids);
  }
  std::vector<Level> levels;
  for (std::size_t i = 0; i < p["levels"].size(); ++i) {
    levels.push_back({i, p["levels"][i]["detuning"], p["levels"][i]["decay_rate"]});
  }
  std::vector<Coupling> couplings;
  for (const auto& c : p["couplings"]) {
    couplings.push_back({c["from"], c["to"], c["pulse"], c["phase"], c["scale"]});
  }
  return LevelScheme(p["label"], std::move(levels), std::move(couplings));
}

// ---- integrator -----------------------------------------------------------

IntegratorConfig integrator_from(const Json& j, const std::string& path, const Context& ctx) {
  Obj o(j, path, ctx);
  IntegratorConfig c;
  const std::string method = o.text("method", std::string("dopri45"));
  if (method == "dopri45") {
    c.method = IntegrationMethod::DormandPrince45;
  } else if (method == "rk4") {
    c.method = IntegrationMethod::ClassicalRk4;
  } else {
    ctx.fail(o.at("method"), "expected 'dopri45' or 'rk4'");
  }
  c.rel_tol = o.number("rel_tol", c.rel_tol);
  c.abs_tol = o.number("abs_tol", c.abs_tol);
  if (o.has("max_step") && !o.raw("max_step").is_null()) c.max_step = o.number("max_step");
  c.sample_count = o.count("sample_count", c.sample_count);
  c.fixed_step = o.number("fixed_step", c.fixed_step);
  c.max_steps = o.count("max_steps", c.max_steps);
  o.finish();
  try {
    validate(c);
  } catch (const ConfigError& e) {
    ctx.fail(path, e.what());
  }
  return c;
}

Json integrator_to(const IntegratorConfig& c) {
  Json j;
  j["method"] = c.method == IntegrationMethod::ClassicalRk4 ? "rk4" : "dopri45";
  j["rel_tol"] = c.rel_tol;
  j["abs_tol"] = c.abs_tol;
  j["max_step"] = std::isfinite(c.max_step) ? Json(c.max_step) : Json(nullptr);
  j["sample_count"] = c.sample_count;
  j["fixed_step"] = c.fixed_step;
  j["max_steps"] = c.max_steps;
  return j;
}

// ---- protocol parameters --------------------------------------------------

// Reads fields from a params object, filling defaults for missing ones.
struct ReadFields {
  Obj& o;
  void operator()(const char* k, double& v) { v = o.number(k, v); }
  void operator()(const char* k, bool& v) { v = o.boolean(k, v); }
  void operator()(const char* k, std::size_t& v) { v = o.count(k, v); }
  void operator()(const char* k, Complex& v) {
    if (o.has(k)) v = complex_from(o.raw(k), o.at(k), o.ctx());
  }
  void operator()(const char* k, std::optional<double>& v) {
    if (!o.has(k)) return;
    if (o.raw(k).is_null()) {
      v.reset();
      return;
    }
    v = o.number(k);
  }
  void operator()(const char* k, PulseShape& v) {
    if (o.has(k)) v = shape_from(o.raw(k), o.at(k), o.ctx());
  }
  void operator()(const char* k, Direction& v) {
    if (!o.has(k)) return;
    const std::string d = o.text(k);
    if (d == "forward") {
      v = Direction::Forward;
    } else if (d == "backward") {
      v = Direction::Backward;
    } else {
      o.ctx().fail(o.at(k), "expected 'forward' or 'backward'");
    }
  }
  void operator()(const char* k, std::vector<std::pair<double, double>>& v) {
    if (!o.has(k)) return;
    const Json& a = o.raw(k);
    if (!a.is_array() || a.empty()) o.ctx().fail(o.at(k), "expected a nonempty array of [phi_P, phi_S]");
    v.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Complex z = complex_from(a[i], o.at(k) + "." + std::to_string(i), o.ctx());
      v.emplace_back(z.real(), z.imag());
    }
  }
};

struct WriteFields {
  Json& j;
  void operator()(const char* k, double v) { j[k] = v; }
  void operator()(const char* k, bool v) { j[k] = v; }
  void operator()(const char* k, std::size_t v) { j[k] = v; }
  void operator()(const char* k, Complex v) { j[k] = complex_to(v); }
  void operator()(const char* k, const std::optional<double>& v) {
    j[k] = v ? Json(*v) : Json(nullptr);
  }
  void operator()(const char* k, const PulseShape& v) { j[k] = shape_to(v); }
  void operator()(const char* k, Direction v) {
    j[k] = v == Direction::Forward ? "forward" : "backward";
  }
  void operator()(const char* k, const std::vector<std::pair<double, double>>& v) {
    j[k] = Json::array();
    for (const auto& [a, b] : v) j[k].push_back(Json::array({a, b}));
  }
};

template <typename F>
void fields(StirapParams& p, F&& f) {
  f("peak_pump", p.peak_pump);
  f("peak_stokes", p.peak_stokes);
  f("width", p.width);
  f("delay", p.delay);
  f("Delta", p.Delta);
  f("delta", p.delta);
  f("gamma2", p.gamma2);
  f("peak_scale", p.peak_scale);
  f("margin", p.margin);
}

template <typename F>
void fields(FractionalParams& p, F&& f) {
  f("peak", p.peak);
  f("width", p.width);
  f("delay", p.delay);
  f("theta_fs", p.theta_fs);
  f("margin", p.margin);
}

template <typename F>
void fields(SaStirapParams& p, F&& f) {
  f("peak", p.peak);
  f("width", p.width);
  f("delay", p.delay);
  f("with_cd", p.with_cd);
  f("margin", p.margin);
  f("cd_samples", p.cd_samples);
}

template <typename F>
void fields(RotationGateParams& p, F&& f) {
  f("alpha", p.alpha);
  f("peak", p.peak);
  f("width", p.width);
  f("delay", p.delay);
  f("Delta", p.Delta);
  f("separation", p.separation);
  f("relative_phase", p.relative_phase);
  f("input_1", p.input_1);
  f("input_3", p.input_3);
  f("margin", p.margin);
}

template <typename F>
void fields(TripodGateParams& p, F&& f) {
  f("peak", p.peak);
  f("width", p.width);
  f("delay", p.delay);
  f("mixing_angle", p.mixing_angle);
  f("mixing_phase", p.mixing_phase);
  f("control_phase", p.control_phase);
  f("control_peak", p.control_peak);
  f("separation", p.separation);
  f("input_1", p.input_1);
  f("input_3", p.input_3);
  f("margin", p.margin);
}

template <typename F>
void fields(CompositeParams& p, F&& f) {
  f("peak", p.pairs.peak);
  f("width", p.pairs.width);
  f("delay", p.pairs.delay);
  f("spacing", p.pairs.spacing);
  f("start", p.pairs.start);
  f("phases", p.phases);
  f("margin", p.margin);
}

template <typename F>
void fields(VstirapParams& p, F&& f) {
  f("g", p.g);
  f("kappa", p.kappa);
  f("gamma", p.gamma);
  f("Delta_C", p.Delta_C);
  f("Delta_D", p.Delta_D);
  f("drive", p.drive);
  f("t0", p.t0);
  f("t1", p.t1);
}

template <typename F>
void fields(NonreciprocityParams& p, F&& f) {
  f("peak", p.peak);
  f("width", p.width);
  f("loss_b", p.loss_b);
  f("separation", p.separation);
  f("scan_min", p.scan_min);
  f("scan_max", p.scan_max);
  f("scan_points", p.scan_points);
  f("direction", p.direction);
  f("margin", p.margin);
}

template <typename P>
P read_params(const Json& j, const std::string& path, const Context& ctx) {
  P p{};
  Obj o(j, path, ctx);
  fields(p, ReadFields{o});
  o.finish();
  return p;
}

template <typename P>
Json write_params(P p) {
  Json j = Json::object();
  fields(p, WriteFields{j});
  return j;
}

const std::vector<std::string>& protocol_names() {
  static const std::vector<std::string> names = {
      "stirap",       "bstirap",   "fractional", "sastirap",      "rotation_gate",
      "tripod_gate",  "composite", "vstirap",    "nonreciprocity"};
  return names;
}

template <typename P>
Json normalized(const Json& j, const std::string& path, const Context& ctx) {
  return write_params(read_params<P>(j, path, ctx));
}

Json normalize_protocol_params(const std::string& name, const Json& j, const std::string& path,
                               const Context& ctx) {
  if (name == "stirap" || name == "bstirap") return normalized<StirapParams>(j, path, ctx);
  if (name == "fractional") return normalized<FractionalParams>(j, path, ctx);
  if (name == "sastirap") return normalized<SaStirapParams>(j, path, ctx);
  if (name == "rotation_gate") return normalized<RotationGateParams>(j, path, ctx);
  if (name == "tripod_gate") return normalized<TripodGateParams>(j, path, ctx);
  if (name == "composite") return normalized<CompositeParams>(j, path, ctx);
  if (name == "vstirap") return normalized<VstirapParams>(j, path, ctx);
  if (name == "nonreciprocity") return normalized<NonreciprocityParams>(j, path, ctx);
  std::string known;
  for (const auto& n : protocol_names()) known += (known.empty() ? "" : ", ") + n;
  ctx.fail("protocol.name", "unknown protocol '" + name + "' (known: " + known + ")");
}

template <typename P>
P typed(const ProtocolSpec& spec, const IntegratorConfig* integrator) {
  const Context ctx{"protocol " + spec.name};
  P p = read_params<P>(spec.params, "protocol.params", ctx);
  if (integrator) p.integrator = *integrator;
  return p;
}

// ---- outputs and sweeps ---------------------------------------------------

const std::map<std::string, OutputKind>& output_names() {
  static const std::map<std::string, OutputKind> names = {
      {"trajectory_csv", OutputKind::TrajectoryCsv},
      {"summary_json", OutputKind::SummaryJson},
      {"adiabaticity_csv", OutputKind::AdiabaticityCsv},
      {"plot_svg", OutputKind::PlotSvg},
      {"pulse_csv", OutputKind::PulseCsv}};
  return names;
}

InitialState initial_from(const Json& j, const std::string& path, const Context& ctx,
                          std::size_t dimension) {
  Obj o(j, path, ctx);
  InitialState s;
  const int forms = int(o.has("level")) + int(o.has("vector")) + int(o.has("ensemble"));
  if (forms != 1) ctx.fail(path, "give exactly one of 'level', 'vector', 'ensemble'");
  if (o.has("level")) {
    s.kind = InitialState::Kind::Level;
    s.level = o.count("level");
    if (s.level >= dimension) ctx.fail(o.at("level"), "level index out of range");
  } else if (o.has("vector")) {
    s.kind = InitialState::Kind::Vector;
    const Json& v = o.raw("vector");
    if (!v.is_array() || v.size() != dimension) {
      ctx.fail(o.at("vector"), "expected " + std::to_string(dimension) + " complex entries");
    }
    s.vector.resize(static_cast<Eigen::Index>(dimension));
    for (std::size_t i = 0; i < dimension; ++i) {
      s.vector(static_cast<Eigen::Index>(i)) =
          complex_from(v[i], o.at("vector") + "." + std::to_string(i), ctx);
    }
  } else {
    s.kind = InitialState::Kind::Ensemble;
    s.ensemble.weights = o.numbers("ensemble");
    if (s.ensemble.weights.size() != dimension) {
      ctx.fail(o.at("ensemble"), "expected " + std::to_string(dimension) + " weights");
    }
    try {
      validate(s.ensemble);
    } catch (const ConfigError& e) {
      ctx.fail(o.at("ensemble"), e.what());
    }
  }
  o.finish();
  return s;
}

Json initial_to(const InitialState& s) {
  Json j;
  switch (s.kind) {
    case InitialState::Kind::Level:
      j["level"] = s.level;
      break;
    case InitialState::Kind::Vector:
      j["vector"] = Json::array();
      for (Eigen::Index i = 0; i < s.vector.size(); ++i) j["vector"].push_back(complex_to(s.vector(i)));
      break;
    case InitialState::Kind::Ensemble:
      j["ensemble"] = s.ensemble.weights;
      break;
  }
  return j;
}

SweepSpec sweep_from(const Json& j, const std::string& path, const Context& ctx) {
  Obj o(j, path, ctx);
  SweepSpec s;
  s.observable = o.text("observable", std::string("efficiency"));
  const Json& axes = o.raw("axes");
  if (!axes.is_array() || axes.empty()) ctx.fail(o.at("axes"), "expected one or two sweep axes");
  if (axes.size() > 2) ctx.fail(o.at("axes"), "at most two sweep axes are supported");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string ap = o.at("axes") + "." + std::to_string(i);
    Obj a(axes[i], ap, ctx);
    SweepAxisSpec axis;
    axis.path = a.text("path");
    if (a.has("values")) {
      if (a.has("start") || a.has("stop") || a.has("count")) {
        ctx.fail(ap, "give either 'values' or 'start'/'stop'/'count'");
      }
      axis.values = a.numbers("values");
    } else {
      const double start = a.number("start");
      const double stop = a.number("stop");
      const std::size_t n = a.count("count");
      if (n == 1) {
        axis.values = {start};
      } else if (n > 1) {
        axis.values = uniform_grid(start, stop, n);
      }
    }
    if (axis.values.empty()) ctx.fail(ap, "sweep axis has no values");
    a.finish();
    s.axes.push_back(std::move(axis));
  }
  o.finish();
  return s;
}

Json sweep_to(const SweepSpec& s) {
  Json j;
  j["observable"] = s.observable;
  j["axes"] = Json::array();
  for (const auto& a : s.axes) j["axes"].push_back({{"path", a.path}, {"values", a.values}});
  return j;
}

// Walks a dotted path; numeric segments index arrays.
Json* find_path(Json& doc, const std::string& path) {
  Json* node = &doc;
  std::stringstream ss(path);
  std::string seg;
  while (std::getline(ss, seg, '.')) {
    if (node->is_object()) {
      if (!node->contains(seg)) return nullptr;
      node = &(*node)[seg];
    } else if (node->is_array()) {
      if (seg.empty() || seg.find_first_not_of("0123456789") != std::string::npos) return nullptr;
      const std::size_t i = std::stoul(seg);
      if (i >= node->size()) return nullptr;
      node = &(*node)[i];
    } else {
      return nullptr;
    }
  }
  return node;
}

}  // namespace

const char* to_string(OutputKind kind) {
  for (const auto& [name, k] : output_names()) {
    if (k == kind) return name.c_str();
  }
  return "unknown";
}

LevelScheme SchemeSpec::build() const { return build_scheme(type, params); }

Json to_json(const Pulse& pulse) {
  if (const auto* s = std::get_if<PulseShape>(&pulse)) return shape_to(*s);
  const auto& n = std::get<NumericPulse>(pulse);
  Json j;
  j["kind"] = "numeric";
  j["times"] = n.times();
  j["samples"] = Json::array();
  for (const auto& z : n.samples()) j["samples"].push_back(complex_to(z));
  return j;
}

Pulse pulse_from_json(const Json& j, const std::string& path) {
  const Context ctx{"pulse"};
  return pulse_from(j, path, ctx);
}

ScenarioConfig parse_config(const Json& document, const std::string& source) {
  const Context ctx{source};
  Obj o(document, "", ctx);
  ScenarioConfig c;
  c.id = o.text("id", std::string());
  c.description = o.text("description", std::string());
  if (o.has("tags")) {
    const Json& tags = o.raw("tags");
    if (!tags.is_array()) ctx.fail("tags", "expected an array of strings");
    for (std::size_t i = 0; i < tags.size(); ++i) {
      if (!tags[i].is_string()) ctx.fail("tags." + std::to_string(i), "expected a string");
      c.tags.push_back(tags[i].get<std::string>());
    }
  }
  c.group = static_cast<int>(o.count("group", 0));
  c.mode = o.text("mode", std::string("time"));
  if (c.mode != "time" && c.mode != "spatial") ctx.fail("mode", "expected 'time' or 'spatial'");

  if (o.has("integrator")) {
    c.integrator = integrator_from(o.raw("integrator"), "integrator", ctx);
  } else if (o.has("protocol") && o.raw("protocol").value("name", "") == "vstirap") {
    // The emission integral wants a dense sample grid.
    c.integrator = VstirapParams{}.integrator;
  }

  const bool has_protocol = o.has("protocol");
  const bool has_raw = o.has("scheme") || o.has("pulses") || o.has("window") ||
                       o.has("initial_state") || o.has("target_level") || o.has("time_origin");
  if (has_protocol == has_raw) {
    ctx.fail("", has_protocol ? "give either 'protocol' or a raw propagation (scheme, pulses, "
                                "window, initial_state), not both"
                              : "missing 'protocol' or raw propagation entries (scheme, pulses, "
                                "window, initial_state)");
  }

  if (has_protocol) {
    Obj p(o.raw("protocol"), "protocol", ctx);
    ProtocolSpec spec;
    spec.name = p.text("name");
    spec.params = normalize_protocol_params(spec.name, p.has("params") ? p.raw("params") : Json::object(),
                                            "protocol.params", ctx);
    p.finish();
    c.protocol = std::move(spec);
  } else {
    RawSpec raw;
    raw.scheme.params = normalize_scheme(o.raw("scheme"), "scheme", ctx);
    raw.scheme.type = raw.scheme.params["type"];
    LevelScheme scheme = [&] {
      try {
        return raw.scheme.build();
      } catch (const ConfigError& e) {
        ctx.fail("scheme", e.what());
      }
    }();

    raw.pulses = PulseSchedule(o.number("time_origin", 0.0));
    const Json& pulses = o.raw("pulses");
    if (!pulses.is_object()) ctx.fail("pulses", "expected an object mapping pulse ids to shapes");
    for (auto it = pulses.begin(); it != pulses.end(); ++it) {
      raw.pulses.add(it.key(), pulse_from(it.value(), "pulses." + it.key(), ctx));
    }
    if (raw.scheme.type == "cavity_lambda" && !raw.pulses.contains(kCavityPulse)) {
      raw.pulses.add(kCavityPulse, cavity_vacuum_pulse(raw.scheme.params["g"].get<double>()));
    }
    for (std::size_t k = 0; k < scheme.couplings().size(); ++k) {
      const auto& id = scheme.couplings()[k].pulse_id;
      if (!raw.pulses.contains(id)) {
        ctx.fail("pulses", "unresolved pulse id '" + id + "' used by coupling " +
                               std::to_string(scheme.couplings()[k].from) + "-" +
                               std::to_string(scheme.couplings()[k].to));
      }
    }

    const auto window = o.numbers("window");
    if (window.size() != 2 || !(window[1] > window[0])) {
      ctx.fail("window", "expected [start, end] with end > start");
    }
    raw.t0 = window[0];
    raw.t1 = window[1];
    raw.initial = initial_from(o.raw("initial_state"), "initial_state", ctx, scheme.dimension());
    if (o.has("target_level")) {
      raw.target_level = o.count("target_level");
      if (*raw.target_level >= scheme.dimension()) ctx.fail("target_level", "level index out of range");
    }
    c.raw = std::move(raw);
  }

  if (o.has("sweep")) c.sweep = sweep_from(o.raw("sweep"), "sweep", ctx);

  if (o.has("outputs")) {
    const Json& outs = o.raw("outputs");
    if (!outs.is_array()) ctx.fail("outputs", "expected an array of output kinds");
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const std::string path = "outputs." + std::to_string(i);
      if (!outs[i].is_string()) ctx.fail(path, "expected a string");
      auto it = output_names().find(outs[i].get<std::string>());
      if (it == output_names().end()) {
        ctx.fail(path, "unknown output kind '" + outs[i].get<std::string>() + "'");
      }
      c.outputs.push_back(it->second);
    }
  } else {
    c.outputs = {OutputKind::TrajectoryCsv, OutputKind::SummaryJson};
  }
  o.finish();

  if (c.sweep) {
    // Every axis must name an existing number of the canonical document.
    Json canonical = to_json(c);
    for (std::size_t i = 0; i < c.sweep->axes.size(); ++i) {
      const Json* node = find_path(canonical, c.sweep->axes[i].path);
      if (node == nullptr || !node->is_number()) {
        ctx.fail("sweep.axes." + std::to_string(i) + ".path",
                 "'" + c.sweep->axes[i].path + "' does not name a numeric parameter");
      }
    }
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": malformed JSON: " + e.what());
  }
  return parse_config(doc, path);
}

Json to_json(const ScenarioConfig& c) {
  Json j;
  j["id"] = c.id;
  j["description"] = c.description;
  j["tags"] = c.tags;
  j["group"] = c.group;
  j["mode"] = c.mode;
  if (c.protocol) {
    j["protocol"] = {{"name", c.protocol->name}, {"params", c.protocol->params}};
  }
  if (c.raw) {
    j["scheme"] = c.raw->scheme.params;
    j["time_origin"] = c.raw->pulses.time_origin();
    j["pulses"] = Json::object();
    for (const auto& [id, pulse] : c.raw->pulses.entries()) j["pulses"][id] = to_json(pulse);
    j["window"] = {c.raw->t0, c.raw->t1};
    j["initial_state"] = initial_to(c.raw->initial);
    if (c.raw->target_level) j["target_level"] = *c.raw->target_level;
  }
  j["integrator"] = integrator_to(c.integrator);
  if (c.sweep) j["sweep"] = sweep_to(*c.sweep);
  j["outputs"] = Json::array();
  for (auto k : c.outputs) j["outputs"].push_back(to_string(k));
  return j;
}

void set_by_path(Json& document, const std::string& path, double value) {
  Json* node = find_path(document, path);
  if (node == nullptr || !node->is_number()) {
    throw ConfigError("sweep path '" + path + "' does not name a numeric parameter");
  }
  if (node->is_number_integer()) {
    if (value != std::floor(value) || value < 0.0) {
      throw ConfigError("sweep path '" + path + "' needs nonnegative integer values");
    }
    *node = static_cast<std::size_t>(value);
  } else {
    *node = value;
  }
}

StirapParams stirap_params_from_json(const Json& params) {
  return read_params<StirapParams>(params, "params", Context{"stirap"});
}

ProtocolResult run_protocol(const ProtocolSpec& spec, const IntegratorConfig& integrator,
                            std::size_t threads) {
  const std::string& n = spec.name;
  if (n == "stirap") return run_stirap(typed<StirapParams>(spec, &integrator));
  if (n == "bstirap") return run_bstirap(typed<StirapParams>(spec, &integrator));
  if (n == "fractional") return run_fractional(typed<FractionalParams>(spec, &integrator));
  if (n == "sastirap") return run_sastirap(typed<SaStirapParams>(spec, &integrator));
  if (n == "rotation_gate") return run_rotation_gate(typed<RotationGateParams>(spec, &integrator));
  if (n == "tripod_gate") return run_tripod_gate(typed<TripodGateParams>(spec, &integrator));
  if (n == "composite") return run_composite(typed<CompositeParams>(spec, &integrator));
  if (n == "vstirap") return run_vstirap(typed<VstirapParams>(spec, &integrator));
  if (n == "nonreciprocity") {
    return run_nonreciprocity(typed<NonreciprocityParams>(spec, &integrator), threads);
  }
  throw ConfigError("unknown protocol '" + n + "'");
}

std::optional<Setup> protocol_setup(const ProtocolSpec& spec) {
  const std::string& n = spec.name;
  if (n == "stirap") return stirap_setup(typed<StirapParams>(spec, nullptr));
  if (n == "bstirap") {
    auto p = typed<StirapParams>(spec, nullptr);
    p.delay = -std::abs(p.delay);
    return stirap_setup(p);
  }
  if (n == "fractional") return fractional_setup(typed<FractionalParams>(spec, nullptr));
  if (n == "sastirap") return sastirap_setup(typed<SaStirapParams>(spec, nullptr));
  if (n == "rotation_gate") return rotation_gate_setup(typed<RotationGateParams>(spec, nullptr));
  if (n == "tripod_gate") return tripod_gate_setup(typed<TripodGateParams>(spec, nullptr));
  if (n == "composite") return composite_setup(typed<CompositeParams>(spec, nullptr));
  if (n == "vstirap") return vstirap_setup(typed<VstirapParams>(spec, nullptr));
  if (n == "nonreciprocity") {
    auto p = typed<NonreciprocityParams>(spec, nullptr);
    if (!p.separation) return std::nullopt;
    return nonreciprocity_setup(p, *p.separation, p.direction);
  }
  return std::nullopt;
}

}  // namespace stirap
