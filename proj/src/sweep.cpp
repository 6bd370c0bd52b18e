#include "stirap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>

#include "stirap/errors.hpp"
#include "stirap/parallel.hpp"
#include "stirap/propagator.hpp"

namespace stirap {
namespace {

StateVector initial_vector(const InitialState& s, std::size_t dimension) {
  if (s.kind == InitialState::Kind::Level) return basis_state(dimension, s.level);
  return s.vector;
}

ScenarioRun run_raw(const ScenarioConfig& c) {
  const RawSpec& raw = *c.raw;
  ScenarioRun run;
  run.result.label = c.id.empty() ? "raw" : c.id;
  LevelScheme scheme = raw.scheme.build();

  if (raw.initial.kind == InitialState::Kind::Ensemble) {
    auto ev = evolve_diagonal_ensemble(scheme, raw.pulses, raw.initial.ensemble, raw.t0, raw.t1,
                                       c.integrator);
    auto& s = run.result.scalars;
    s["entropy_before"] = ev.entropy_before;
    s["entropy_after"] = ev.entropy_after;
    s["entropy_change"] = ev.entropy_after - ev.entropy_before;
    double spectrum_error = 0.0;
    for (std::size_t k = 0; k < ev.initial_spectrum.size(); ++k) {
      spectrum_error =
          std::max(spectrum_error, std::abs(ev.initial_spectrum[k] - ev.final_spectrum[k]));
    }
    s["spectrum_error"] = spectrum_error;
    s["max_initial_weight"] = ev.max_initial_weight;
    s["max_final_population"] = ev.max_final_population;
    s["population_excess"] = ev.max_final_population - ev.max_initial_weight;
    run.ensemble = std::move(ev);
    run.setup = Setup{scheme, raw.pulses, raw.t0, raw.t1, StateVector()};
    return run;
  }

  const StateVector psi0 = initial_vector(raw.initial, scheme.dimension());
  Trajectory t = c.mode == "spatial"
                     ? propagate_spatial(scheme, raw.pulses, raw.t0, raw.t1, psi0, c.integrator)
                     : propagate(scheme, raw.pulses, raw.t0, raw.t1, psi0, c.integrator);
  auto& s = run.result.scalars;
  for (std::size_t k = 0; k < t.levels(); ++k) {
    s["P" + std::to_string(k + 1)] = t.final_population(k);
    s["max_P" + std::to_string(k + 1)] = t.max_population(k);
  }
  s["final_norm_sq"] = t.norm_sq.back();
  s["total_loss"] = t.total_loss();
  s["closure_error"] = t.norm_sq.back() + t.total_loss() - t.initial_norm_sq();
  if (raw.target_level) {
    s["efficiency"] = transfer_efficiency(t, *raw.target_level);
    // Share of the surviving norm, which factors out uniform damping.
    s["efficiency_normalized"] = t.final_population(*raw.target_level) / t.norm_sq.back();
  }
  if (scheme.label() == scheme_labels::kCavityLambda) {
    s["emission_probability"] = photon_emission_probability(t, scheme.levels()[2].decay_rate);
  }
  if (t.dark_overlap_trace) {
    double lo = 1.0;
    for (double v : *t.dark_overlap_trace) {
      if (!std::isnan(v)) lo = std::min(lo, v);
    }
    s["min_dark_overlap"] = lo;
  }
  run.setup = Setup{scheme, raw.pulses, raw.t0, raw.t1, psi0};
  run.result.trajectory = std::move(t);
  return run;
}

}  // namespace

ScenarioRun run_scenario(const ScenarioConfig& config, std::size_t threads) {
  if (config.raw) return run_raw(config);
  if (!config.protocol) throw ConfigError("scenario has neither a protocol nor a raw propagation");
  ScenarioRun run;
  run.result = run_protocol(*config.protocol, config.integrator, threads);
  run.setup = protocol_setup(*config.protocol);
  return run;
}

SweepResult run_sweep(const ScenarioConfig& config, std::size_t threads,
                      const SweepProgress& progress) {
  if (!config.sweep || config.sweep->axes.empty()) {
    throw ConfigError("sweep: config has no sweep axes");
  }
  const SweepSpec& spec = *config.sweep;
  Json base = to_json(config);
  base.erase("sweep");

  SweepResult out;
  out.observable = spec.observable;
  out.axis1 = {spec.axes[0].path, spec.axes[0].values};
  if (spec.axes.size() > 1) out.axis2 = SweepAxis{spec.axes[1].path, spec.axes[1].values};
  const std::size_t n1 = out.axis1.values.size();
  const std::size_t n2 = out.axis2 ? out.axis2->values.size() : 1;
  out.grid.resize(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));

  std::atomic<std::size_t> done{0};
  std::mutex report;
  parallel_for(n1 * n2, threads, [&](std::size_t idx) {
    const std::size_t i = idx / n2, j = idx % n2;
    Json doc = base;
    set_by_path(doc, spec.axes[0].path, out.axis1.values[i]);
    if (out.axis2) set_by_path(doc, spec.axes[1].path, out.axis2->values[j]);
    const ScenarioConfig point = parse_config(doc, "sweep point " + std::to_string(idx));
    const ScenarioRun run = run_scenario(point, 1);
    out.grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        run.result.scalar(spec.observable);
    const std::size_t finished = ++done;
    if (progress) {
      std::lock_guard<std::mutex> lock(report);
      progress(finished, n1 * n2);
    }
  });
  return out;
}

}  // namespace stirap
