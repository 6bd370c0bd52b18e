#include "stirap/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stirap/adiabatic.hpp"
#include "stirap/errors.hpp"
#include "stirap/parallel.hpp"

namespace stirap {
namespace {

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
}

double min_of(const std::optional<std::vector<double>>& trace) {
  if (!trace) return std::nan("");
  double m = std::numeric_limits<double>::infinity();
  for (double v : *trace) {
    if (!std::isnan(v)) m = std::min(m, v);
  }
  return m;
}

// Minimum local adiabaticity ratio over samples where both |P| and |S| exceed
// 1% of their largest sampled value. In the far tails the ratio tends to zero
// while the mixing angle no longer moves, so those samples say nothing.
double min_overlap_adiabaticity(const Trajectory& t, const PulseSchedule& schedule) {
  if (!t.adiabaticity_trace) return std::nan("");
  std::vector<double> p(t.size()), s(t.size());
  double pmax = 0.0, smax = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    p[i] = std::abs(schedule.eval("P", t.times[i]));
    s[i] = std::abs(schedule.eval("S", t.times[i]));
    pmax = std::max(pmax, p[i]);
    smax = std::max(smax, s[i]);
  }
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (p[i] >= 1e-2 * pmax && s[i] >= 1e-2 * smax) m = std::min(m, (*t.adiabaticity_trace)[i]);
  }
  return m;
}

Trajectory run_setup(const Setup& s, const IntegratorConfig& config) {
  return propagate(s.scheme, s.schedule, s.t0, s.t1, s.initial, config);
}

void add_population_scalars(ProtocolResult& r, const Trajectory& t) {
  for (std::size_t k = 0; k < t.levels(); ++k) {
    r.scalars["P" + std::to_string(k + 1)] = t.final_population(k);
  }
  r.scalars["final_norm_sq"] = t.norm_sq.back();
  r.scalars["total_loss"] = t.total_loss();
  r.scalars["closure_error"] = t.norm_sq.back() + t.total_loss() - t.initial_norm_sq();
}

PulseShape shifted(PulseShape s, double dt) {
  if (s.kind == PulseKind::Sum) {
    for (auto& c : s.components) c = shifted(c, dt);
  } else if (s.kind != PulseKind::Constant) {
    s.center += dt;
  }
  return s;
}

StateVector qubit_input(std::size_t dimension, Complex c1, Complex c3) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(dimension));
  v(0) = c1;
  v(2) = c3;
  const double n = v.norm();
  if (n == 0.0) throw ConfigError("gate input state has zero norm");
  return v / n;
}

// Propagates psi1 and psi3 and collects the 2x2 block plus leakage figures.
struct GateRun {
  Eigen::Matrix2cd u;
  double leakage = 0.0;         // max final population outside {psi1, psi3}
  double intermediate_final = 0.0;
  double intermediate_peak = 0.0;
  double ancilla_final = 0.0;   // tripod only
};

GateRun reconstruct_gate(const Setup& setup, const IntegratorConfig& config) {
  GateRun g;
  const std::size_t n = setup.scheme.dimension();
  for (int col = 0; col < 2; ++col) {
    const std::size_t level = col == 0 ? 0 : 2;
    const Trajectory t =
        propagate(setup.scheme, setup.schedule, setup.t0, setup.t1, basis_state(n, level), config);
    const StateVector& psi = t.amplitudes.back();
    g.u(0, col) = psi(0);
    g.u(1, col) = psi(2);
    double outside = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != 0 && k != 2) outside += std::norm(psi(static_cast<Eigen::Index>(k)));
    }
    g.leakage = std::max(g.leakage, outside);
    g.intermediate_final = std::max(g.intermediate_final, t.final_population(1));
    g.intermediate_peak = std::max(g.intermediate_peak, t.max_population(1));
    if (n > 3) g.ancilla_final = std::max(g.ancilla_final, t.final_population(3));
  }
  return g;
}

double fidelity_up_to_phase(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  const double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::norm(a.dot(b)) / (na * nb);
}

void add_gate_scalars(ProtocolResult& r, const GateRun& g, double target_angle,
                      Complex c1, Complex c3) {
  const double angle = gate_rotation_angle(g.u);
  r.gate = g.u;
  r.scalars["rotation_angle"] = std::abs(angle);
  r.scalars["signed_rotation_angle"] = angle;
  r.scalars["target_angle"] = target_angle;
  r.scalars["angle_error"] = std::abs(std::abs(angle) - std::abs(target_angle));
  r.scalars["unitarity_deviation"] = unitarity_deviation(g.u);
  r.scalars["leakage"] = g.leakage;
  r.scalars["intermediate_final"] = g.intermediate_final;
  r.scalars["intermediate_peak"] = g.intermediate_peak;

  Eigen::Vector2cd in(c1, c3);
  in.normalize();
  Eigen::Matrix2d ideal;
  const double c = std::cos(target_angle), s = std::sin(target_angle);
  ideal << c, s, -s, c;
  const Eigen::Vector2cd out = g.u * in;
  r.scalars["input_fidelity"] = fidelity_up_to_phase(ideal.cast<Complex>() * in, out);
}

}  // namespace

double ProtocolResult::scalar(const std::string& name) const {
  auto it = scalars.find(name);
  if (it == scalars.end()) throw ConfigError("protocol '" + label + "' has no scalar '" + name + "'");
  return it->second;
}

// ---- plain STIRAP ---------------------------------------------------------

Setup stirap_setup(const StirapParams& p) {
  require_positive(p.width, "stirap: width");
  if (!(p.peak_scale >= 0.0)) throw ConfigError("stirap: peak_scale must be nonnegative");
  const auto pair = gaussian_pair(p.peak_pump * p.peak_scale, p.peak_stokes * p.peak_scale, p.width,
                                  p.delay);
  PulseSchedule schedule;
  schedule.add("P", pair.pump);
  schedule.add("S", pair.stokes);
  const double half = 0.5 * std::abs(p.delay) + p.margin * p.width;
  return {lambda_scheme(p.Delta, p.delta, p.gamma2), std::move(schedule), -half, half,
          basis_state(3, 0)};
}

ProtocolResult run_stirap(const StirapParams& p) {
  const Setup s = stirap_setup(p);
  ProtocolResult r;
  r.label = "stirap";
  Trajectory t = run_setup(s, p.integrator);
  r.scalars["efficiency"] = transfer_efficiency(t, 2);
  r.scalars["max_intermediate"] = t.max_population(1);
  r.scalars["min_adiabaticity"] = min_overlap_adiabaticity(t, s.schedule);
  r.scalars["min_dark_overlap"] = min_of(t.dark_overlap_trace);
  add_population_scalars(r, t);
  r.notes.push_back(p.delay >= 0.0 ? "Stokes leads (counterintuitive order)"
                                   : "pump leads (intuitive order)");
  r.trajectory = std::move(t);
  return r;
}

namespace {

SweepResult efficiency_grid(const StirapParams& base, std::span<const double> delays,
                            std::span<const double> scales, bool two_axes, std::size_t threads) {
  if (delays.empty()) throw ConfigError("sweep: delay axis is empty");
  if (two_axes && scales.empty()) throw ConfigError("sweep: intensity axis is empty");
  const std::size_t n1 = delays.size();
  const std::size_t n2 = two_axes ? scales.size() : 1;
  SweepResult out;
  out.axis1 = {"delay", {delays.begin(), delays.end()}};
  if (two_axes) out.axis2 = SweepAxis{"peak_scale", {scales.begin(), scales.end()}};
  out.observable = "efficiency";
  out.grid.resize(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
  IntegratorConfig cfg = base.integrator;
  cfg.sample_count = 2;
  parallel_for(n1 * n2, threads, [&](std::size_t idx) {
    const std::size_t i = idx / n2, j = idx % n2;
    StirapParams p = base;
    p.delay = delays[i];
    if (two_axes) p.peak_scale = base.peak_scale * scales[j];
    const Setup s = stirap_setup(p);
    const Trajectory t = run_setup(s, cfg);
    out.grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = transfer_efficiency(t, 2);
  });
  return out;
}

}  // namespace

SweepResult delay_sweep(const StirapParams& base, std::span<const double> delays,
                        std::size_t threads) {
  return efficiency_grid(base, delays, {}, false, threads);
}

SweepResult delay_intensity_map(const StirapParams& base, std::span<const double> delays,
                                std::span<const double> peak_scales, std::size_t threads) {
  return efficiency_grid(base, delays, peak_scales, true, threads);
}

double plateau_width(std::span<const double> x, std::span<const double> values, double threshold) {
  if (x.size() != values.size()) throw ConfigError("plateau width: size mismatch");
  double best = 0.0;
  std::size_t start = 0;
  bool inside = false;
  for (std::size_t i = 0; i <= x.size(); ++i) {
    const bool ok = i < x.size() && values[i] >= threshold;
    if (ok && !inside) {
      start = i;
      inside = true;
    } else if (!ok && inside) {
      best = std::max(best, x[i - 1] - x[start]);
      inside = false;
    }
  }
  return best;
}

// ---- fractional -----------------------------------------------------------

Setup fractional_setup(const FractionalParams& p) {
  require_positive(p.width, "fractional: width");
  const auto pair = fractional_pair(p.peak, p.width, p.delay, p.theta_fs);
  PulseSchedule schedule;
  schedule.add("P", pair.pump);
  schedule.add("S", pair.stokes);
  const double half = 0.5 * std::abs(p.delay) + p.margin * p.width;
  return {lambda_scheme(0.0, 0.0, 0.0), std::move(schedule), -half, half, basis_state(3, 0)};
}

ProtocolResult run_fractional(const FractionalParams& p) {
  const Setup s = fractional_setup(p);
  ProtocolResult r;
  r.label = "fractional";
  Trajectory t = run_setup(s, p.integrator);
  const StateVector& psi = t.amplitudes.back();
  const double phase = std::arg(psi(2) / psi(0));
  r.scalars["relative_phase"] = phase;
  r.scalars["predicted_P1"] = std::pow(std::cos(p.theta_fs), 2);
  r.scalars["predicted_P3"] = std::pow(std::sin(p.theta_fs), 2);
  // Phi_0 = cos(theta) psi1 - sin(theta) psi3: the amplitudes differ in sign.
  r.scalars["predicted_relative_phase"] = kPi;
  r.scalars["phase_error"] = std::abs(wrap_angle(phase - kPi));
  r.scalars["max_intermediate"] = t.max_population(1);
  r.scalars["min_dark_overlap"] = min_of(t.dark_overlap_trace);
  add_population_scalars(r, t);
  r.trajectory = std::move(t);
  return r;
}

// ---- b-STIRAP -------------------------------------------------------------

ProtocolResult run_bstirap(const StirapParams& params) {
  StirapParams p = params;
  p.delay = -std::abs(params.delay);
  ProtocolResult r;
  r.label = "bstirap";
  IntegratorConfig quiet = p.integrator;
  quiet.sample_count = 2;

  Trajectory t = run_setup(stirap_setup(p), p.integrator);
  r.scalars["efficiency"] = transfer_efficiency(t, 2);
  r.scalars["max_intermediate"] = t.max_population(1);
  add_population_scalars(r, t);

  StirapParams lossless = p;
  lossless.gamma2 = 0.0;
  r.scalars["efficiency_lossless"] =
      transfer_efficiency(run_setup(stirap_setup(lossless), quiet), 2);

  StirapParams dark = params;
  dark.delay = std::abs(params.delay);
  r.scalars["stirap_efficiency"] = transfer_efficiency(run_setup(stirap_setup(dark), quiet), 2);
  r.notes.push_back("pump leads; the population passes through the decaying intermediate level");
  r.trajectory = std::move(t);
  return r;
}

// ---- counterdiabatic ------------------------------------------------------

Setup sastirap_setup(const SaStirapParams& p) {
  require_positive(p.width, "sastirap: width");
  const auto pair = counterintuitive_pair(p.peak, p.peak, p.width, p.delay);
  const double half = 0.5 * std::abs(p.delay) + p.margin * p.width;
  PulseSchedule schedule;
  schedule.add("P", pair.pump);
  schedule.add("S", pair.stokes);
  LevelScheme plain = lambda_scheme(0.0, 0.0, 0.0);
  if (!p.with_cd) return {plain, std::move(schedule), -half, half, basis_state(3, 0)};

  CounterdiabaticOptions opts;
  opts.samples = p.cd_samples;
  schedule.add("CD", counterdiabatic(pair.pump, pair.stokes, -half, half, opts));
  auto couplings = plain.couplings();
  couplings.push_back(Coupling{0, 2, "CD", 0.0, 1.0});
  LevelScheme scheme(scheme_labels::kLambda, plain.levels(), std::move(couplings));
  return {std::move(scheme), std::move(schedule), -half, half, basis_state(3, 0)};
}

ProtocolResult run_sastirap(const SaStirapParams& p) {
  SaStirapParams plain = p;
  plain.with_cd = false;
  SaStirapParams cd = p;
  cd.with_cd = true;
  IntegratorConfig quiet = p.integrator;
  quiet.sample_count = 2;

  ProtocolResult r;
  r.label = "sastirap";
  Trajectory t = run_setup(sastirap_setup(p), p.integrator);
  const Trajectory other = run_setup(sastirap_setup(p.with_cd ? plain : cd), quiet);
  const double eta = transfer_efficiency(t, 2);
  const double eta_other = transfer_efficiency(other, 2);
  r.scalars["efficiency"] = eta;
  r.scalars["efficiency_plain"] = p.with_cd ? eta_other : eta;
  r.scalars["efficiency_cd"] = p.with_cd ? eta : eta_other;
  r.scalars["max_intermediate"] = t.max_population(1);
  add_population_scalars(r, t);
  r.notes.push_back(p.with_cd ? "counterdiabatic 1<->3 pulse applied"
                              : "counterdiabatic pulse omitted");
  r.trajectory = std::move(t);
  return r;
}

// ---- gates ----------------------------------------------------------------

double gate_rotation_angle(const Eigen::Matrix2cd& u) {
  const double global = 0.5 * std::arg(u.determinant());
  const Eigen::Matrix2cd v = u * std::polar(1.0, -global);
  const double s = 0.5 * (v(1, 0) - v(0, 1)).real();
  const double c = 0.5 * (v(0, 0) + v(1, 1)).real();
  double beta = std::atan2(s, c);
  // The global phase is fixed only up to pi, which flips the sign of v.
  if (beta > kPi / 2) beta -= kPi;
  if (beta <= -kPi / 2) beta += kPi;
  return beta;
}

double unitarity_deviation(const Eigen::Matrix2cd& u) {
  return (u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm();
}

Setup rotation_gate_setup(const RotationGateParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < kPi / 2)) {
    throw ConfigError("rotation gate: alpha must lie in (0, pi/2)");
  }
  require_positive(p.width, "rotation gate: width");
  require_positive(p.delay, "rotation gate: delay");
  const double sep = p.separation > 0.0 ? p.separation : 2.0 * (p.delay + 6.0 * p.width);
  auto g = [&](double amplitude, double center, double phase = 0.0) {
    return PulseShape::gaussian(p.peak * amplitude, center, p.width, phase);
  };
  const double d = 0.5 * p.delay;
  // Time mirror of fractional_pair(alpha) with pump and Stokes exchanged.
  const PulseShape pump1 = PulseShape::sum({g(1.0, d), g(std::cos(p.alpha), -d)});
  const PulseShape stokes1 = g(std::sin(p.alpha), -d);
  const auto second = fractional_pair(p.peak, p.width, p.delay, p.alpha);
  PulseShape stokes2 = second.stokes;
  stokes2.phase += p.relative_phase;

  PulseSchedule schedule;
  schedule.add("P", PulseShape::sum({shifted(pump1, -0.5 * sep), shifted(second.pump, 0.5 * sep)}));
  schedule.add("S", PulseShape::sum({shifted(stokes1, -0.5 * sep), shifted(stokes2, 0.5 * sep)}));
  const double half = 0.5 * sep + d + p.margin * p.width;
  return {lambda_scheme(p.Delta, 0.0, 0.0), std::move(schedule), -half, half,
          qubit_input(3, p.input_1, p.input_3)};
}

ProtocolResult run_rotation_gate(const RotationGateParams& p) {
  const Setup s = rotation_gate_setup(p);
  IntegratorConfig quiet = p.integrator;
  quiet.sample_count = 2;
  const GateRun g = reconstruct_gate(s, quiet);
  ProtocolResult r;
  r.label = "rotation_gate";
  add_gate_scalars(r, g, 2.0 * p.alpha, p.input_1, p.input_3);
  r.scalars["leakage_flag"] = g.leakage > 1e-2 ? 1.0 : 0.0;
  if (g.leakage > 1e-2) r.notes.push_back("intermediate-state leakage above 1e-2");
  r.notes.push_back("relative phase between the two processes: " + std::to_string(p.relative_phase));
  r.trajectory = run_setup(s, p.integrator);
  return r;
}

Setup tripod_gate_setup(const TripodGateParams& p) {
  require_positive(p.width, "tripod gate: width");
  require_positive(p.delay, "tripod gate: delay");
  const double sep = p.separation > 0.0 ? p.separation : 2.0 * (p.delay + 6.0 * p.width);
  const double control = p.control_peak < 0.0 ? p.peak : p.control_peak;
  const double d = 0.5 * p.delay;
  const double a = -0.5 * sep, b = 0.5 * sep;
  const double ap = p.peak * std::cos(p.mixing_angle);
  const double as = p.peak * std::sin(p.mixing_angle);
  auto g = [&](double peak, double center, double phase) {
    return PulseShape::gaussian(peak, center, p.width, phase);
  };
  PulseSchedule schedule;
  // First process: control leads, pump and Stokes follow together. Second
  // process: pump and Stokes lead, control follows with the gate phase.
  schedule.add("P", PulseShape::sum({g(ap, a + d, 0.0), g(ap, b - d, 0.0)}));
  schedule.add("S", PulseShape::sum({g(as, a + d, -p.mixing_phase), g(as, b - d, -p.mixing_phase)}));
  schedule.add("C", PulseShape::sum({g(control, a - d, 0.0), g(control, b + d, p.control_phase)}));
  const double zeros[4] = {0.0, 0.0, 0.0, 0.0};
  const double half = b + d + p.margin * p.width;
  return {tripod_scheme(zeros, zeros), std::move(schedule), -half, half,
          qubit_input(4, p.input_1, p.input_3)};
}

ProtocolResult run_tripod_gate(const TripodGateParams& p) {
  const Setup s = tripod_gate_setup(p);
  IntegratorConfig quiet = p.integrator;
  quiet.sample_count = 2;
  const GateRun g = reconstruct_gate(s, quiet);
  ProtocolResult r;
  r.label = "tripod_gate";
  // With chi = cos(m) psi1 + sin(m) e^{i eta} psi3 the gate multiplies chi by
  // e^{i control_phase}; for m = pi/4, eta = pi/2 that is a rotation by half the phase.
  add_gate_scalars(r, g, 0.5 * p.control_phase, p.input_1, p.input_3);
  r.scalars["ancilla_final"] = g.ancilla_final;
  r.trajectory = run_setup(s, p.integrator);
  return r;
}

// ---- composite ------------------------------------------------------------

Setup composite_setup(const CompositeParams& p) {
  PulseSchedule schedule = composite_sequence(p.pairs, p.phases);
  const double extent = 0.5 * std::abs(p.pairs.delay) + p.margin * p.pairs.width;
  const double t0 = composite_pair_center(p.pairs, 0) - extent;
  const double t1 = composite_pair_center(p.pairs, p.phases.size() - 1) + extent;
  return {lambda_scheme(0.0, 0.0, 0.0), std::move(schedule), t0, t1, basis_state(3, 0)};
}

ProtocolResult run_composite(const CompositeParams& p) {
  const Setup s = composite_setup(p);
  ProtocolResult r;
  r.label = "composite";
  Trajectory t = run_setup(s, p.integrator);
  const bool odd = p.phases.size() % 2 == 1;
  r.scalars["pairs"] = static_cast<double>(p.phases.size());
  r.scalars["efficiency"] = transfer_efficiency(t, 2);
  r.scalars["expected_level"] = odd ? 3.0 : 1.0;
  r.scalars["parity_error"] = 1.0 - transfer_efficiency(t, odd ? 2 : 0);
  add_population_scalars(r, t);
  r.trajectory = std::move(t);
  return r;
}

// ---- vSTIRAP --------------------------------------------------------------

Setup vstirap_setup(const VstirapParams& p) {
  PulseSchedule schedule;
  validate(p.drive);
  schedule.add(kDrivePulse, p.drive);
  schedule.add(kCavityPulse, cavity_vacuum_pulse(p.g));
  return {cavity_lambda_scheme(p.g, p.kappa, p.gamma, p.Delta_C, p.Delta_D), std::move(schedule),
          p.t0, p.t1, basis_state(3, 0)};
}

ProtocolResult run_vstirap(const VstirapParams& p) {
  const Setup s = vstirap_setup(p);
  ProtocolResult r;
  r.label = "vstirap";
  Trajectory t = run_setup(s, p.integrator);
  const double emission = photon_emission_probability(t, p.kappa);
  r.scalars["emission_probability"] = emission;
  r.scalars["emission_accumulated"] = t.loss_per_level(2);
  r.scalars["gamma_loss"] = t.loss_per_level(1);
  r.scalars["residual_norm_sq"] = t.norm_sq.back();
  r.scalars["bookkeeping_error"] = emission + t.loss_per_level(1) + t.norm_sq.back() - 1.0;
  r.scalars["min_dark_overlap"] = min_of(t.dark_overlap_trace);
  add_population_scalars(r, t);
  r.trajectory = std::move(t);
  return r;
}

// ---- nonreciprocity -------------------------------------------------------

Setup nonreciprocity_setup(const NonreciprocityParams& p, double separation, Direction direction) {
  require_positive(p.width, "nonreciprocity: width");
  if (!(p.loss_b >= 0.0)) throw ConfigError("nonreciprocity: loss_b must be nonnegative");
  // Channels A, B, C = levels 0, 1, 2; C_BC leads C_AB by `separation`.
  const auto pair = gaussian_pair(p.peak, p.peak, p.width, separation);
  PulseSchedule schedule;
  schedule.add("P", pair.pump);
  schedule.add("S", pair.stokes);
  const double half = 0.5 * std::abs(separation) + p.margin * p.width;
  return {lambda_scheme(0.0, 0.0, p.loss_b), std::move(schedule), -half, half,
          basis_state(3, direction == Direction::Forward ? 0 : 2)};
}

namespace {

struct NonreciprocalPoint {
  double forward;
  double backward;
  double dissipated;
};

NonreciprocalPoint evaluate_point(const NonreciprocityParams& p, double separation) {
  IntegratorConfig cfg = p.integrator;
  cfg.sample_count = 2;
  const Setup f = nonreciprocity_setup(p, separation, Direction::Forward);
  const Setup b = nonreciprocity_setup(p, separation, Direction::Backward);
  const Trajectory tf = propagate_spatial(f.scheme, f.schedule, f.t0, f.t1, f.initial, cfg);
  const Trajectory tb = propagate_spatial(b.scheme, b.schedule, b.t0, b.t1, b.initial, cfg);
  return {transfer_efficiency(tf, 2), transfer_efficiency(tb, 0), tb.loss_per_level(1)};
}

}  // namespace

SweepResult nonreciprocity_scan(const NonreciprocityParams& p, std::size_t threads) {
  if (p.scan_points < 2 || !(p.scan_max > p.scan_min)) {
    throw ConfigError("nonreciprocity: scan needs at least two points over a nonempty range");
  }
  SweepResult out;
  out.axis1 = {"separation", uniform_grid(p.scan_min, p.scan_max, p.scan_points)};
  out.observable = "min(forward, 1 - backward)";
  out.grid.resize(static_cast<Eigen::Index>(p.scan_points), 1);
  parallel_for(p.scan_points, threads, [&](std::size_t i) {
    const auto pt = evaluate_point(p, out.axis1.values[i]);
    out.grid(static_cast<Eigen::Index>(i), 0) = std::min(pt.forward, 1.0 - pt.backward);
  });
  return out;
}

ProtocolResult run_nonreciprocity(const NonreciprocityParams& p, std::size_t threads) {
  ProtocolResult r;
  r.label = "nonreciprocity";
  double separation;
  if (p.separation) {
    separation = *p.separation;
  } else {
    const SweepResult scan = nonreciprocity_scan(p, threads);
    Eigen::Index best = 0;
    scan.grid.col(0).maxCoeff(&best);
    separation = scan.axis1.values[static_cast<std::size_t>(best)];
    r.scalars["scan_objective"] = scan.grid(best, 0);
    r.notes.push_back("separation chosen by a " + std::to_string(p.scan_points) + "-point scan");
  }
  const auto pt = evaluate_point(p, separation);
  r.scalars["separation"] = separation;
  r.scalars["forward_transfer"] = pt.forward;
  r.scalars["backward_to_a"] = pt.backward;
  r.scalars["backward_dissipated_b"] = pt.dissipated;
  const double total = pt.forward + pt.backward;
  r.scalars["asymmetry"] = total > 0.0 ? (pt.forward - pt.backward) / total : 0.0;

  const Setup s = nonreciprocity_setup(p, separation, p.direction);
  r.trajectory = propagate_spatial(s.scheme, s.schedule, s.t0, s.t1, s.initial, p.integrator);
  r.scalars["transfer"] =
      p.direction == Direction::Forward ? pt.forward : pt.backward;
  return r;
}

}  // namespace stirap
