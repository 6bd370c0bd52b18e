#include "stirap/pulses.hpp"

#include <algorithm>
#include <cmath>

#include "stirap/errors.hpp"

namespace stirap {
namespace {

Complex phasor(double phase) { return std::polar(1.0, phase); }

bool finite(double x) { return std::isfinite(x); }

}  // namespace

PulseShape PulseShape::gaussian(double peak, double center, double width, double phase) {
  return {PulseKind::Gaussian, peak, center, width, phase, 0.0, {}};
}

PulseShape PulseShape::sin_squared(double peak, double center, double width, double phase) {
  return {PulseKind::SinSquared, peak, center, width, phase, 0.0, {}};
}

PulseShape PulseShape::constant(double peak, double phase) {
  return {PulseKind::Constant, peak, 0.0, 1.0, phase, 0.0, {}};
}

PulseShape PulseShape::square(double peak, double center, double width, double phase) {
  return {PulseKind::Square, peak, center, width, phase, 0.0, {}};
}

PulseShape PulseShape::sinusoid(double peak, double frequency, double center, double phase) {
  return {PulseKind::Sinusoid, peak, center, 1.0, phase, frequency, {}};
}

PulseShape PulseShape::sum(std::vector<PulseShape> components, double phase) {
  return {PulseKind::Sum, 0.0, 0.0, 1.0, phase, 0.0, std::move(components)};
}

void validate(const PulseShape& shape) {
  if (!finite(shape.peak) || !finite(shape.center) || !finite(shape.width) ||
      !finite(shape.phase) || !finite(shape.frequency)) {
    throw ConfigError("pulse: non-finite parameter");
  }
  switch (shape.kind) {
    case PulseKind::Gaussian:
    case PulseKind::SinSquared:
    case PulseKind::Square:
      if (shape.width <= 0.0) throw ConfigError("pulse: width must be positive");
      [[fallthrough]];
    case PulseKind::Constant:
      if (shape.peak < 0.0) throw ConfigError("pulse: peak must be nonnegative");
      break;
    case PulseKind::Sinusoid:
      break;
    case PulseKind::Sum:
      if (shape.components.empty()) throw ConfigError("pulse: sum needs components");
      for (const auto& c : shape.components) validate(c);
      break;
  }
}

Complex eval(const PulseShape& s, double t) {
  switch (s.kind) {
    case PulseKind::Gaussian: {
      const double x = (t - s.center) / s.width;
      return s.peak * std::exp(-x * x) * phasor(s.phase);
    }
    case PulseKind::SinSquared: {
      const double x = t - s.center;
      if (std::abs(x) > 0.5 * s.width) return {};
      const double c = std::cos(kPi * x / s.width);
      return s.peak * c * c * phasor(s.phase);
    }
    case PulseKind::Constant:
      return s.peak * phasor(s.phase);
    case PulseKind::Square: {
      const double lo = s.center - 0.5 * s.width;
      const double hi = s.center + 0.5 * s.width;
      return (t >= lo && t < hi) ? s.peak * phasor(s.phase) : Complex{};
    }
    case PulseKind::Sinusoid:
      return s.peak * std::sin(s.frequency * (t - s.center)) * phasor(s.phase);
    case PulseKind::Sum: {
      Complex total;
      for (const auto& c : s.components) total += eval(c, t);
      return total * phasor(s.phase);
    }
  }
  return {};
}

Complex derivative(const PulseShape& s, double t) {
  switch (s.kind) {
    case PulseKind::Gaussian: {
      const double x = (t - s.center) / s.width;
      return -2.0 * x / s.width * s.peak * std::exp(-x * x) * phasor(s.phase);
    }
    case PulseKind::SinSquared: {
      const double x = t - s.center;
      if (std::abs(x) > 0.5 * s.width) return {};
      const double arg = kPi * x / s.width;
      // d/dt cos^2(arg) = -sin(2 arg) * pi / width
      return -s.peak * std::sin(2.0 * arg) * kPi / s.width * phasor(s.phase);
    }
    case PulseKind::Constant:
    case PulseKind::Square:
      return {};
    case PulseKind::Sinusoid:
      return s.peak * s.frequency * std::cos(s.frequency * (t - s.center)) * phasor(s.phase);
    case PulseKind::Sum: {
      Complex total;
      for (const auto& c : s.components) total += derivative(c, t);
      return total * phasor(s.phase);
    }
  }
  return {};
}

namespace {

bool smooth(const PulseShape& s) {
  if (s.kind == PulseKind::Square) return false;
  return std::all_of(s.components.begin(), s.components.end(), smooth);
}

}  // namespace

bool has_smooth_derivative(const Pulse& pulse) {
  if (const auto* s = std::get_if<PulseShape>(&pulse)) return smooth(*s);
  return true;
}

NumericPulse::NumericPulse(std::vector<double> times, std::vector<Complex> samples) {
  if (times.size() < 4) throw ConfigError("numeric pulse: need at least 4 samples");
  spline_ = CubicSpline(std::move(times), std::move(samples));
}

Complex NumericPulse::operator()(double t) const {
  if (t < spline_.front() || t > spline_.back()) return {};
  return spline_(t);
}

Complex NumericPulse::derivative(double t) const {
  if (t < spline_.front() || t > spline_.back()) return {};
  return spline_.derivative(t);
}

Complex eval(const Pulse& pulse, double t) {
  return std::visit([t](const auto& p) -> Complex {
    if constexpr (std::is_same_v<std::decay_t<decltype(p)>, PulseShape>) {
      return eval(p, t);
    } else {
      return p(t);
    }
  }, pulse);
}

Complex derivative(const Pulse& pulse, double t) {
  return std::visit([t](const auto& p) -> Complex {
    if constexpr (std::is_same_v<std::decay_t<decltype(p)>, PulseShape>) {
      return derivative(p, t);
    } else {
      return p.derivative(t);
    }
  }, pulse);
}

PulseSchedule& PulseSchedule::add(const std::string& id, Pulse pulse) {
  if (id.empty()) throw ConfigError("schedule: empty pulse id");
  if (entries_.count(id)) throw ConfigError("schedule: duplicate pulse id '" + id + "'");
  if (const auto* s = std::get_if<PulseShape>(&pulse)) validate(*s);
  entries_.emplace(id, std::move(pulse));
  return *this;
}

const Pulse& PulseSchedule::at(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw ConfigError("schedule: unresolved pulse id '" + id + "'");
  return it->second;
}

PulsePair gaussian_pair(double peak_pump, double peak_stokes, double width, double delay,
                        double center) {
  if (!(width > 0.0)) throw ConfigError("pulse pair: width must be positive");
  if (!finite(delay)) throw ConfigError("pulse pair: non-finite delay");
  PulsePair pair{PulseShape::gaussian(peak_pump, center + 0.5 * delay, width),
                 PulseShape::gaussian(peak_stokes, center - 0.5 * delay, width)};
  validate(pair.pump);
  validate(pair.stokes);
  return pair;
}

PulsePair counterintuitive_pair(double peak_pump, double peak_stokes, double width, double delay,
                                double center, PulseOrder order) {
  if (!(delay > 0.0)) {
    throw OrderingError("counterintuitive pair: delay must be positive (use the intuitive flag)");
  }
  if (!(width > 0.0)) throw ConfigError("counterintuitive pair: width must be positive");
  const double signed_delay = order == PulseOrder::Counterintuitive ? delay : -delay;
  return gaussian_pair(peak_pump, peak_stokes, width, signed_delay, center);
}

PulsePair fractional_pair(double peak, double width, double delay, double theta_fs,
                          double center) {
  if (!(theta_fs > 0.0) || theta_fs > 0.5 * kPi) {
    throw ConfigError("fractional pair: theta_fs must lie in (0, pi/2]");
  }
  if (theta_fs == 0.5 * kPi) {
    return counterintuitive_pair(peak, peak, width, delay, center);
  }
  if (!(delay > 0.0)) throw OrderingError("fractional pair: delay must be positive");
  if (!(width > 0.0)) throw ConfigError("fractional pair: width must be positive");
  const double late = center + 0.5 * delay;
  const double early = center - 0.5 * delay;
  PulsePair pair{
      PulseShape::gaussian(peak * std::sin(theta_fs), late, width),
      PulseShape::sum({PulseShape::gaussian(peak, early, width),
                       PulseShape::gaussian(peak * std::cos(theta_fs), late, width)})};
  validate(pair.pump);
  validate(pair.stokes);
  return pair;
}

double mixing_angle(const Pulse& pump, const Pulse& stokes, double t) {
  return std::atan2(std::abs(eval(pump, t)), std::abs(eval(stokes, t)));
}

namespace {

// d|z|/dt from z and dz/dt.
double magnitude_rate(Complex z, Complex dz) {
  const double r = std::abs(z);
  if (r == 0.0) return std::abs(dz);
  return (std::conj(z) * dz).real() / r;
}

}  // namespace

double mixing_angle_rate(const Pulse& pump, const Pulse& stokes, double t, double fd_step) {
  const double p = std::abs(eval(pump, t));
  const double s = std::abs(eval(stokes, t));
  const double rms2 = p * p + s * s;
  if (rms2 == 0.0) return 0.0;
  if (has_smooth_derivative(pump) && has_smooth_derivative(stokes)) {
    const double dp = magnitude_rate(eval(pump, t), derivative(pump, t));
    const double ds = magnitude_rate(eval(stokes, t), derivative(stokes, t));
    return (s * dp - p * ds) / rms2;
  }
  const double h = fd_step;
  auto th = [&](double x) { return mixing_angle(pump, stokes, x); };
  return (th(t - 2 * h) - 8 * th(t - h) + 8 * th(t + h) - th(t + 2 * h)) / (12 * h);
}

NumericPulse counterdiabatic(const Pulse& pump, const Pulse& stokes, double t0, double t1,
                             const CounterdiabaticOptions& options) {
  if (!(t1 > t0)) throw ConfigError("counterdiabatic: empty window");
  const std::size_t n = std::max<std::size_t>(options.samples, 4);
  const double fd_step = (t1 - t0) * 1e-6;
  std::vector<double> times(n);
  std::vector<Complex> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    times[i] = t;
    samples[i] = Complex(0.0, 2.0 * mixing_angle_rate(pump, stokes, t, fd_step));
  }
  return NumericPulse(std::move(times), std::move(samples));
}

double composite_pair_half_extent(const CompositeArgs& args) {
  return 0.5 * std::abs(args.delay) + 5.0 * args.width;
}

double composite_pair_center(const CompositeArgs& args, std::size_t k) {
  const double spacing =
      args.spacing > 0.0 ? args.spacing : 2.0 * composite_pair_half_extent(args);
  return args.start + spacing * static_cast<double>(k);
}

PulseSchedule composite_sequence(const CompositeArgs& args,
                                 std::span<const std::pair<double, double>> phases) {
  if (phases.empty()) throw ConfigError("composite: phase list is empty");
  if (!(args.delay > 0.0)) throw OrderingError("composite: delay must be positive");
  if (!(args.width > 0.0)) throw ConfigError("composite: width must be positive");
  const double extent = composite_pair_half_extent(args);
  if (args.spacing > 0.0 && args.spacing < 2.0 * extent) {
    throw ConfigError("composite: pair windows overlap (spacing below " +
                      std::to_string(2.0 * extent) + ")");
  }
  std::vector<PulseShape> pumps;
  std::vector<PulseShape> stokes;
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const auto order = k % 2 == 0 ? PulseOrder::Counterintuitive : PulseOrder::Intuitive;
    auto pair = counterintuitive_pair(args.peak, args.peak, args.width, args.delay,
                                      composite_pair_center(args, k), order);
    pair.pump.phase += phases[k].first;
    pair.stokes.phase += phases[k].second;
    pumps.push_back(pair.pump);
    stokes.push_back(pair.stokes);
  }
  PulseSchedule schedule;
  if (pumps.size() == 1) {
    schedule.add("P", pumps.front());
    schedule.add("S", stokes.front());
  } else {
    schedule.add("P", PulseShape::sum(std::move(pumps)));
    schedule.add("S", PulseShape::sum(std::move(stokes)));
  }
  return schedule;
}

}  // namespace stirap
