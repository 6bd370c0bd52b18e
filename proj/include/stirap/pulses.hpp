#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stirap/spline.hpp"
#include "stirap/types.hpp"

namespace stirap {

enum class PulseKind { Gaussian, SinSquared, Constant, Square, Sinusoid, Sum };

// Closed-form envelope. `width` is the 1/e half-width for Gaussian, the full
// base for SinSquared and the duration for Square; Sinusoid uses `frequency`
// instead. Sum ignores `peak` and superposes `components`, then applies its
// own `phase`.
struct PulseShape {
  PulseKind kind = PulseKind::Constant;
  double peak = 0.0;
  double center = 0.0;
  double width = 1.0;
  double phase = 0.0;
  double frequency = 0.0;
  std::vector<PulseShape> components;

  static PulseShape gaussian(double peak, double center, double width, double phase = 0.0);
  static PulseShape sin_squared(double peak, double center, double width, double phase = 0.0);
  static PulseShape constant(double peak, double phase = 0.0);
  static PulseShape square(double peak, double center, double width, double phase = 0.0);
  // peak * sin(frequency * (t - center))
  static PulseShape sinusoid(double peak, double frequency, double center, double phase = 0.0);
  static PulseShape sum(std::vector<PulseShape> components, double phase = 0.0);

  bool operator==(const PulseShape&) const = default;
};

// Sampled complex envelope with cubic interpolation; zero outside the sample range.
class NumericPulse {
 public:
  NumericPulse(std::vector<double> times, std::vector<Complex> samples);

  Complex operator()(double t) const;
  Complex derivative(double t) const;
  Complex integral(double a, double b) const { return spline_.integral(a, b); }

  const std::vector<double>& times() const noexcept { return spline_.knots(); }
  const std::vector<Complex>& samples() const noexcept { return spline_.values(); }

  bool operator==(const NumericPulse& other) const {
    return times() == other.times() && samples() == other.samples();
  }

 private:
  CubicSpline spline_;
};

using Pulse = std::variant<PulseShape, NumericPulse>;

// Throws ConfigError when the shape violates its invariants.
void validate(const PulseShape& shape);

Complex eval(const PulseShape& shape, double t);
Complex eval(const Pulse& pulse, double t);
// Time derivative of the complex amplitude. Square is treated as piecewise constant.
Complex derivative(const PulseShape& shape, double t);
Complex derivative(const Pulse& pulse, double t);
// True when the derivative above is exact everywhere (no Square edges).
bool has_smooth_derivative(const Pulse& pulse);

class PulseSchedule {
 public:
  PulseSchedule() = default;
  explicit PulseSchedule(double time_origin) : time_origin_(time_origin) {}

  PulseSchedule& add(const std::string& id, Pulse pulse);
  bool contains(const std::string& id) const { return entries_.count(id) != 0; }
  // Throws ConfigError for unknown ids.
  const Pulse& at(const std::string& id) const;

  Complex eval(const std::string& id, double t) const { return stirap::eval(at(id), t - time_origin_); }

  double time_origin() const noexcept { return time_origin_; }
  const std::map<std::string, Pulse>& entries() const noexcept { return entries_; }

  bool operator==(const PulseSchedule&) const = default;

 private:
  std::map<std::string, Pulse> entries_;
  double time_origin_ = 0.0;
};

struct PulsePair {
  PulseShape pump;
  PulseShape stokes;
};

enum class PulseOrder { Counterintuitive, Intuitive };

// Two Gaussians of width `width`, Stokes centred at center - delay/2 and pump
// at center + delay/2. A negative delay gives the intuitive order.
PulsePair gaussian_pair(double peak_pump, double peak_stokes, double width, double delay,
                        double center = 0.0);

// Stokes precedes pump by `delay` > 0 (OrderingError otherwise). The
// Intuitive flag swaps the lead pulse.
PulsePair counterintuitive_pair(double peak_pump, double peak_stokes, double width, double delay,
                                double center = 0.0,
                                PulseOrder order = PulseOrder::Counterintuitive);

// Mixing angle settles at `theta_fs` in (0, pi/2]:
//   P = peak sin(theta_fs) G(t - delay/2)
//   S = peak [G(t + delay/2) + cos(theta_fs) G(t - delay/2)]
PulsePair fractional_pair(double peak, double width, double delay, double theta_fs,
                          double center = 0.0);

// Mixing angle atan2(|P|, |S|) and its time derivative.
double mixing_angle(const Pulse& pump, const Pulse& stokes, double t);
// Analytic when both pulses have smooth derivatives, otherwise a five-point
// central difference with step `fd_step`. Zero where both envelopes vanish.
double mixing_angle_rate(const Pulse& pump, const Pulse& stokes, double t, double fd_step);

struct CounterdiabaticOptions {
  std::size_t samples = 8001;
};

// Samples i * 2 dtheta/dt on [t0, t1]. Used on the 1<->3 leg with unit
// strength it adds +i dtheta/dt at (1,3) and its conjugate at (3,1).
NumericPulse counterdiabatic(const Pulse& pump, const Pulse& stokes, double t0, double t1,
                             const CounterdiabaticOptions& options = {});

struct CompositeArgs {
  double peak = 50.0;
  double width = 1.0;
  double delay = 1.1;
  // Distance between pair centres; zero selects the minimum allowed spacing.
  double spacing = 0.0;
  double start = 0.0;
};

// Half-extent of one pair as used for the overlap check.
double composite_pair_half_extent(const CompositeArgs& args);

// One STIRAP pair per phase entry, alternating 1->3 (Stokes first) and 3->1
// (pump first). Pair k envelopes carry e^{i phi_P} and e^{i phi_S}. The
// schedule holds ids "P" and "S".
PulseSchedule composite_sequence(const CompositeArgs& args,
                                 std::span<const std::pair<double, double>> phases);

// Centre of pair k in a composite sequence.
double composite_pair_center(const CompositeArgs& args, std::size_t k);

}  // namespace stirap
