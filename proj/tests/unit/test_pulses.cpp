#include <doctest.h>

#include <cmath>

#include "stirap/errors.hpp"
#include "stirap/integrator.hpp"
#include "stirap/propagator.hpp"
#include "stirap/pulses.hpp"

using namespace stirap;

namespace {

Complex central_difference(const Pulse& p, double t, double h = 1e-5) {
  return (eval(p, t + h) - eval(p, t - h)) / (2.0 * h);
}

double area(const Pulse& p, double t0, double t1, std::size_t n = 200001) {
  const auto t = uniform_grid(t0, t1, n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::abs(eval(p, t[i]));
  return trapezoid(t, y);
}

}  // namespace

TEST_CASE("gaussian envelope: peak at centre, 1/e at one width") {
  const Pulse g = PulseShape::gaussian(3.0, 0.5, 2.0, 0.3);
  CHECK(std::abs(eval(g, 0.5)) == doctest::Approx(3.0));
  CHECK(std::abs(eval(g, 2.5)) == doctest::Approx(3.0 / std::exp(1.0)).epsilon(1e-14));
  CHECK(std::arg(eval(g, 0.1)) == doctest::Approx(0.3));
}

TEST_CASE("pulse areas against closed forms") {
  // Gaussian: peak * width * sqrt(pi); sin^2: peak * width / 2.
  CHECK(area(PulseShape::gaussian(2.0, 0.0, 1.5), -20, 20) ==
        doctest::Approx(2.0 * 1.5 * std::sqrt(kPi)).epsilon(1e-9));
  CHECK(area(PulseShape::sin_squared(2.0, 1.0, 4.0), -2, 4) == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(area(PulseShape::square(2.0, 0.0, 3.0), -5, 5) == doctest::Approx(6.0).epsilon(1e-4));
}

TEST_CASE("analytic derivatives match central differences") {
  const std::vector<Pulse> pulses = {
      PulseShape::gaussian(2.0, 0.3, 1.2, 0.7),
      PulseShape::sin_squared(1.5, 0.0, 3.0, -0.4),
      PulseShape::sinusoid(1.0, 2.5, 0.1, 1.1),
      PulseShape::sum({PulseShape::gaussian(1.0, -1.0, 1.0), PulseShape::gaussian(0.5, 1.0, 0.7)},
                      0.9),
  };
  for (const auto& p : pulses) {
    for (double t : {-1.3, -0.2, 0.0, 0.45, 1.1}) {
      CHECK(std::abs(derivative(p, t) - central_difference(p, t)) < 1e-8);
    }
  }
}

TEST_CASE("support and superposition") {
  const PulseShape sq = PulseShape::square(1.0, 0.0, 2.0);
  CHECK(eval(sq, -1.0001) == Complex{});
  CHECK(eval(sq, 1.0) == Complex{});
  CHECK(eval(sq, 0.999) == Complex{1.0, 0.0});
  CHECK(eval(PulseShape::sin_squared(1.0, 0.0, 2.0), 1.5) == Complex{});

  const PulseShape a = PulseShape::gaussian(1.0, -0.5, 1.0, 0.2);
  const PulseShape b = PulseShape::sinusoid(0.7, 1.3, 0.0, -0.6);
  const PulseShape sum = PulseShape::sum({a, b}, 0.4);
  for (double t : {-2.0, -0.3, 0.8}) {
    CHECK(std::abs(eval(sum, t) - (eval(a, t) + eval(b, t)) * std::polar(1.0, 0.4)) < 1e-15);
  }
}

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(validate(PulseShape::gaussian(1.0, 0.0, 0.0)), ConfigError);
  CHECK_THROWS_AS(validate(PulseShape::gaussian(-1.0, 0.0, 1.0)), ConfigError);
  CHECK_THROWS_AS(validate(PulseShape::sum({})), ConfigError);
  CHECK_THROWS_AS(validate(PulseShape::gaussian(NAN, 0.0, 1.0)), ConfigError);
  CHECK_NOTHROW(validate(PulseShape::constant(0.0)));
}

TEST_CASE("numeric pulse reproduces knots and vanishes outside") {
  std::vector<double> t;
  std::vector<Complex> v;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(-2.0 + 0.1 * i);
    v.push_back(std::polar(std::exp(-t.back() * t.back()), 0.5 * t.back()));
  }
  const NumericPulse p(t, v);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(p(t[i]) - v[i]) < 1e-14);
  CHECK(p(-2.5) == Complex{});
  CHECK(p(2.5) == Complex{});
  // Cubic interpolation of a smooth function between knots.
  CHECK(std::abs(p(0.05) - std::polar(std::exp(-0.0025), 0.025)) < 1e-4);
  CHECK_THROWS_AS(NumericPulse({0.0, 1.0}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("pair ordering") {
  const auto pair = gaussian_pair(1.0, 2.0, 1.0, 1.1, 0.5);
  CHECK(pair.stokes.center == doctest::Approx(-0.05));
  CHECK(pair.pump.center == doctest::Approx(1.05));
  const auto intuitive = counterintuitive_pair(1.0, 1.0, 1.0, 1.1, 0.0, PulseOrder::Intuitive);
  CHECK(intuitive.pump.center < intuitive.stokes.center);
  CHECK_THROWS_AS(counterintuitive_pair(1.0, 1.0, 1.0, 0.0), OrderingError);
  CHECK_THROWS_AS(counterintuitive_pair(1.0, 1.0, 1.0, -1.0), OrderingError);
}

TEST_CASE("mixing angle runs from 0 to pi/2 for the counterintuitive order") {
  const auto pair = counterintuitive_pair(10.0, 10.0, 1.0, 1.1);
  CHECK(mixing_angle(pair.pump, pair.stokes, -6.0) < 1e-3);
  CHECK(mixing_angle(pair.pump, pair.stokes, 0.0) == doctest::Approx(kPi / 4));
  CHECK(mixing_angle(pair.pump, pair.stokes, 6.0) > kPi / 2 - 1e-3);
}

TEST_CASE("fractional pair settles at the requested angle") {
  for (double theta : {0.3, kPi / 4, 1.2}) {
    const auto pair = fractional_pair(10.0, 1.0, 1.1, theta);
    CHECK(mixing_angle(pair.pump, pair.stokes, 12.0) == doctest::Approx(theta).epsilon(1e-9));
    CHECK(mixing_angle(pair.pump, pair.stokes, -8.0) < 1e-6);
  }
  CHECK_THROWS_AS(fractional_pair(10.0, 1.0, 1.1, 0.0), ConfigError);
  CHECK_THROWS_AS(fractional_pair(10.0, 1.0, 1.1, 2.0), ConfigError);
}

TEST_CASE("mixing angle rate matches a finite difference of the angle") {
  const auto pair = counterintuitive_pair(5.0, 4.0, 1.0, 1.3);
  for (double t : {-1.0, 0.0, 0.7}) {
    const double h = 1e-5;
    const double fd = (mixing_angle(pair.pump, pair.stokes, t + h) -
                       mixing_angle(pair.pump, pair.stokes, t - h)) / (2 * h);
    CHECK(mixing_angle_rate(pair.pump, pair.stokes, t, 1e-4) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("counterdiabatic pulse samples i * 2 dtheta/dt") {
  const auto pair = counterintuitive_pair(2.0, 2.0, 1.0, 1.1);
  const NumericPulse cd = counterdiabatic(pair.pump, pair.stokes, -9.0, 9.0, {1801});
  CHECK(cd.times().size() == 1801);
  for (double t : {-1.0, 0.0, 0.5}) {
    const Complex expected(0.0, 2.0 * mixing_angle_rate(pair.pump, pair.stokes, t, 1e-6));
    CHECK(std::abs(cd(t) - expected) < 1e-6);
  }
  // Its area is the full sweep of 2 theta: pi.
  CHECK(std::abs(cd.integral(-9.0, 9.0)) == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("composite sequence alternates direction without overlap") {
  CompositeArgs args;
  const std::vector<std::pair<double, double>> phases{{0, 0}, {0.5, 0.1}, {0, 0}};
  const PulseSchedule s = composite_sequence(args, phases);
  CHECK(s.contains("P"));
  CHECK(s.contains("S"));
  const double c1 = composite_pair_center(args, 1);
  CHECK(c1 == doctest::Approx(2.0 * composite_pair_half_extent(args)));
  // Second pair is pump first: near its start the pump dominates.
  CHECK(std::abs(s.eval("P", c1 - 1.5)) > std::abs(s.eval("S", c1 - 1.5)));
  CHECK(std::arg(s.eval("P", c1 + 0.55)) == doctest::Approx(0.5));
  args.spacing = 1.0;
  CHECK_THROWS_AS(composite_sequence(args, phases), ConfigError);
}

TEST_CASE("schedule lookups and time origin") {
  PulseSchedule s(2.0);
  s.add("P", PulseShape::gaussian(1.0, 0.0, 1.0));
  CHECK(s.eval("P", 2.0) == Complex{1.0, 0.0});
  CHECK_THROWS_AS(s.at("Q"), ConfigError);
  CHECK_THROWS_AS(s.add("P", PulseShape::constant(1.0)), ConfigError);
}
