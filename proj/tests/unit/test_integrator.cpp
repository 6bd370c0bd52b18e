#include <doctest.h>

#include <cmath>

#include "stirap/errors.hpp"
#include "stirap/integrator.hpp"

using namespace stirap;

namespace {

// y' = -i w y with y(0) = 1: y(t) = exp(-i w t).
const OdeRhs kRotation = [](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
  dy = Complex(0.0, -3.0) * y;
};

// Linear system whose exact solution is a rotation in the (y0, y1) plane.
const OdeRhs kOscillator = [](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
  dy.resize(2);
  dy(0) = y(1);
  dy(1) = -y(0);
};

double rk4_error(double h) {
  IntegratorConfig c;
  c.method = IntegrationMethod::ClassicalRk4;
  c.fixed_step = h;
  c.sample_count = 2;
  std::vector<Eigen::VectorXcd> out;
  const std::vector<double> times{0.0, 2.0};
  Eigen::VectorXcd y0(1);
  y0(0) = 1.0;
  integrate(kRotation, 0.0, 2.0, y0, times, out, c);
  return std::abs(out[1](0) - std::exp(Complex(0.0, -6.0)));
}

}  // namespace

TEST_CASE("adaptive integration reaches the exact rotation") {
  IntegratorConfig c;
  c.rel_tol = 1e-12;
  c.abs_tol = 1e-14;
  const auto times = uniform_grid(0.0, 5.0, 51);
  Eigen::VectorXcd y0(1);
  y0(0) = 1.0;
  std::vector<Eigen::VectorXcd> out;
  const auto stats = integrate(kRotation, 0.0, 5.0, y0, times, out, c);
  REQUIRE(out.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    // Dense output between steps is accurate too.
    CHECK(std::abs(out[i](0) - std::exp(Complex(0.0, -3.0 * times[i]))) < 1e-9);
  }
  CHECK(stats.accepted > 0);
  CHECK(stats.rhs_evaluations > stats.accepted);
}

TEST_CASE("oscillator phase after many periods") {
  IntegratorConfig c;
  c.rel_tol = 1e-11;
  c.abs_tol = 1e-13;
  const std::vector<double> times{0.0, 20 * kPi};
  Eigen::VectorXcd y0(2);
  y0 << 1.0, 0.0;
  std::vector<Eigen::VectorXcd> out;
  integrate(kOscillator, 0.0, 20 * kPi, y0, times, out, c);
  CHECK(std::abs(out[1](0) - 1.0) < 1e-8);
  CHECK(std::abs(out[1](1)) < 1e-8);
}

TEST_CASE("classical RK4 converges at fourth order") {
  const double e1 = rk4_error(0.02), e2 = rk4_error(0.01);
  CHECK(e2 < e1);
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("RK4 Hermite sampling between steps") {
  IntegratorConfig c;
  c.method = IntegrationMethod::ClassicalRk4;
  c.fixed_step = 1e-3;
  const auto times = uniform_grid(0.0, 1.0, 7);  // off the step grid
  Eigen::VectorXcd y0(1);
  y0(0) = 1.0;
  std::vector<Eigen::VectorXcd> out;
  integrate(kRotation, 0.0, 1.0, y0, times, out, c);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(std::abs(out[i](0) - std::exp(Complex(0.0, -3.0 * times[i]))) < 1e-9);
  }
}

TEST_CASE("step budget exhaustion is a stiffness error") {
  IntegratorConfig c;
  c.max_steps = 5;
  c.rel_tol = 1e-12;
  Eigen::VectorXcd y0(1);
  y0(0) = 1.0;
  std::vector<Eigen::VectorXcd> out;
  const std::vector<double> times{0.0, 100.0};
  CHECK_THROWS_AS(integrate(kRotation, 0.0, 100.0, y0, times, out, c), StiffnessError);
}

TEST_CASE("non-finite right-hand sides are rejected") {
  const OdeRhs bad = [](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    dy = y * NAN;
  };
  Eigen::VectorXcd y0(1);
  y0(0) = 1.0;
  std::vector<Eigen::VectorXcd> out;
  const std::vector<double> times{0.0, 1.0};
  CHECK_THROWS_AS(integrate(bad, 0.0, 1.0, y0, times, out, IntegratorConfig{}), NumericError);
}

TEST_CASE("config validation") {
  IntegratorConfig c;
  CHECK_NOTHROW(validate(c));
  c.rel_tol = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.sample_count = 1;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("uniform grid endpoints are exact") {
  const auto g = uniform_grid(-1.5, 2.5, 9);
  CHECK(g.front() == -1.5);
  CHECK(g.back() == 2.5);
  CHECK(g[4] == doctest::Approx(0.5));
}
