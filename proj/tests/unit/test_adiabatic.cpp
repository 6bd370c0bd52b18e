#include <doctest.h>

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "stirap/adiabatic.hpp"
#include "stirap/errors.hpp"

using namespace stirap;

namespace {

Eigen::Matrix3d resonant_h(double p, double s, double Delta) {
  Eigen::Matrix3d h;
  h << 0, 0.5 * p, 0, 0.5 * p, Delta, 0.5 * s, 0, 0.5 * s, 0;
  return h;
}

}  // namespace

TEST_CASE("closed-form eigenvalues agree with a numeric eigensolve") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = u(rng), s = u(rng), d = u(rng);
    const Eigen::Matrix3d h = resonant_h(p, s, d);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
    const auto e = eigenvalues(p, s, d);
    const Eigen::Vector3d analytic(e.minus, e.zero, e.plus);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK((analytic - es.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }
}

TEST_CASE("dressed states are orthonormal eigenvectors") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = u(rng), s = u(rng), d = u(rng);
    const auto f = adiabatic_frame(p, s, d);
    REQUIRE(f);
    Eigen::Matrix3d v;
    v << f->phi_plus, f->phi_zero, f->phi_minus;
    CHECK((v.transpose() * v - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    const Eigen::Matrix3d h = resonant_h(p, s, d);
    CHECK((h * f->phi_zero).norm() <= 1e-12 * h.norm());
    CHECK((h * f->phi_plus - f->eps_plus * f->phi_plus).norm() <= 1e-12 * h.norm());
    CHECK((h * f->phi_minus - f->eps_minus * f->phi_minus).norm() <= 1e-12 * h.norm());
    CHECK(f->theta >= 0.0);
    CHECK(f->theta <= kPi / 2);
  }
}

TEST_CASE("mixing angles are undefined without couplings") {
  CHECK_FALSE(mixing_angles(0.0, 0.0, 1.0));
  const auto a = mixing_angles(1.0, 0.0, 0.0);
  REQUIRE(a);
  CHECK(a->theta == doctest::Approx(kPi / 2));
  CHECK(a->phi == doctest::Approx(kPi / 4));
}

TEST_CASE("numeric dressed states match the resonant closed form") {
  const double p = 7.0, s = 3.0, d = 2.0;
  const auto n = numeric_dressed_states(resonant_h(p, s, d).cast<Complex>());
  const auto e = eigenvalues(p, s, d);
  CHECK(n.energies(0) == doctest::Approx(e.minus));
  CHECK(n.energies(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(n.energies(2) == doctest::Approx(e.plus));
}

TEST_CASE("rotating pair has a constant adiabaticity ratio A/c") {
  // P = A sin(ct), S = A cos(ct): theta = ct and Omega_rms = A throughout.
  const double A = 12.0, c = 0.4;
  const LevelScheme scheme = lambda_scheme(0, 0, 0);
  PulseSchedule s;
  s.add("P", PulseShape::sinusoid(A, c, 0.0));
  s.add("S", PulseShape::sinusoid(A, c, -kPi / (2 * c)));
  for (double t : {0.1, 1.0, 2.5, 3.8}) {
    CHECK(local_adiabaticity(scheme, s, t).ratio == doctest::Approx(A / c).epsilon(1e-9));
  }
}

TEST_CASE("static mixing angle gives an infinite ratio") {
  const LevelScheme scheme = lambda_scheme(0, 0, 0);
  PulseSchedule s;
  s.add("P", PulseShape::constant(0.0));
  s.add("S", PulseShape::gaussian(5.0, 0.0, 1.0));
  CHECK(local_adiabaticity(scheme, s, 0.3).ratio == kAdiabaticInfinity);
}

TEST_CASE("global pulse area by quadrature") {
  const LevelScheme scheme = lambda_scheme(0, 0, 0);
  PulseSchedule s;
  s.add("P", PulseShape::gaussian(50.0, 0.55, 1.0));
  s.add("S", PulseShape::gaussian(50.0, -0.55, 1.0));
  const auto g = global_adiabaticity(scheme, s, -8.0, 8.0);
  CHECK_FALSE(g.empty);
  CHECK(g.area > 10.0);
  CHECK(g.mean_rms == doctest::Approx(g.area / g.overlap_time));

  PulseSchedule none;
  none.add("P", PulseShape::gaussian(50.0, -5.0, 0.1));
  none.add("S", PulseShape::gaussian(50.0, 5.0, 0.1));
  CHECK(global_adiabaticity(scheme, none, -6.0, 6.0).empty);
}

TEST_CASE("frame analysis rejects other layouts") {
  const LevelScheme tripod = tripod_scheme(std::vector<double>(4, 0.0), std::vector<double>(4, 0.0));
  PulseSchedule s;
  for (const char* id : {"P", "S", "C"}) s.add(id, PulseShape::constant(1.0));
  CHECK_THROWS_AS(adiabatic_frame(tripod, s, 0.0), UnsupportedError);
  CHECK_THROWS_AS(local_adiabaticity(tripod, s, 0.0), UnsupportedError);
}

TEST_CASE("dark overlap of the initial bare state") {
  const auto f = adiabatic_frame(0.0, 1.0, 0.0);
  REQUIRE(f);
  StateVector psi = StateVector::Zero(3);
  psi(0) = 1.0;
  CHECK(dark_overlap(psi, *f) == doctest::Approx(1.0));
}
