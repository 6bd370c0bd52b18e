#include "stirap/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "stirap/adiabatic.hpp"
#include "stirap/errors.hpp"

namespace stirap {
namespace {

void check_initial_state(const StateVector& psi0, std::size_t dimension) {
  if (static_cast<std::size_t>(psi0.size()) != dimension) {
    throw ConfigError("propagate: initial state has " + std::to_string(psi0.size()) +
                      " components, scheme has " + std::to_string(dimension));
  }
  if (!psi0.allFinite()) throw NumericError("propagate: non-finite initial state");
  const double n2 = psi0.squaredNorm();
  if (n2 == 0.0) throw ConfigError("propagate: initial state has zero norm");
  if (n2 > 1.0 + 1e-12) throw ConfigError("propagate: initial state norm exceeds 1");
}

}  // namespace

double Trajectory::final_population(std::size_t level) const {
  return populations(populations.rows() - 1, static_cast<Eigen::Index>(level));
}

double Trajectory::max_population(std::size_t level) const {
  return populations.col(static_cast<Eigen::Index>(level)).maxCoeff();
}

StateVector basis_state(std::size_t dimension, std::size_t level) {
  if (level >= dimension) throw ConfigError("basis state: level out of range");
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(dimension));
  v(static_cast<Eigen::Index>(level)) = 1.0;
  return v;
}

Trajectory propagate(const HamiltonianFn& hamiltonian, std::size_t dimension, double t0, double t1,
                     const StateVector& psi0, const IntegratorConfig& config) {
  check_initial_state(psi0, dimension);
  validate(config);
  if (!(t1 > t0)) throw ConfigError("propagate: need t1 > t0");

  const auto n = static_cast<Eigen::Index>(dimension);
  // Augmented state: amplitudes followed by the cumulative loss per level.
  Eigen::VectorXcd y0 = Eigen::VectorXcd::Zero(2 * n);
  y0.head(n) = psi0;

  Hamiltonian h(n, n);
  OdeRhs rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    hamiltonian(t, h);
    if (!h.allFinite()) throw NumericError("propagate: non-finite Hamiltonian at t=" + std::to_string(t));
    dy.resize(2 * n);
    dy.head(n).noalias() = Complex(0.0, -1.0) * (h * y.head(n));
    for (Eigen::Index k = 0; k < n; ++k) {
      dy(n + k) = -2.0 * h(k, k).imag() * std::norm(y(k));
    }
  };

  Trajectory traj;
  traj.times = uniform_grid(t0, t1, config.sample_count);
  std::vector<Eigen::VectorXcd> samples;
  traj.stats = integrate(rhs, t0, t1, y0, traj.times, samples, config);

  const auto m = static_cast<Eigen::Index>(samples.size());
  traj.populations.resize(m, n);
  traj.loss_trace.resize(m, n);
  traj.amplitudes.reserve(samples.size());
  traj.norm_sq.reserve(samples.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& y = samples[static_cast<std::size_t>(i)];
    traj.amplitudes.emplace_back(y.head(n));
    traj.populations.row(i) = y.head(n).cwiseAbs2().transpose();
    traj.loss_trace.row(i) = y.tail(n).real().transpose();
    traj.norm_sq.push_back(y.head(n).squaredNorm());
  }
  traj.loss_per_level = traj.loss_trace.row(m - 1).transpose();
  return traj;
}

Trajectory propagate(const LevelScheme& scheme, const PulseSchedule& schedule, double t0,
                     double t1, const StateVector& psi0, const IntegratorConfig& config) {
  HamiltonianModel model(scheme, schedule);
  Trajectory traj = propagate([&model](double t, Hamiltonian& h) { model.assemble(t, h); },
                              scheme.dimension(), t0, t1, psi0, config);
  traj.scheme_label = scheme.label();

  if (scheme.is_three_level_raman()) {
    const double fd_step = (t1 - t0) * 1e-6;
    std::vector<double> theta, dark, ratio;
    theta.reserve(traj.size());
    dark.reserve(traj.size());
    ratio.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double t = traj.times[i];
      const auto frame = adiabatic_frame(scheme, schedule, t);
      if (frame) {
        theta.push_back(frame->theta);
        const double n2 = traj.norm_sq[i];
        dark.push_back(n2 > 0.0 ? dark_overlap(traj.amplitudes[i], *frame) / n2 : 0.0);
      } else {
        theta.push_back(std::nan(""));
        dark.push_back(std::nan(""));
      }
      ratio.push_back(local_adiabaticity(scheme, schedule, t, fd_step).ratio);
    }
    traj.theta_trace = std::move(theta);
    traj.dark_overlap_trace = std::move(dark);
    traj.adiabaticity_trace = std::move(ratio);
  }
  return traj;
}

Trajectory propagate_spatial(const LevelScheme& scheme, const PulseSchedule& profiles, double z0,
                             double z1, const StateVector& a0, const IntegratorConfig& config) {
  Trajectory traj = propagate(scheme, profiles, z0, z1, a0, config);
  traj.coordinate = "z";
  return traj;
}

double transfer_efficiency(const Trajectory& trajectory, std::size_t target_level) {
  if (target_level >= trajectory.levels()) {
    throw ConfigError("transfer efficiency: level out of range");
  }
  return trajectory.final_population(target_level) / trajectory.initial_norm_sq();
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) total += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return total;
}

double photon_emission_probability(const Trajectory& trajectory, double kappa) {
  if (trajectory.scheme_label != scheme_labels::kCavityLambda) {
    throw ConfigError("photon emission: trajectory is not from a cavity lambda scheme (label '" +
                      trajectory.scheme_label + "')");
  }
  if (!(kappa >= 0.0)) throw ConfigError("photon emission: negative kappa");
  std::vector<double> photon(trajectory.size());
  for (std::size_t i = 0; i < photon.size(); ++i) {
    photon[i] = trajectory.populations(static_cast<Eigen::Index>(i), 2);
  }
  return 2.0 * kappa * trapezoid(trajectory.times, photon);
}

}  // namespace stirap
