#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stirap/integrator.hpp"
#include "stirap/linkage.hpp"
#include "stirap/pulses.hpp"
#include "stirap/types.hpp"

namespace stirap {

// Sampled solution of i dpsi/dt = H(t) psi. `coordinate` is "t" for time
// evolution and "z" for spatial propagation.
struct Trajectory {
  std::string coordinate = "t";
  std::string scheme_label;
  std::vector<double> times;
  std::vector<StateVector> amplitudes;
  Eigen::MatrixXd populations;    // samples x levels
  std::vector<double> norm_sq;
  Eigen::MatrixXd loss_trace;     // samples x levels, cumulative 2 gamma_k int |c_k|^2
  Eigen::VectorXd loss_per_level; // final row of loss_trace
  // Three-level Raman schemes only.
  std::optional<std::vector<double>> theta_trace;
  std::optional<std::vector<double>> dark_overlap_trace;
  std::optional<std::vector<double>> adiabaticity_trace;
  IntegrationStats stats;

  std::size_t levels() const { return static_cast<std::size_t>(populations.cols()); }
  std::size_t size() const { return times.size(); }
  double initial_norm_sq() const { return norm_sq.front(); }
  double final_population(std::size_t level) const;
  double max_population(std::size_t level) const;
  double total_loss() const { return loss_per_level.sum(); }
};

// H(t) written into the second argument.
using HamiltonianFn = std::function<void(double, Hamiltonian&)>;

// Generic propagation. Loss rates are read from -Im H_kk at each step.
Trajectory propagate(const HamiltonianFn& hamiltonian, std::size_t dimension, double t0, double t1,
                     const StateVector& psi0, const IntegratorConfig& config);

// Propagation under assemble_hamiltonian(scheme, schedule, t). Adds the
// dressed-state traces when the scheme is a three-level Raman layout.
Trajectory propagate(const LevelScheme& scheme, const PulseSchedule& schedule, double t0,
                     double t1, const StateVector& psi0, const IntegratorConfig& config = {});

// Same mathematics with the propagation distance z as evolution parameter:
// couplings are position-dependent profiles, decay rates are per-length losses.
Trajectory propagate_spatial(const LevelScheme& scheme, const PulseSchedule& profiles, double z0,
                             double z1, const StateVector& a0, const IntegratorConfig& config = {});

// Final population of `target_level` over the initial norm squared.
double transfer_efficiency(const Trajectory& trajectory, std::size_t target_level);

// Basis state |level> in an N-level space.
StateVector basis_state(std::size_t dimension, std::size_t level);

// 2 kappa * int |c_{g,1}|^2 dt by the trapezoid rule on the sample grid.
// ConfigError unless the trajectory came from a cavity lambda scheme.
double photon_emission_probability(const Trajectory& trajectory, double kappa);

// Trapezoid rule over the trajectory grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace stirap
