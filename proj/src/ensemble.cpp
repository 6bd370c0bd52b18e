#include "stirap/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "stirap/errors.hpp"
#include "stirap/propagator.hpp"

namespace stirap {

double von_neumann_entropy(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("entropy: negative weight");
    if (w > 0.0) s -= w * std::log(w);
  }
  return s;
}

void validate(const DiagonalEnsemble& ensemble) {
  if (ensemble.weights.empty()) throw ConfigError("ensemble: no weights");
  double total = 0.0;
  for (double w : ensemble.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("ensemble: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("ensemble: weights must sum to 1");
}

EnsembleEvolution evolve_diagonal_ensemble(const LevelScheme& scheme, const PulseSchedule& schedule,
                                           const DiagonalEnsemble& ensemble, double t0, double t1,
                                           const IntegratorConfig& config) {
  validate(ensemble);
  if (!scheme.lossless()) {
    throw UnsupportedError("ensemble evolution requires unitary dynamics (all decay rates zero)");
  }
  const std::size_t n = scheme.dimension();
  if (ensemble.weights.size() != n) {
    throw ConfigError("ensemble: weight count does not match the number of levels");
  }

  IntegratorConfig cfg = config;
  cfg.sample_count = 2;
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = ensemble.weights[i];
    if (w == 0.0) continue;
    const Trajectory traj = propagate(scheme, schedule, t0, t1, basis_state(n, i), cfg);
    const StateVector& psi = traj.amplitudes.back();
    rho.noalias() += w * psi * psi.adjoint();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (rho + rho.adjoint()),
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("ensemble: eigensolve failed");

  EnsembleEvolution out;
  out.initial_spectrum = ensemble.weights;
  std::sort(out.initial_spectrum.begin(), out.initial_spectrum.end(), std::greater<>());
  out.final_spectrum.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
  std::sort(out.final_spectrum.begin(), out.final_spectrum.end(), std::greater<>());
  // Round-off can leave tiny negative eigenvalues; clamp before the logarithm.
  std::vector<double> clamped = out.final_spectrum;
  for (double& v : clamped) v = std::max(v, 0.0);
  out.final_density = rho;
  out.entropy_before = von_neumann_entropy(ensemble.weights);
  out.entropy_after = von_neumann_entropy(clamped);
  out.max_initial_weight = out.initial_spectrum.front();
  out.max_final_population = rho.diagonal().real().maxCoeff();
  return out;
}

}  // namespace stirap
