#pragma once

#include <span>
#include <vector>

#include "stirap/integrator.hpp"
#include "stirap/linkage.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

// -sum w ln w with 0 ln 0 = 0. ConfigError on negative weights.
double von_neumann_entropy(std::span<const double> weights);

// Diagonal density matrix over the basis levels.
struct DiagonalEnsemble {
  std::vector<double> weights;
};

// ConfigError unless the weights are nonnegative and sum to 1 within 1e-12.
void validate(const DiagonalEnsemble& ensemble);

struct EnsembleEvolution {
  std::vector<double> initial_spectrum;  // sorted descending
  std::vector<double> final_spectrum;    // eigenvalues of the final rho, sorted descending
  Eigen::MatrixXcd final_density;
  double entropy_before = 0.0;
  double entropy_after = 0.0;
  double max_initial_weight = 0.0;
  double max_final_population = 0.0;  // largest diagonal element of the final rho
};

// Propagates each basis state with nonzero weight and forms
// rho = sum_i w_i |psi_i><psi_i|. UnsupportedError if any level decays.
EnsembleEvolution evolve_diagonal_ensemble(const LevelScheme& scheme, const PulseSchedule& schedule,
                                           const DiagonalEnsemble& ensemble, double t0, double t1,
                                           const IntegratorConfig& config = {});

}  // namespace stirap
