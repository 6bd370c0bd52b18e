#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "stirap/types.hpp"

namespace stirap {

enum class IntegrationMethod { DormandPrince45, ClassicalRk4 };

struct IntegratorConfig {
  IntegrationMethod method = IntegrationMethod::DormandPrince45;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t sample_count = 1000;
  // RK4 step; zero picks max_step when finite, else (t1 - t0) / 1e5.
  double fixed_step = 0.0;
  std::size_t max_steps = 20'000'000;

  bool operator==(const IntegratorConfig&) const = default;
};

// Throws ConfigError on nonpositive tolerances or sample_count < 2.
void validate(const IntegratorConfig& config);

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  double smallest_step = std::numeric_limits<double>::infinity();
  double largest_step = 0.0;
};

using OdeRhs = std::function<void(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt)>;

// Integrates y' = f(t, y) over [t0, t1] and writes y at each of `sample_times`
// (sorted, inside [t0, t1]) into `samples` using the method's dense output.
// StiffnessError if the step size collapses or the step budget runs out.
IntegrationStats integrate(const OdeRhs& f, double t0, double t1, const Eigen::VectorXcd& y0,
                           std::span<const double> sample_times,
                           std::vector<Eigen::VectorXcd>& samples, const IntegratorConfig& config);

// n equally spaced points from t0 to t1 inclusive.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

}  // namespace stirap
