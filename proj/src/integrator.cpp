#include "stirap/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stirap/errors.hpp"

namespace stirap {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer & Wanner, DOPRI5 dense output).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

double error_norm(const Eigen::VectorXcd& err, const Eigen::VectorXcd& y0,
                  const Eigen::VectorXcd& y1, double atol, double rtol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = std::abs(err(i)) / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

void check_finite(const Eigen::VectorXcd& y, double t) {
  if (!y.allFinite()) throw NumericError("integrator: non-finite state at t=" + std::to_string(t));
}

IntegrationStats integrate_dopri(const OdeRhs& f, double t0, double t1,
                                 const Eigen::VectorXcd& y0, std::span<const double> times,
                                 std::vector<Eigen::VectorXcd>& out,
                                 const IntegratorConfig& cfg) {
  const Eigen::Index n = y0.size();
  IntegrationStats stats;
  Eigen::VectorXcd y = y0, y1(n), ytmp(n), err(n);
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  Eigen::VectorXcd r1(n), r2(n), r3(n), r4(n), r5(n);

  auto eval = [&](double t, const Eigen::VectorXcd& state, Eigen::VectorXcd& dydt) {
    f(t, state, dydt);
    ++stats.rhs_evaluations;
  };

  double t = t0;
  eval(t, y, k1);
  check_finite(k1, t);

  // Initial step from the scaled size of y and y'.
  const double span = t1 - t0;
  double h;
  {
    double d0 = 0.0, d1n = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y(i));
      d0 += std::norm(y(i)) / (sc * sc);
      d1n += std::norm(k1(i)) / (sc * sc);
    }
    d0 = std::sqrt(d0 / n);
    d1n = std::sqrt(d1n / n);
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1n;
    h = std::min({h, cfg.max_step, span});
  }

  std::size_t next = 0;
  while (next < times.size() && times[next] <= t0) out[next++] = y0;

  bool last = false;
  while (!last) {
    if (stats.accepted + stats.rejected >= cfg.max_steps) {
      throw StiffnessError("integrator: step budget exhausted at t=" + std::to_string(t), t);
    }
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw StiffnessError("integrator: step size underflow at t=" + std::to_string(t), t);
    }

    ytmp = y + h * a21 * k1;
    eval(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    eval(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    eval(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    eval(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    eval(t + h, ytmp, k6);
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    eval(t + h, y1, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = error_norm(err, y, y1, cfg.abs_tol, cfg.rel_tol);
    if (!std::isfinite(en)) {
      throw NumericError("integrator: non-finite error estimate at t=" + std::to_string(t));
    }
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);

    if (en > 1.0) {
      ++stats.rejected;
      h *= std::max(0.2, fac);
      last = false;
      continue;
    }

    ++stats.accepted;
    stats.smallest_step = std::min(stats.smallest_step, h);
    stats.largest_step = std::max(stats.largest_step, h);
    const double t_new = last ? t1 : t + h;

    if (next < times.size() && times[next] <= t_new) {
      r1 = y;
      r2 = y1 - y;
      r3 = h * k1 - r2;
      r4 = r2 - h * k7 - r3;
      r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      while (next < times.size() && times[next] <= t_new) {
        const double s = (times[next] - t) / h;
        if (times[next] == t_new) {
          out[next] = y1;
        } else {
          out[next] = r1 + s * (r2 + (1.0 - s) * (r3 + s * (r4 + (1.0 - s) * r5)));
        }
        ++next;
      }
    }

    t = t_new;
    y = y1;
    k1 = k7;  // first-same-as-last
    check_finite(y, t);
    h = std::min(h * fac, cfg.max_step);
  }
  while (next < times.size()) out[next++] = y;
  return stats;
}

IntegrationStats integrate_rk4(const OdeRhs& f, double t0, double t1, const Eigen::VectorXcd& y0,
                               std::span<const double> times, std::vector<Eigen::VectorXcd>& out,
                               const IntegratorConfig& cfg) {
  const double span = t1 - t0;
  double h = cfg.fixed_step > 0.0 ? cfg.fixed_step
                                  : (std::isfinite(cfg.max_step) ? cfg.max_step : span * 1e-5);
  const auto steps = static_cast<std::size_t>(std::ceil(span / h - 1e-9));
  if (steps > cfg.max_steps) {
    throw StiffnessError("integrator: fixed step needs more steps than the budget", t0);
  }
  h = span / static_cast<double>(steps);

  const Eigen::Index n = y0.size();
  IntegrationStats stats;
  Eigen::VectorXcd y = y0, y1(n), k1(n), k2(n), k3(n), k4(n), f1(n), tmp(n);
  auto eval = [&](double t, const Eigen::VectorXcd& state, Eigen::VectorXcd& dydt) {
    f(t, state, dydt);
    ++stats.rhs_evaluations;
  };

  std::size_t next = 0;
  while (next < times.size() && times[next] <= t0) out[next++] = y0;
  eval(t0, y, k1);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = t0 + span * static_cast<double>(i) / static_cast<double>(steps);
    const double t_new = i + 1 == steps ? t1 : t0 + span * static_cast<double>(i + 1) /
                                                        static_cast<double>(steps);
    const double hh = t_new - t;
    tmp = y + 0.5 * hh * k1;
    eval(t + 0.5 * hh, tmp, k2);
    tmp = y + 0.5 * hh * k2;
    eval(t + 0.5 * hh, tmp, k3);
    tmp = y + hh * k3;
    eval(t_new, tmp, k4);
    y1 = y + (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    eval(t_new, y1, f1);
    check_finite(y1, t_new);
    // Cubic Hermite between the step ends.
    while (next < times.size() && times[next] <= t_new) {
      const double s = (times[next] - t) / hh;
      const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
      const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
      out[next] = times[next] == t_new ? y1
                                       : Eigen::VectorXcd(h00 * y + h10 * hh * k1 + h01 * y1 +
                                                          h11 * hh * f1);
      ++next;
    }
    y = y1;
    k1 = f1;
    ++stats.accepted;
  }
  stats.smallest_step = stats.largest_step = h;
  while (next < times.size()) out[next++] = y;
  return stats;
}

}  // namespace

void validate(const IntegratorConfig& config) {
  if (!(config.rel_tol > 0.0) || !(config.abs_tol > 0.0)) {
    throw ConfigError("integrator: tolerances must be positive");
  }
  if (config.sample_count < 2) throw ConfigError("integrator: sample_count must be at least 2");
  if (!(config.max_step > 0.0)) throw ConfigError("integrator: max_step must be positive");
  if (config.fixed_step < 0.0) throw ConfigError("integrator: fixed_step must be nonnegative");
}

IntegrationStats integrate(const OdeRhs& f, double t0, double t1, const Eigen::VectorXcd& y0,
                           std::span<const double> sample_times,
                           std::vector<Eigen::VectorXcd>& samples,
                           const IntegratorConfig& config) {
  validate(config);
  if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
    throw ConfigError("integrator: need finite t1 > t0");
  }
  if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
    throw ConfigError("integrator: sample times must be sorted");
  }
  check_finite(y0, t0);
  samples.assign(sample_times.size(), Eigen::VectorXcd());
  if (config.method == IntegrationMethod::ClassicalRk4) {
    return integrate_rk4(f, t0, t1, y0, sample_times, samples, config);
  }
  return integrate_dopri(f, t0, t1, y0, sample_times, samples, config);
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = t0;
    return grid;
  }
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 0) grid.back() = t1;
  return grid;
}

}  // namespace stirap
