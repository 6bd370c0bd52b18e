#include "stirap/adiabatic.hpp"

#include <algorithm>
#include <vector>

#include "stirap/errors.hpp"

namespace stirap {
namespace {

void require_raman(const LevelScheme& scheme) {
  if (!scheme.is_three_level_raman()) {
    throw UnsupportedError("adiabatic analysis needs a three-level scheme linked 1-2 and 2-3 (got '" +
                           scheme.label() + "')");
  }
}

// Index of coupling (from, to) inside scheme.couplings().
std::size_t coupling_index(const LevelScheme& scheme, std::size_t from, std::size_t to) {
  const auto& cs = scheme.couplings();
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (cs[k].from == from && cs[k].to == to) return k;
  }
  throw UnsupportedError("adiabatic analysis: missing coupling");
}

double magnitude_rate(Complex z, Complex dz) {
  const double r = std::abs(z);
  if (r == 0.0) return std::abs(dz);
  return (std::conj(z) * dz).real() / r;
}

}  // namespace

std::optional<AdiabaticFrame<double>> adiabatic_frame(const LevelScheme& scheme,
                                                      const PulseSchedule& schedule, double t) {
  require_raman(scheme);
  HamiltonianModel model(scheme, schedule);
  const double p = std::abs(model.coupling_amplitude(coupling_index(scheme, 0, 1), t));
  const double s = std::abs(model.coupling_amplitude(coupling_index(scheme, 1, 2), t));
  const double Delta = scheme.levels()[1].detuning - scheme.levels()[0].detuning;
  return adiabatic_frame(p, s, Delta);
}

NumericDressedStates numeric_dressed_states(const Hamiltonian& h) {
  const Hamiltonian hermitian = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  if (solver.info() != Eigen::Success) throw NumericError("dressed states: eigensolve failed");
  NumericDressedStates out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    Eigen::Index imax = 0;
    out.vectors.col(c).cwiseAbs().maxCoeff(&imax);
    const Complex lead = out.vectors(imax, c);
    if (std::abs(lead) > 0.0) out.vectors.col(c) *= std::conj(lead) / std::abs(lead);
  }
  return out;
}

double dark_overlap(const StateVector& state, const AdiabaticFrame<double>& frame) {
  if (state.size() != 3) throw UnsupportedError("dark overlap: needs a three-component state");
  const Complex amp = frame.phi_zero(0) * state(0) + frame.phi_zero(1) * state(1) +
                      frame.phi_zero(2) * state(2);
  return std::norm(amp);
}

LocalAdiabaticity local_adiabaticity(const LevelScheme& scheme, const PulseSchedule& schedule,
                                     double t, double fd_step) {
  require_raman(scheme);
  HamiltonianModel model(scheme, schedule);
  const std::size_t kp = coupling_index(scheme, 0, 1);
  const std::size_t ks = coupling_index(scheme, 1, 2);
  const Complex zp = model.coupling_amplitude(kp, t);
  const Complex zs = model.coupling_amplitude(ks, t);
  const double p = std::abs(zp);
  const double s = std::abs(zs);
  const double rms2 = p * p + s * s;
  const double rms = std::sqrt(rms2);
  double rate = 0.0;
  if (rms2 > 0.0) {
    if (has_smooth_derivative(model.coupling_pulse(kp)) &&
        has_smooth_derivative(model.coupling_pulse(ks))) {
      const double dp = magnitude_rate(zp, model.coupling_rate(kp, t));
      const double ds = magnitude_rate(zs, model.coupling_rate(ks, t));
      rate = (s * dp - p * ds) / rms2;
    } else {
      auto theta = [&](double x) {
        return std::atan2(std::abs(model.coupling_amplitude(kp, x)),
                          std::abs(model.coupling_amplitude(ks, x)));
      };
      const double h = fd_step;
      rate = (theta(t - 2 * h) - 8 * theta(t - h) + 8 * theta(t + h) - theta(t + 2 * h)) /
             (12 * h);
    }
  }
  const double ratio = rate == 0.0 ? kAdiabaticInfinity : rms / std::abs(rate);
  return {ratio, rate, rms};
}

GlobalAdiabaticity global_adiabaticity(const LevelScheme& scheme, const PulseSchedule& schedule,
                                       double t0, double t1, std::size_t samples) {
  require_raman(scheme);
  if (!(t1 > t0)) throw ConfigError("global adiabaticity: empty window");
  samples = std::max<std::size_t>(samples, 3);
  HamiltonianModel model(scheme, schedule);
  const std::size_t kp = coupling_index(scheme, 0, 1);
  const std::size_t ks = coupling_index(scheme, 1, 2);

  std::vector<double> t(samples), p(samples), s(samples);
  double peak = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
    p[i] = std::abs(model.coupling_amplitude(kp, t[i]));
    s[i] = std::abs(model.coupling_amplitude(ks, t[i]));
    peak = std::max({peak, p[i], s[i]});
  }
  const double eps = 1e-6 * peak;
  GlobalAdiabaticity out;
  for (std::size_t i = 0; i + 1 < samples; ++i) {
    const bool a = p[i] > eps && s[i] > eps;
    const bool b = p[i + 1] > eps && s[i + 1] > eps;
    if (!a || !b) continue;
    const double dt = t[i + 1] - t[i];
    out.area += 0.5 * dt * (std::hypot(p[i], s[i]) + std::hypot(p[i + 1], s[i + 1]));
    out.overlap_time += dt;
  }
  out.empty = out.overlap_time == 0.0;
  out.mean_rms = out.empty ? 0.0 : out.area / out.overlap_time;
  return out;
}

}  // namespace stirap
