#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "stirap/linkage.hpp"
#include "stirap/pulses.hpp"
#include "stirap/types.hpp"

namespace stirap {

template <typename Scalar>
struct MixingAngles {
  Scalar theta;  // in [0, pi/2]
  Scalar phi;    // in [0, pi/2]
};

// tan(theta) = P/S, tan(2 phi) = Omega_rms/Delta. Returns nullopt when both
// couplings vanish (theta undefined; the caller picks a convention).
template <typename Scalar>
std::optional<MixingAngles<Scalar>> mixing_angles(Scalar omega_p, Scalar omega_s, Scalar Delta) {
  using std::atan2;
  using std::hypot;
  const Scalar p = omega_p < Scalar(0) ? -omega_p : omega_p;
  const Scalar s = omega_s < Scalar(0) ? -omega_s : omega_s;
  if (p == Scalar(0) && s == Scalar(0)) return std::nullopt;
  return MixingAngles<Scalar>{atan2(p, s), Scalar(0.5) * atan2(hypot(p, s), Delta)};
}

template <typename Scalar>
struct DressedEnergies {
  Scalar plus;
  Scalar zero;
  Scalar minus;
};

// Closed-form eigenvalues for two-photon resonance.
template <typename Scalar>
DressedEnergies<Scalar> eigenvalues(Scalar omega_p, Scalar omega_s, Scalar Delta) {
  using std::sqrt;
  const Scalar rms2 = omega_p * omega_p + omega_s * omega_s;
  const Scalar root = sqrt(Delta * Delta + rms2);
  return {Scalar(0.5) * (Delta + root), Scalar(0), Scalar(0.5) * (Delta - root)};
}

template <typename Scalar>
struct DressedStates {
  Eigen::Matrix<Scalar, 3, 1> plus;
  Eigen::Matrix<Scalar, 3, 1> zero;  // dark state, no intermediate component
  Eigen::Matrix<Scalar, 3, 1> minus;
};

template <typename Scalar>
DressedStates<Scalar> dressed_states(const MixingAngles<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar st = sin(a.theta), ct = cos(a.theta);
  const Scalar sp = sin(a.phi), cp = cos(a.phi);
  DressedStates<Scalar> d;
  d.plus << st * sp, cp, ct * sp;
  d.zero << ct, Scalar(0), -st;
  d.minus << st * cp, -sp, ct * cp;
  return d;
}

// Angles only see |Omega|; restore the signs of the couplings.
template <typename Scalar>
DressedStates<Scalar> signed_dressed_states(const MixingAngles<Scalar>& a, Scalar omega_p,
                                            Scalar omega_s) {
  DressedStates<Scalar> d = dressed_states(a);
  const Scalar sp = omega_p < Scalar(0) ? Scalar(-1) : Scalar(1);
  const Scalar ss = omega_s < Scalar(0) ? Scalar(-1) : Scalar(1);
  d.zero(0) *= ss;
  d.zero(2) *= sp;
  d.plus(0) *= sp;
  d.plus(2) *= ss;
  d.minus(0) *= sp;
  d.minus(2) *= ss;
  return d;
}

template <typename Scalar>
std::optional<DressedStates<Scalar>> dressed_states(Scalar omega_p, Scalar omega_s, Scalar Delta) {
  auto a = mixing_angles(omega_p, omega_s, Delta);
  if (!a) return std::nullopt;
  return signed_dressed_states(*a, omega_p, omega_s);
}

// Instantaneous dressed-state picture of a three-level Raman system.
template <typename Scalar>
struct AdiabaticFrame {
  Scalar theta;
  Scalar phi;
  Scalar eps_plus;
  Scalar eps_zero;
  Scalar eps_minus;
  Eigen::Matrix<Scalar, 3, 1> phi_plus;
  Eigen::Matrix<Scalar, 3, 1> phi_zero;
  Eigen::Matrix<Scalar, 3, 1> phi_minus;
  Scalar omega_rms;
};

template <typename Scalar>
std::optional<AdiabaticFrame<Scalar>> adiabatic_frame(Scalar omega_p, Scalar omega_s,
                                                      Scalar Delta) {
  auto a = mixing_angles(omega_p, omega_s, Delta);
  if (!a) return std::nullopt;
  const auto e = eigenvalues(omega_p, omega_s, Delta);
  const auto d = signed_dressed_states(*a, omega_p, omega_s);
  using std::hypot;
  return AdiabaticFrame<Scalar>{a->theta, a->phi, e.plus,  e.zero, e.minus,
                                d.plus,   d.zero, d.minus, hypot(omega_p, omega_s)};
}

// Frame of a three-level Raman scheme at time t. UnsupportedError for other
// layouts; nullopt when both couplings vanish.
std::optional<AdiabaticFrame<double>> adiabatic_frame(const LevelScheme& scheme,
                                                      const PulseSchedule& schedule, double t);

// Numeric eigen-decomposition of the Hermitian part of H; eigenvalues in
// ascending order, each eigenvector scaled so its largest component is real
// positive. Covers two-photon detuning, where no closed form is used.
struct NumericDressedStates {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;  // columns
};
NumericDressedStates numeric_dressed_states(const Hamiltonian& h);

// |<Phi_0|psi>|^2 for a three-component state.
double dark_overlap(const StateVector& state, const AdiabaticFrame<double>& frame);

inline constexpr double kAdiabaticInfinity = std::numeric_limits<double>::infinity();

struct LocalAdiabaticity {
  double ratio;       // Omega_rms / |dtheta/dt|, +inf when dtheta/dt = 0
  double theta_rate;  // dtheta/dt
  double omega_rms;
};

// Local condition at t. UnsupportedError for non-Raman layouts.
LocalAdiabaticity local_adiabaticity(const LevelScheme& scheme, const PulseSchedule& schedule,
                                     double t, double fd_step = 1e-6);

struct GlobalAdiabaticity {
  double area = 0.0;          // integral of Omega_rms over the overlap window
  double overlap_time = 0.0;  // T, duration with both couplings above threshold
  double mean_rms = 0.0;      // area / T
  bool empty = false;         // no overlap: area reported as zero
};

// Quadrature over {t in [t0, t1] : |P| > eps and |S| > eps}, eps = 1e-6 of the
// larger peak seen on the grid.
GlobalAdiabaticity global_adiabaticity(const LevelScheme& scheme, const PulseSchedule& schedule,
                                       double t0, double t1, std::size_t samples = 20001);

}  // namespace stirap
