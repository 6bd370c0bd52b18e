#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stirap/pulses.hpp"
#include "stirap/types.hpp"

namespace stirap {

struct Level {
  std::size_t index = 0;
  double detuning = 0.0;    // rad per unit time, on the diagonal
  double decay_rate = 0.0;  // amplitude decay, enters as -i*decay_rate

  bool operator==(const Level&) const = default;
};

// Pulsed link between two levels, stored with from < to. Assembly writes
// 1/2 * strength_scale * Omega(t) * e^{i static_phase} at (from, to) and the
// conjugate at (to, from).
struct Coupling {
  std::size_t from = 0;
  std::size_t to = 1;
  std::string pulse_id;
  double static_phase = 0.0;
  double strength_scale = 1.0;

  bool operator==(const Coupling&) const = default;
};

namespace scheme_labels {
inline constexpr const char* kLambda = "lambda";
inline constexpr const char* kLadder = "ladder";
inline constexpr const char* kTripod = "tripod";
inline constexpr const char* kCavityLambda = "cavity_lambda";
inline constexpr const char* kChain = "chain";
}  // namespace scheme_labels

// Immutable after construction; validated on construction (ConfigError).
class LevelScheme {
 public:
  LevelScheme(std::string label, std::vector<Level> levels, std::vector<Coupling> couplings);

  std::size_t dimension() const noexcept { return levels_.size(); }
  const std::vector<Level>& levels() const noexcept { return levels_; }
  const std::vector<Coupling>& couplings() const noexcept { return couplings_; }
  const std::string& label() const noexcept { return label_; }

  const Coupling* find_coupling(std::size_t from, std::size_t to) const;
  bool lossless() const;
  // Three levels linked 1<->2 and 2<->3 only, the layout the dressed-state
  // analysis is defined for (lambda, ladder, cavity lambda).
  bool is_three_level_raman() const;

  bool operator==(const LevelScheme&) const = default;

 private:
  std::string label_;
  std::vector<Level> levels_;
  std::vector<Coupling> couplings_;
};

// Resolves pulse ids once so repeated assembly (inside an integrator) does
// no lookups. Holds references: the scheme and schedule must outlive it.
class HamiltonianModel {
 public:
  HamiltonianModel(const LevelScheme& scheme, const PulseSchedule& schedule);

  std::size_t dimension() const noexcept { return scheme_.dimension(); }
  const LevelScheme& scheme() const noexcept { return scheme_; }
  const PulseSchedule& schedule() const noexcept { return schedule_; }

  // Writes H(t) into `out` (resized if needed). NumericError on NaN envelopes.
  void assemble(double t, Hamiltonian& out) const;
  Hamiltonian operator()(double t) const;
  // Scaled complex coupling amplitude Omega(t) e^{i phase} of coupling k.
  Complex coupling_amplitude(std::size_t k, double t) const;
  Complex coupling_rate(std::size_t k, double t) const;
  const Pulse& coupling_pulse(std::size_t k) const { return *pulses_[k]; }

 private:
  const LevelScheme& scheme_;
  const PulseSchedule& schedule_;
  std::vector<const Pulse*> pulses_;
  std::vector<Complex> factors_;  // strength_scale * e^{i static_phase}
};

Hamiltonian assemble_hamiltonian(const LevelScheme& scheme, const PulseSchedule& schedule,
                                 double t);

// Diagonal (0, Delta, delta); pump "P" on 1<->2, Stokes "S" on 2<->3.
LevelScheme lambda_scheme(double Delta, double delta, double gamma2);
LevelScheme ladder_scheme(double Delta, double delta, double gamma2);

// Pump "P" 1<->2, Stokes "S" 3<->2, control "C" 4<->2.
LevelScheme tripod_scheme(std::span<const double> detunings, std::span<const double> gammas);

inline constexpr const char* kDrivePulse = "drive";
inline constexpr const char* kCavityPulse = "cavity";

// Basis (|e,0>, |x,0>, |g,1>). Drive on leg 1<->2, vacuum coupling on 2<->3
// through the Constant pulse returned by cavity_vacuum_pulse(g).
LevelScheme cavity_lambda_scheme(double g, double kappa, double gamma, double Delta_C,
                                 double Delta_D);
PulseShape cavity_vacuum_pulse(double g);

// Nearest-neighbour chain: coupling k links levels k and k+1 through pulse_ids[k].
LevelScheme chain_scheme(std::span<const double> detunings, std::span<const double> gammas,
                         std::span<const std::string> pulse_ids);

// Signed product -d*E with hbar = 1.
double rabi_from_dipole(double dipole, double field);

}  // namespace stirap
