#include "stirap/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stirap/errors.hpp"

namespace stirap {

LevelScheme::LevelScheme(std::string label, std::vector<Level> levels,
                         std::vector<Coupling> couplings)
    : label_(std::move(label)), levels_(std::move(levels)), couplings_(std::move(couplings)) {
  if (levels_.size() < 2) throw ConfigError("scheme: need at least two levels");
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const auto& level = levels_[k];
    if (level.index != k) throw ConfigError("scheme: level indices must be 0..N-1 in order");
    if (!std::isfinite(level.detuning) || !std::isfinite(level.decay_rate)) {
      throw ConfigError("scheme: non-finite level parameter");
    }
    if (level.decay_rate < 0.0) throw ConfigError("scheme: negative decay rate");
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& c : couplings_) {
    if (c.from >= c.to) throw ConfigError("scheme: coupling must satisfy from < to");
    if (c.to >= levels_.size()) throw ConfigError("scheme: coupling references missing level");
    if (c.pulse_id.empty()) throw ConfigError("scheme: coupling without pulse id");
    if (!std::isfinite(c.static_phase) || !std::isfinite(c.strength_scale)) {
      throw ConfigError("scheme: non-finite coupling parameter");
    }
    if (!seen.insert({c.from, c.to}).second) {
      throw ConfigError("scheme: duplicate coupling " + std::to_string(c.from) + "-" +
                        std::to_string(c.to));
    }
  }
}

const Coupling* LevelScheme::find_coupling(std::size_t from, std::size_t to) const {
  for (const auto& c : couplings_) {
    if (c.from == from && c.to == to) return &c;
  }
  return nullptr;
}

bool LevelScheme::lossless() const {
  return std::all_of(levels_.begin(), levels_.end(),
                     [](const Level& l) { return l.decay_rate == 0.0; });
}

bool LevelScheme::is_three_level_raman() const {
  return dimension() == 3 && couplings_.size() == 2 && find_coupling(0, 1) &&
         find_coupling(1, 2);
}

HamiltonianModel::HamiltonianModel(const LevelScheme& scheme, const PulseSchedule& schedule)
    : scheme_(scheme), schedule_(schedule) {
  pulses_.reserve(scheme.couplings().size());
  factors_.reserve(scheme.couplings().size());
  for (const auto& c : scheme.couplings()) {
    pulses_.push_back(&schedule.at(c.pulse_id));
    factors_.push_back(c.strength_scale * std::polar(1.0, c.static_phase));
  }
}

Complex HamiltonianModel::coupling_amplitude(std::size_t k, double t) const {
  return factors_[k] * eval(*pulses_[k], t - schedule_.time_origin());
}

Complex HamiltonianModel::coupling_rate(std::size_t k, double t) const {
  return factors_[k] * derivative(*pulses_[k], t - schedule_.time_origin());
}

void HamiltonianModel::assemble(double t, Hamiltonian& out) const {
  const auto n = static_cast<Eigen::Index>(dimension());
  out.setZero(n, n);
  const auto& levels = scheme_.levels();
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& level = levels[static_cast<std::size_t>(k)];
    out(k, k) = Complex(level.detuning, -level.decay_rate);
  }
  const auto& couplings = scheme_.couplings();
  for (std::size_t k = 0; k < couplings.size(); ++k) {
    const Complex value = 0.5 * coupling_amplitude(k, t);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw NumericError("hamiltonian: non-finite envelope '" + couplings[k].pulse_id +
                         "' at t=" + std::to_string(t));
    }
    const auto i = static_cast<Eigen::Index>(couplings[k].from);
    const auto j = static_cast<Eigen::Index>(couplings[k].to);
    out(i, j) += value;
    out(j, i) += std::conj(value);
  }
}

Hamiltonian HamiltonianModel::operator()(double t) const {
  Hamiltonian h;
  assemble(t, h);
  return h;
}

Hamiltonian assemble_hamiltonian(const LevelScheme& scheme, const PulseSchedule& schedule,
                                 double t) {
  if (!std::isfinite(t)) throw NumericError("hamiltonian: non-finite time");
  return HamiltonianModel(scheme, schedule)(t);
}

namespace {

LevelScheme three_level(const char* label, double Delta, double delta, double gamma2) {
  if (!(gamma2 >= 0.0)) throw ConfigError("scheme: negative decay rate");
  return LevelScheme(label, {{0, 0.0, 0.0}, {1, Delta, gamma2}, {2, delta, 0.0}},
                     {{0, 1, "P", 0.0, 1.0}, {1, 2, "S", 0.0, 1.0}});
}

}  // namespace

LevelScheme lambda_scheme(double Delta, double delta, double gamma2) {
  return three_level(scheme_labels::kLambda, Delta, delta, gamma2);
}

LevelScheme ladder_scheme(double Delta, double delta, double gamma2) {
  return three_level(scheme_labels::kLadder, Delta, delta, gamma2);
}

LevelScheme tripod_scheme(std::span<const double> detunings, std::span<const double> gammas) {
  if (detunings.size() != 4 || gammas.size() != 4) {
    throw ConfigError("tripod: need four detunings and four decay rates");
  }
  std::vector<Level> levels;
  for (std::size_t k = 0; k < 4; ++k) levels.push_back({k, detunings[k], gammas[k]});
  return LevelScheme(scheme_labels::kTripod, std::move(levels),
                     {{0, 1, "P", 0.0, 1.0}, {1, 2, "S", 0.0, 1.0}, {1, 3, "C", 0.0, 1.0}});
}

LevelScheme cavity_lambda_scheme(double g, double kappa, double gamma, double Delta_C,
                                 double Delta_D) {
  if (!(g > 0.0)) throw ConfigError("cavity lambda: g must be positive");
  if (!(kappa >= 0.0) || !(gamma >= 0.0)) throw ConfigError("cavity lambda: negative decay rate");
  return LevelScheme(scheme_labels::kCavityLambda,
                     {{0, Delta_D, 0.0}, {1, 0.0, gamma}, {2, Delta_C, kappa}},
                     {{0, 1, kDrivePulse, 0.0, 1.0}, {1, 2, kCavityPulse, 0.0, 1.0}});
}

PulseShape cavity_vacuum_pulse(double g) { return PulseShape::constant(2.0 * g); }

LevelScheme chain_scheme(std::span<const double> detunings, std::span<const double> gammas,
                         std::span<const std::string> pulse_ids) {
  const std::size_t n = detunings.size();
  if (gammas.size() != n) throw ConfigError("chain: detuning/decay count mismatch");
  if (n < 2 || pulse_ids.size() != n - 1) throw ConfigError("chain: need N-1 pulse ids");
  std::vector<Level> levels;
  std::vector<Coupling> couplings;
  for (std::size_t k = 0; k < n; ++k) levels.push_back({k, detunings[k], gammas[k]});
  for (std::size_t k = 0; k + 1 < n; ++k) couplings.push_back({k, k + 1, pulse_ids[k], 0.0, 1.0});
  return LevelScheme(scheme_labels::kChain, std::move(levels), std::move(couplings));
}

double rabi_from_dipole(double dipole, double field) { return -dipole * field; }

}  // namespace stirap
