#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stirap/integrator.hpp"
#include "stirap/linkage.hpp"
#include "stirap/propagator.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

struct ProtocolResult {
  std::string label;
  std::map<std::string, double> scalars;
  std::optional<Trajectory> trajectory;
  std::vector<std::string> notes;
  // Map induced on span{psi1, psi3} by the gate protocols.
  std::optional<Eigen::Matrix2cd> gate;

  // Throws ConfigError for unknown names.
  double scalar(const std::string& name) const;
};

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepResult {
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;
  std::string observable;
  Eigen::MatrixXd grid;  // axis1 x axis2 (one column without axis2)

  double at(std::size_t i, std::size_t j = 0) const {
    return grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

// Everything a single propagation needs; the schedule is owned here so the
// setup can outlive the builder that produced it.
struct Setup {
  LevelScheme scheme;
  PulseSchedule schedule;
  double t0;
  double t1;
  StateVector initial;
};

// ---- plain STIRAP ---------------------------------------------------------

struct StirapParams {
  double peak_pump = 50.0;
  double peak_stokes = 50.0;
  double width = 1.0;
  double delay = 1.1;  // Stokes leads by `delay`; negative means pump first
  double Delta = 0.0;
  double delta = 0.0;
  double gamma2 = 0.0;
  double peak_scale = 1.0;  // multiplies both peaks
  double margin = 6.0;      // window half-width beyond the pulse centres, in widths
  IntegratorConfig integrator{};
};

// Lambda scheme with the Gaussian pair of `params`, starting in psi1.
Setup stirap_setup(const StirapParams& params);

// Efficiency into psi3, peak intermediate population, minimum dark-state
// overlap along the path and the minimum local adiabaticity ratio over the
// samples where both envelopes exceed 1% of their peak.
ProtocolResult run_stirap(const StirapParams& params);

SweepResult delay_sweep(const StirapParams& base, std::span<const double> delays,
                        std::size_t threads = 1);
SweepResult delay_intensity_map(const StirapParams& base, std::span<const double> delays,
                                std::span<const double> peak_scales, std::size_t threads = 1);

// Span between the first and last point of the longest contiguous run with
// values >= threshold. Zero when no point qualifies.
double plateau_width(std::span<const double> x, std::span<const double> values, double threshold);

// ---- fractional STIRAP ----------------------------------------------------

struct FractionalParams {
  double peak = 100.0;
  double width = 1.0;
  double delay = 2.0;
  double theta_fs = kPi / 4;
  double margin = 6.0;
  IntegratorConfig integrator{};
};

Setup fractional_setup(const FractionalParams& params);

// Final P1, P3, relative phase arg(c3/c1) and their dark-state predictions
// cos^2, sin^2 and pi.
ProtocolResult run_fractional(const FractionalParams& params);

// ---- bright-state passage -------------------------------------------------

// Pump first by |delay|. Reports efficiency at params.gamma2 and at zero decay,
// and the counterintuitive efficiency at the same decay for contrast.
ProtocolResult run_bstirap(const StirapParams& params);

// ---- counterdiabatic ------------------------------------------------------

struct SaStirapParams {
  double peak = 2.0;
  double width = 1.0;
  double delay = 1.1;
  bool with_cd = true;
  double margin = 6.0;
  std::size_t cd_samples = 8001;
  IntegratorConfig integrator{};
};

// Lambda scheme plus a unit-strength coupling "CD" on 1<->3 when with_cd.
Setup sastirap_setup(const SaStirapParams& params);

// Efficiency with and without the counterdiabatic pulse.
ProtocolResult run_sastirap(const SaStirapParams& params);

// ---- gates ----------------------------------------------------------------

// Signed rotation angle of a 2x2 map after removing the global phase,
// folded into (-pi/2, pi/2].
double gate_rotation_angle(const Eigen::Matrix2cd& u);
// Frobenius norm of U^dagger U - I.
double unitarity_deviation(const Eigen::Matrix2cd& u);

struct RotationGateParams {
  double alpha = kPi / 4;
  double peak = 200.0;
  double width = 1.0;
  double delay = 2.2;
  double Delta = 50.0;          // single-photon detuning; the bright path needs it
  double separation = 0.0;      // between the two processes; zero picks 2 * (delay + 6 width)
  double relative_phase = 0.0;  // extra phase on the second process' Stokes pulse
  std::complex<double> input_1 = 1.0;
  std::complex<double> input_3 = 0.0;
  double margin = 6.0;
  IntegratorConfig integrator{};
};

// Inverted fractional pair (ratio P/S = cot alpha at the start, pump alone at
// the end) followed by a regular fractional pair ending at P/S = tan alpha.
Setup rotation_gate_setup(const RotationGateParams& params);

// Gate map, rotation angle (expected 2 alpha), unitarity, leakage into psi2,
// and the fidelity of the propagated input with the ideal rotation.
ProtocolResult run_rotation_gate(const RotationGateParams& params);

struct TripodGateParams {
  double peak = 100.0;
  double width = 1.0;
  double delay = 1.6;
  double mixing_angle = kPi / 4;  // P ~ cos, S ~ sin
  double mixing_phase = kPi / 2;  // Stokes phase is -mixing_phase
  double control_phase = kPi;     // phase of the second control pulse
  double control_peak = -1.0;     // negative: same as peak
  double separation = 0.0;        // zero picks 2 * (delay + 6 width)
  std::complex<double> input_1 = 1.0;
  std::complex<double> input_3 = 0.0;
  double margin = 6.0;
  IntegratorConfig integrator{};
};

// Control phase giving a real rotation by 2 alpha for mixing angle pi/4 and
// mixing phase pi/2.
inline double tripod_control_phase_for_rotation(double alpha) { return 4.0 * alpha; }

Setup tripod_gate_setup(const TripodGateParams& params);
ProtocolResult run_tripod_gate(const TripodGateParams& params);

// ---- composite ------------------------------------------------------------

struct CompositeParams {
  CompositeArgs pairs{};
  std::vector<std::pair<double, double>> phases{{0.0, 0.0}};
  double margin = 6.0;
  IntegratorConfig integrator{};
};

Setup composite_setup(const CompositeParams& params);
// Final P1, P3 and the parity check: odd pair counts should end in psi3.
ProtocolResult run_composite(const CompositeParams& params);

// ---- vacuum-stimulated emission -------------------------------------------

struct VstirapParams {
  double g = 1.0;
  double kappa = 0.1;
  double gamma = 0.1;
  double Delta_C = 0.0;
  double Delta_D = 0.0;
  PulseShape drive = PulseShape::gaussian(10.0, 0.0, 20.0);
  double t0 = -80.0;
  double t1 = 80.0;
  IntegratorConfig integrator = [] {
    IntegratorConfig c;
    c.sample_count = 20001;
    return c;
  }();
};

Setup vstirap_setup(const VstirapParams& params);
// Emission probability, decay through |x,0>, residual norm, bookkeeping
// closure and minimum overlap with the vacuum dark state.
ProtocolResult run_vstirap(const VstirapParams& params);

// ---- nonreciprocal transfer -----------------------------------------------

enum class Direction { Forward, Backward };

// Three channels A, B, C; coupling profile C_AB on A-B and C_BC on B-C with
// C_BC leading by `separation`; loss on B.
struct NonreciprocityParams {
  double peak = 50.0;
  double width = 1.0;
  double loss_b = 2.0;
  std::optional<double> separation;  // unset: scan for the operating point
  double scan_min = 0.0;
  double scan_max = 3.0;
  std::size_t scan_points = 25;
  Direction direction = Direction::Forward;
  double margin = 6.0;
  IntegratorConfig integrator{};
};

Setup nonreciprocity_setup(const NonreciprocityParams& params, double separation,
                           Direction direction);

// Objective min(forward, 1 - backward_to_A) over the scan grid.
SweepResult nonreciprocity_scan(const NonreciprocityParams& params, std::size_t threads = 1);

// Forward transfer A->C, backward C->A and dissipation in B, and the
// asymmetry (forward - backward) / (forward + backward).
ProtocolResult run_nonreciprocity(const NonreciprocityParams& params, std::size_t threads = 1);

}  // namespace stirap
