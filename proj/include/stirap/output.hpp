#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "stirap/adiabatic.hpp"
#include "stirap/linkage.hpp"
#include "stirap/propagator.hpp"
#include "stirap/protocols.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

// 17 significant digits; "inf"/"-inf" for infinities and an empty cell for NaN.
std::string format_number(double x);

// Columns t (or z), re_c<k>, im_c<k>, P<k>, norm_sq, theta, dark_overlap,
// adiabaticity_ratio. The last three are empty when not defined.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

// Two-column complex sample table: t, re, im.
void write_pulse_csv(std::ostream& out, const NumericPulse& pulse);
// Every pulse of the schedule sampled on a uniform grid: t, re_<id>, im_<id>, ...
void write_schedule_csv(std::ostream& out, const PulseSchedule& schedule, double t0, double t1,
                        std::size_t samples);

// Dressed-state diagnostics on a uniform grid, no propagation.
struct AdiabaticityReport {
  std::vector<double> times;
  std::vector<double> theta;  // NaN where both couplings vanish
  std::vector<double> phi;
  std::vector<double> eps_plus;
  std::vector<double> eps_zero;
  std::vector<double> eps_minus;
  std::vector<double> ratio;  // +inf where dtheta/dt = 0
  GlobalAdiabaticity global;
};

// Closed-form eigenvalues at two-photon resonance, numeric ones otherwise.
// UnsupportedError unless the scheme is a three-level Raman layout.
AdiabaticityReport adiabaticity_report(const LevelScheme& scheme, const PulseSchedule& schedule,
                                       double t0, double t1, std::size_t samples);
void write_adiabaticity_csv(std::ostream& out, const AdiabaticityReport& report);

// Axis columns followed by the observable, one row per grid point in index order.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

// Populations against the evolution coordinate as SVG 1.1 polylines.
void write_population_svg(std::ostream& out, const Trajectory& trajectory,
                          const std::string& title);

}  // namespace stirap
