#include "stirap/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stirap/errors.hpp"
#include "stirap/integrator.hpp"

namespace stirap {
namespace {

void write_optional(std::ostream& out, const std::optional<std::vector<double>>& trace,
                    std::size_t i) {
  out << ',';
  if (trace) out << format_number((*trace)[i]);
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return {};
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  const std::size_t n = tr.levels();
  out << tr.coordinate;
  for (std::size_t k = 1; k <= n; ++k) out << ",re_c" << k << ",im_c" << k;
  for (std::size_t k = 1; k <= n; ++k) out << ",P" << k;
  out << ",norm_sq,theta,dark_overlap,adiabaticity_ratio\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << format_number(tr.times[i]);
    const auto& c = tr.amplitudes[i];
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      out << ',' << format_number(c(k).real()) << ',' << format_number(c(k).imag());
    }
    for (std::size_t k = 0; k < n; ++k) {
      out << ',' << format_number(tr.populations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    }
    out << ',' << format_number(tr.norm_sq[i]);
    write_optional(out, tr.theta_trace, i);
    write_optional(out, tr.dark_overlap_trace, i);
    write_optional(out, tr.adiabaticity_trace, i);
    out << '\n';
  }
}

void write_pulse_csv(std::ostream& out, const NumericPulse& pulse) {
  out << "t,re,im\n";
  for (std::size_t i = 0; i < pulse.times().size(); ++i) {
    out << format_number(pulse.times()[i]) << ',' << format_number(pulse.samples()[i].real())
        << ',' << format_number(pulse.samples()[i].imag()) << '\n';
  }
}

void write_schedule_csv(std::ostream& out, const PulseSchedule& schedule, double t0, double t1,
                        std::size_t samples) {
  out << 't';
  for (const auto& [id, pulse] : schedule.entries()) out << ",re_" << id << ",im_" << id;
  out << '\n';
  for (double t : uniform_grid(t0, t1, samples)) {
    out << format_number(t);
    for (const auto& [id, pulse] : schedule.entries()) {
      const Complex v = schedule.eval(id, t);
      out << ',' << format_number(v.real()) << ',' << format_number(v.imag());
    }
    out << '\n';
  }
}

AdiabaticityReport adiabaticity_report(const LevelScheme& scheme, const PulseSchedule& schedule,
                                       double t0, double t1, std::size_t samples) {
  if (!scheme.is_three_level_raman()) {
    throw UnsupportedError("adiabaticity report: scheme '" + scheme.label() +
                           "' is not a three-level Raman layout");
  }
  if (samples < 2) throw ConfigError("adiabaticity report: need at least two samples");
  AdiabaticityReport r;
  r.times = uniform_grid(t0, t1, samples);
  const bool resonant = scheme.levels()[2].detuning == 0.0;
  const double fd_step = (t1 - t0) * 1e-6;
  const double nan = std::nan("");
  for (double t : r.times) {
    const auto frame = adiabatic_frame(scheme, schedule, t);
    r.theta.push_back(frame ? frame->theta : nan);
    r.phi.push_back(frame ? frame->phi : nan);
    if (resonant) {
      r.eps_plus.push_back(frame ? frame->eps_plus : nan);
      r.eps_zero.push_back(frame ? frame->eps_zero : nan);
      r.eps_minus.push_back(frame ? frame->eps_minus : nan);
    } else {
      const auto d = numeric_dressed_states(assemble_hamiltonian(scheme, schedule, t));
      r.eps_minus.push_back(d.energies(0));
      r.eps_zero.push_back(d.energies(1));
      r.eps_plus.push_back(d.energies(2));
    }
    r.ratio.push_back(local_adiabaticity(scheme, schedule, t, fd_step).ratio);
  }
  r.global = global_adiabaticity(scheme, schedule, t0, t1);
  return r;
}

void write_adiabaticity_csv(std::ostream& out, const AdiabaticityReport& r) {
  out << "t,theta,phi,eps_plus,eps_zero,eps_minus,ratio\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out << format_number(r.times[i]) << ',' << format_number(r.theta[i]) << ','
        << format_number(r.phi[i]) << ',' << format_number(r.eps_plus[i]) << ','
        << format_number(r.eps_zero[i]) << ',' << format_number(r.eps_minus[i]) << ','
        << format_number(r.ratio[i]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& s) {
  out << s.axis1.name;
  if (s.axis2) out << ',' << s.axis2->name;
  out << ',' << s.observable << '\n';
  const std::size_t n2 = s.axis2 ? s.axis2->values.size() : 1;
  for (std::size_t i = 0; i < s.axis1.values.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      out << format_number(s.axis1.values[i]);
      if (s.axis2) out << ',' << format_number(s.axis2->values[j]);
      out << ',' << format_number(s.at(i, j)) << '\n';
    }
  }
}

void write_population_svg(std::ostream& out, const Trajectory& tr, const std::string& title) {
  constexpr double kWidth = 640, kHeight = 400, kLeft = 50, kRight = 20, kTop = 30, kBottom = 40;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
  const double x0 = tr.times.front(), x1 = tr.times.back();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * (x - x0) / (x1 - x0); };
  auto py = [&](double y) { return kTop + ph * (1.0 - std::clamp(y, 0.0, 1.0)); };
  char buf[64];

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  std::string escaped;
  for (char c : title) {
    if (c == '<') escaped += "&lt;";
    else if (c == '>') escaped += "&gt;";
    else if (c == '&') escaped += "&amp;";
    else escaped += c;
  }
  out << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"14\">" << escaped << "</text>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
      << "\" font-size=\"12\" text-anchor=\"middle\">" << tr.coordinate << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", x0);
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 15 << "\" font-size=\"10\">" << buf
      << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", x1);
  out << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 15
      << "\" font-size=\"10\" text-anchor=\"end\">" << buf << "</text>\n";
  out << "<text x=\"" << kLeft - 5 << "\" y=\"" << kTop + 4
      << "\" font-size=\"10\" text-anchor=\"end\">1</text>\n";
  out << "<text x=\"" << kLeft - 5 << "\" y=\"" << kTop + ph
      << "\" font-size=\"10\" text-anchor=\"end\">0</text>\n";

  // At most ~2000 vertices per curve.
  const std::size_t stride = std::max<std::size_t>(1, tr.size() / 2000);
  for (std::size_t k = 0; k < tr.levels(); ++k) {
    const char* color = colors[k % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < tr.size(); i += stride) {
      const double y = tr.populations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(tr.times[i]), py(y));
      out << buf;
    }
    out << "\"/>\n";
    out << "<text x=\"" << kLeft + pw - 5 << "\" y=\"" << kTop + 15 + 14 * k
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << color << "\">P" << k + 1
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace stirap
