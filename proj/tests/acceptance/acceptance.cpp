// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stirap/adiabatic.hpp"
#include "stirap/commands.hpp"
#include "stirap/ensemble.hpp"
#include "stirap/protocols.hpp"
#include "stirap/sweep.hpp"

using namespace stirap;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// ---- 1 ----------------------------------------------------------------------
Verdict eigenstructure() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  double worst_eig = 0.0, worst_dark = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng), s = u(rng), d = u(rng);
    Eigen::Matrix3d h;
    h << 0, 0.5 * p, 0, 0.5 * p, d, 0.5 * s, 0, 0.5 * s, 0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
    const auto e = eigenvalues(p, s, d);
    const Eigen::Vector3d analytic(e.minus, e.zero, e.plus);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    worst_eig = std::max(worst_eig, (analytic - es.eigenvalues()).cwiseAbs().maxCoeff() / scale);
    const auto states = dressed_states(p, s, d);
    worst_dark = std::max(worst_dark, (h * states->zero).norm() / h.norm());
  }
  const double t = seconds_since(start);
  return {worst_eig <= 1e-10 && worst_dark <= 1e-12 && t < 1.0,
          fmt("max rel eigenvalue err %.2e (<=1e-10), max |H phi0|/|H| %.2e (<=1e-12), %.3f s (<1 s)",
              worst_eig, worst_dark, t)};
}

// ---- 2 ----------------------------------------------------------------------
Verdict unitary_fidelity() {
  const LevelScheme scheme = lambda_scheme(4.0, 0.0, 0.0);
  PulseSchedule s;
  const auto pair = counterintuitive_pair(50.0, 50.0, 1.0, 1.1);
  s.add("P", pair.pump);
  s.add("S", pair.stokes);
  IntegratorConfig cfg;
  cfg.method = IntegrationMethod::ClassicalRk4;
  cfg.fixed_step = 13.1 / 20000;  // 2e4 steps
  cfg.sample_count = 2000;
  StateVector psi0(3);
  psi0 << Complex(0.6, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.8);
  const auto fwd = propagate(scheme, s, -6.55, 6.55, psi0, cfg);
  double worst = 0.0;
  for (double n2 : fwd.norm_sq) worst = std::max(worst, std::abs(n2 - 1.0));
  const HamiltonianModel model(scheme, s);
  const auto back = propagate(
      [&](double tau, Hamiltonian& h) {
        model.assemble(6.55 - tau, h);
        h = -h;
      },
      3, 0.0, 13.1, fwd.amplitudes.back(), cfg);
  const double infidelity = 1.0 - std::norm(psi0.dot(back.amplitudes.back()));
  return {worst <= 1e-8 && infidelity <= 1e-6,
          fmt("%zu RK4 steps, max |norm^2-1| %.2e (<=1e-8), round-trip infidelity %.2e (<=1e-6)",
              fwd.stats.accepted, worst, infidelity)};
}

// ---- 3 ----------------------------------------------------------------------
Verdict loss_closure() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> det{0.0, 10.0 * u(rng) - 5.0, 0.0};
    const std::vector<double> gam{0.5 * u(rng), 20.0 * u(rng), 0.5 * u(rng)};
    const std::vector<std::string> ids{"P", "S"};
    const LevelScheme scheme = chain_scheme(det, gam, ids);
    PulseSchedule s;
    const auto pair = gaussian_pair(50.0 * u(rng), 50.0 * u(rng), 1.0, 4.0 * u(rng) - 2.0);
    s.add("P", pair.pump);
    s.add("S", pair.stokes);
    StateVector psi0(3);
    psi0 << Complex(u(rng), u(rng)), Complex(u(rng), 0.0), Complex(0.0, u(rng));
    psi0 /= psi0.norm();
    const auto t = propagate(scheme, s, -8.0, 8.0, psi0);
    worst = std::max(worst, std::abs(t.norm_sq.back() + t.total_loss() - t.initial_norm_sq()));
  }
  return {worst <= 1e-6, fmt("20 random decay configurations, max closure error %.2e (<=1e-6)", worst)};
}

// ---- 4 ----------------------------------------------------------------------
Verdict ideal_stirap() {
  StirapParams p;  // peak 50, width 1, delay 1.1, resonance
  p.gamma2 = 1.0;
  const auto r = run_stirap(p);
  const double eta = r.scalar("efficiency"), p2 = r.scalar("max_intermediate");

  // Step-halving oracle: tight adaptive run against RK4 at h/2 and h/4.
  const Setup s = stirap_setup(p);
  IntegratorConfig tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-15;
  IntegratorConfig h2;
  h2.method = IntegrationMethod::ClassicalRk4;
  h2.fixed_step = 5e-4;
  IntegratorConfig h4 = h2;
  h4.fixed_step = 2.5e-4;
  const auto a = propagate(s.scheme, s.schedule, s.t0, s.t1, s.initial, tight);
  const auto b = propagate(s.scheme, s.schedule, s.t0, s.t1, s.initial, h2);
  const auto c = propagate(s.scheme, s.schedule, s.t0, s.t1, s.initial, h4);
  const double oracle_spread =
      std::max({std::abs(a.final_population(2) - b.final_population(2)),
                std::abs(a.final_population(2) - c.final_population(2)),
                std::abs(eta - a.final_population(2))});

  std::vector<double> delays;
  for (int i = 0; i <= 40; ++i) delays.push_back(-1.0 + 0.1 * i);
  const auto start = Clock::now();
  const auto sweep = delay_sweep(p, delays, 1);
  const double t = seconds_since(start);
  std::vector<double> eff(delays.size());
  for (std::size_t i = 0; i < eff.size(); ++i) eff[i] = sweep.at(i);
  const double width = plateau_width(delays, eff, 0.99);

  const bool pass = eta >= 0.999 && p2 <= 1e-3 && oracle_spread <= 1e-6 && width >= 1.0 && t < 5.0;
  return {pass, fmt("eta %.6f (>=0.999), max P2 %.3e (<=1e-3), oracle agreement %.1e (<=1e-6), "
                    "plateau eta>=0.99 width %.2f tau (>=1), sweep %.2f s (<5 s)",
                    eta, p2, oracle_spread, width, t)};
}

// ---- 5 ----------------------------------------------------------------------
Verdict decay_contrast() {
  StirapParams p;
  p.gamma2 = 20.0;
  const auto r = run_bstirap(p);
  const double ci = r.scalar("stirap_efficiency"), in = r.scalar("efficiency");
  return {ci >= 0.9 && in <= 0.2,
          fmt("gamma2 tau = 20: counterintuitive eta %.4f (>=0.9), intuitive eta %.2e (<=0.2)", ci, in)};
}

// ---- 6 ----------------------------------------------------------------------
Verdict fractional() {
  FractionalParams p;
  p.theta_fs = kPi / 4;
  const auto r = run_fractional(p);
  const double e1 = std::abs(r.scalar("P1") - 0.5), e3 = std::abs(r.scalar("P3") - 0.5);
  const double ph = r.scalar("phase_error");
  return {e1 <= 1e-3 && e3 <= 1e-3 && ph <= 1e-2,
          fmt("P1 %.5f, P3 %.5f (0.5 +- 1e-3), phase %.5f vs dark-state %.5f, err %.1e (<=1e-2)",
              r.scalar("P1"), r.scalar("P3"), r.scalar("relative_phase"),
              r.scalar("predicted_relative_phase"), ph)};
}

// ---- 7 ----------------------------------------------------------------------
Verdict sastirap() {
  SaStirapParams p;
  p.peak = 2.0;
  const auto r = run_sastirap(p);
  const double plain = r.scalar("efficiency_plain"), cd = r.scalar("efficiency_cd");
  double worst_gain = 1.0;
  for (double peak : {1.0, 2.0, 5.0, 10.0, 20.0}) {
    for (double delay : {0.5, 0.8, 1.1, 1.5, 2.0}) {
      SaStirapParams q;
      q.peak = peak;
      q.delay = delay;
      const auto g = run_sastirap(q);
      worst_gain = std::min(worst_gain, g.scalar("efficiency_cd") - g.scalar("efficiency_plain"));
    }
  }
  return {plain < 0.9 && cd >= 0.9999 && worst_gain >= 0.0,
          fmt("peak tau = 2: plain eta %.4f (<0.9), with CD %.8f (>=0.9999); 5x5 grid min gain %.2e (>=0)",
              plain, cd, worst_gain)};
}

// ---- 8 ----------------------------------------------------------------------
Verdict composite() {
  double worst = 0.0;
  std::string levels;
  for (std::size_t n = 1; n <= 3; ++n) {
    CompositeParams p;
    p.phases.assign(n, {0.0, 0.0});
    const auto r = run_composite(p);
    worst = std::max(worst, r.scalar("parity_error"));
    levels += fmt("%zu->%g ", n, r.scalar("expected_level"));
  }
  return {worst <= 1e-3, fmt("pairs->level %smax residual %.2e (<=1e-3)", levels.c_str(), worst)};
}

// ---- 9 ----------------------------------------------------------------------
Verdict gates() {
  bool pass = true;
  std::string detail;
  for (double alpha : {kPi / 8, kPi / 4}) {
    RotationGateParams rp;
    rp.alpha = alpha;
    const auto r = run_rotation_gate(rp);
    TripodGateParams tp;
    tp.control_phase = tripod_control_phase_for_rotation(alpha);
    const auto t = run_tripod_gate(tp);
    for (const auto* g : {&r, &t}) {
      const double unit = g->scalar("unitarity_deviation"), leak = g->scalar("leakage");
      const double err = std::abs(g->scalar("rotation_angle") - 2 * alpha);
      pass = pass && unit <= 1e-3 && leak <= 1e-4 && err <= 1e-2;
      detail += fmt("%s a=%.4f: unit %.1e leak %.1e angle err %.1e; ", g == &r ? "fractional" : "tripod",
                    alpha, unit, leak, err);
    }
  }
  return {pass, detail + "(tol 1e-3, 1e-4, 1e-2)"};
}

// ---- 10 ---------------------------------------------------------------------
Verdict vstirap() {
  VstirapParams p;
  p.g = 1.0;
  p.kappa = 0.1;
  p.gamma = 0.1;
  const auto r = run_vstirap(p);
  const double em = r.scalar("emission_probability");
  const double closure = std::abs(r.scalar("bookkeeping_error"));
  return {em >= 0.9 && closure <= 1e-6,
          fmt("g/kappa = g/gamma = 10: emission %.5f (>=0.9), emission + loss + norm - 1 = %.1e (<=1e-6)",
              em, closure)};
}

// ---- 11 ---------------------------------------------------------------------
Verdict spatial() {
  const ScenarioConfig scenario =
      load_config((fs::path(STIRAP_SCENARIOS) / "magnonic_coupler.json").string());
  Json doc = to_json(scenario);
  for (int k = 0; k < 3; ++k) set_by_path(doc, "scheme.gammas." + std::to_string(k), 0.0);
  const ScenarioRun guides = run_scenario(parse_config(doc, "lossless coupler"));
  const double transfer = guides.result.scalar("efficiency");
  const double middle = guides.result.scalar("max_P2");

  NonreciprocityParams np;
  const auto nr = run_nonreciprocity(np, 1);
  const double fwd = nr.scalar("forward_transfer"), bwd = nr.scalar("backward_to_a");
  return {transfer >= 0.999 && middle <= 1e-3 && fwd >= 0.95 && bwd <= 0.05,
          fmt("three guides: transfer %.5f (>=0.999), middle peak %.2e (<=1e-3); one-way at "
              "separation %.3f: forward %.4f (>=0.95), backward-to-A %.2e (<=0.05)",
              transfer, middle, nr.scalar("separation"), fwd, bwd)};
}

// ---- 12 ---------------------------------------------------------------------
Verdict entropy() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double spec = 0.0, ent = 0.0, excess = -1.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> w{u(rng), u(rng), u(rng)};
    const double sum = w[0] + w[1] + w[2];
    for (double& x : w) x /= sum;
    const LevelScheme scheme = lambda_scheme(10.0 * u(rng) - 5.0, 0.0, 0.0);
    PulseSchedule s;
    const auto pair = gaussian_pair(40.0 * u(rng), 40.0 * u(rng), 1.0, 3.0 * u(rng) - 1.0);
    s.add("P", pair.pump);
    s.add("S", pair.stokes);
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    const auto ev = evolve_diagonal_ensemble(scheme, s, DiagonalEnsemble{w}, -8.0, 8.0, cfg);
    for (std::size_t k = 0; k < 3; ++k) {
      spec = std::max(spec, std::abs(ev.initial_spectrum[k] - ev.final_spectrum[k]));
    }
    ent = std::max(ent, std::abs(ev.entropy_after - ev.entropy_before));
    excess = std::max(excess, ev.max_final_population - ev.max_initial_weight);
  }
  return {spec <= 1e-8 && ent <= 1e-8 && excess <= 1e-8,
          fmt("10 random ensembles: spectrum err %.1e, entropy err %.1e (<=1e-8), "
              "max final population - max weight %.2e (<=1e-8)",
              spec, ent, excess)};
}

// ---- 13 ---------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict cli_determinism() {
  const fs::path work = fs::temp_directory_path() / "stirap_acceptance";
  fs::remove_all(work);
  const auto scenarios = list_scenarios();
  double serial_time = 0.0;
  std::size_t identical = 0, files = 0;
  std::string failures;
  for (const auto& sc : scenarios) {
    const fs::path a = work / (sc.id + "_j1"), b = work / (sc.id + "_j4");
    const std::string base = std::string(STIRAP_LAB_BIN) + " run " + sc.id + " --deterministic";
    const auto start = Clock::now();
    const int ra = std::system((base + " -j 1 --out " + a.string() + " 2>/dev/null").c_str());
    serial_time += seconds_since(start);
    const int rb = std::system((base + " -j 4 --out " + b.string() + " 2>/dev/null").c_str());
    if (ra != 0 || rb != 0) {
      failures += sc.id + "(exit) ";
      continue;
    }
    bool same = true;
    for (const auto& f : fs::directory_iterator(a)) {
      ++files;
      same = same && slurp(f.path()) == slurp(b / f.path().filename());
    }
    if (same) {
      ++identical;
    } else {
      failures += sc.id + " ";
    }
  }
  const bool pass = identical == scenarios.size() && scenarios.size() == 12 && serial_time < 60.0;
  return {pass, fmt("%zu/%zu scenarios byte-identical at -j 1 vs -j 4 (%zu files)%s%s, serial suite %.1f s (<60 s)",
                    identical, scenarios.size(), files, failures.empty() ? "" : ", differing: ",
                    failures.c_str(), serial_time)};
}

}  // namespace

int main() {
  setenv("STIRAP_SCENARIO_DIR", STIRAP_SCENARIOS, 0);
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"Eigenstructure", eigenstructure},
      {"Unitary fidelity", unitary_fidelity},
      {"Loss closure", loss_closure},
      {"Ideal STIRAP", ideal_stirap},
      {"Decay contrast", decay_contrast},
      {"Fractional STIRAP", fractional},
      {"saSTIRAP exactness", sastirap},
      {"Composite parity", composite},
      {"Rotation/tripod gates", gates},
      {"vSTIRAP", vstirap},
      {"Spatial analogs", spatial},
      {"Entropy/spectrum invariance", entropy},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
