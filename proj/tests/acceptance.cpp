// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
// Usage: deltamix_acceptance [path-to-deltamix-cli]
// The CLI path enables the byte-level determinism check of `figure`; without
// it the check runs through the library.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "deltamix/deltamix.hpp"

namespace {

using namespace deltamix;
constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(bool pass, const std::string& id, const std::string& text) {
  std::printf("[%s] %s %s\n", pass ? "PASS" : "FAIL", id.c_str(), text.c_str());
  if (!pass) ++g_failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SimulationConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rate(0.0, 4.0), mag(0.05, 12.0), ph(-kPi, kPi),
      det(-10.0, 10.0);
  SimulationConfig c;
  c.rates = RelaxationRates(0.1 + rate(rng), rate(rng), rate(rng), rate(rng));
  c.control = {mag(rng), ph(rng)};
  c.input_d = {mag(rng), ph(rng)};
  c.input_s = {mag(rng), ph(rng)};
  c.delta_d = det(rng);
  return c;
}

// 1. Z = 0 leaves both channels untouched.
void criterion_zero_length() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const SimulationConfig c = random_config(rng);
    const DriveConfiguration p = c.single_point();
    const EffectiveLinewidths lw = effective_linewidths(c.rates);
    const ClosedFormOutputs cf = closed_form_outputs(p, lw, 0.0);
    const FieldAmplitudes ex = propagate_fields(p, lw, 0.0);
    worst = std::max({worst, std::abs(cf.s_total() - 1.0), std::abs(cf.d_total() - 1.0),
                      std::abs(ex.total_s() / p.signal_s.amplitude() - 1.0),
                      std::abs(ex.total_d() / p.drive_d.amplitude() - 1.0)});
  }
  report(worst <= 1e-12, "C1", "identity at zero length (100 random configs): max |ratio-1| = " +
                                   sci(worst) + " (tol 1e-12)");
}

// 2. Closed form vs matrix exponential vs RK4 over every preset grid.
void criterion_triple_oracle() {
  double cf_ex = 0.0, cf_rk = 0.0, ex_rk = 0.0;
  std::string where;
  for (auto name : kPresetNames) {
    const SimulationConfig cfg = figure_preset(name);
    const EffectiveLinewidths lw = effective_linewidths(cfg.rates);
    for (int i = 0; i < cfg.sweep.points; ++i) {
      const DriveConfiguration p = cfg.sweep_point(cfg.sweep.delta_at(i), cfg.sweep.phi_values[0]);
      const ClosedFormOutputs cf = closed_form_outputs(p, lw, cfg.z());
      const FieldAmplitudes ex = propagate_fields(p, lw, cfg.z());
      const FieldAmplitudes rk = propagate_fields_stepwise(p, lw, cfg.z(), 10000);
      const Complex s0 = p.signal_s.amplitude(), d0 = p.drive_d.amplitude();
      const double a = std::max(relative_deviation(cf.s_total(), ex.total_s() / s0),
                                relative_deviation(cf.d_total(), ex.total_d() / d0));
      const double b = std::max(relative_deviation(cf.s_total(), rk.total_s() / s0),
                                relative_deviation(cf.d_total(), rk.total_d() / d0));
      const double c = std::max({relative_deviation(ex.omega_d, rk.omega_d),
                                 relative_deviation(ex.omega_td, rk.omega_td),
                                 relative_deviation(ex.omega_s, rk.omega_s),
                                 relative_deviation(ex.omega_ts, rk.omega_ts)});
      if (std::max({a, b, c}) > std::max({cf_ex, cf_rk, ex_rk})) {
        where = std::string(name) + " delta_d=" + num(p.delta_d);
      }
      cf_ex = std::max(cf_ex, a);
      cf_rk = std::max(cf_rk, b);
      ex_rk = std::max(ex_rk, c);
    }
  }
  report(cf_ex <= 1e-8 && cf_rk <= 1e-8 && ex_rk <= 1e-8, "C2",
         "triple-oracle agreement (8 presets x 401 points, RK4 1e4 steps): closed/expm " + sci(cf_ex) +
             ", closed/rk4 " + sci(cf_rk) + ", expm/rk4 " + sci(ex_rk) + ", worst at " + where +
             " (tol 1e-8)");
}

// 3. Closed-form coherences vs Lindblad order extraction.
void criterion_perturbation_oracle() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> ph(-kPi, kPi), det(-10.0, 10.0);
  const RelaxationRates rates(3.0, 1.0);
  const EffectiveLinewidths lw = effective_linewidths(rates);
  double worst = 0.0, min_ratio = 1e300, max_ratio = 0.0;
  for (int k = 0; k < 50; ++k) {
    DriveConfiguration c;
    c.control_c = {k % 2 ? 10.0 : 5.0, ph(rng)};
    c.drive_d = {1.0, ph(rng)};
    c.signal_s = {1.0, ph(rng)};
    c.delta_d = det(rng);
    const CoherenceSet closed = closed_form_coherences(c, lw);
    const double e3[] = {1e-3}, e4[] = {1e-4};
    const double d3 = coherence_deviation(closed, extract_weak_field_orders(c, rates, e3));
    const double d4 = coherence_deviation(closed, extract_weak_field_orders(c, rates, e4));
    worst = std::max(worst, d3);
    min_ratio = std::min(min_ratio, d3 / d4);
    max_ratio = std::max(max_ratio, d3 / d4);
  }
  report(worst <= 1e-4, "C3a", "perturbation oracle at eps=1e-3 (50 samples): max rel dev = " + sci(worst) +
                                   " (tol 1e-4)");
  report(min_ratio >= 70.0 && max_ratio <= 140.0, "C3b",
         "discrepancy shrink for eps 1e-3 -> 1e-4: ratio in [" + num(min_ratio) + ", " + num(max_ratio) +
             "] (expected ~100, accepted [70, 140])");
}

const SweepRow& row_at(const std::vector<SweepRow>& rows, double delta) {
  return *std::min_element(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.delta_d - delta) < std::abs(b.delta_d - delta);
  });
}

// 4. Figure 2 targets.
void criterion_figure2() {
  const auto a = run_sweep(figure_preset("fig2a"));
  const auto b = run_sweep(figure_preset("fig2b"));
  const auto c = run_sweep(figure_preset("fig2c"));
  const auto d = run_sweep(figure_preset("fig2d"));

  const double ia = row_at(a, 0.0).s.intensity_total;
  report(std::abs(ia - 1.985) <= 1e-3 && ia > 1.0, "C4a",
         "fig2a resonance I_s_tot = " + num(ia) + " (target 1.985 +/- 1e-3, > 1)");
  const double ic = row_at(c, 0.0).s.intensity_total;
  report(std::abs(ic - 0.053) <= 1e-3, "C4b", "fig2c resonance I_s_tot = " + num(ic) + " (target 0.053 +/- 1e-3)");
  const double zb = row_at(b, 0.0).s.interference_term;
  const double zd = row_at(d, 0.0).s.interference_term;
  report(std::abs(zb) <= 1e-10 && std::abs(zd) <= 1e-10, "C4c",
         "fig2b/fig2d interference at delta_d=0: " + sci(zb) + ", " + sci(zd) + " (tol 1e-10)");

  // Sign pattern near resonance (0 < |delta_d| <= 2).
  bool b_pos_for_positive = true, b_neg_for_negative = true;
  bool b_pos_for_negative = true, b_neg_for_positive = true;
  bool d_mirrors_b = true;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double dd = b[i].delta_d;
    if (dd == 0.0 || std::abs(dd) > 2.0) continue;
    const double tb = b[i].s.interference_term, td = d[i].s.interference_term;
    if (dd > 0) {
      b_pos_for_positive &= tb > 0;
      b_neg_for_positive &= tb < 0;
    } else {
      b_neg_for_negative &= tb < 0;
      b_pos_for_negative &= tb > 0;
    }
    d_mirrors_b &= (tb > 0) != (td > 0);
  }
  const double tb_plus = row_at(b, 1.0).s.interference_term;
  const double tb_minus = row_at(b, -1.0).s.interference_term;
  report(b_pos_for_positive && b_neg_for_negative && d_mirrors_b, "C4d",
         "fig2b interference > 0 for delta_d > 0 and < 0 for delta_d < 0, fig2d opposite: "
         "fig2b(+1) = " + num(tb_plus) + ", fig2b(-1) = " + num(tb_minus) +
             (d_mirrors_b ? ", fig2d mirrors fig2b" : ", fig2d does not mirror fig2b"));
  std::printf("[INFO] C4d observed orientation: fig2b constructive for delta_d %s 0 (blue-detuned side is "
              "delta_d < 0), destructive for delta_d %s 0; fig2d %s\n",
              b_pos_for_negative ? "<" : ">", b_neg_for_positive ? ">" : "<",
              d_mirrors_b ? "opposite" : "not opposite");
}

// 5. Figure 3 targets.
void criterion_figure3() {
  const auto a = run_sweep(figure_preset("fig3a"));
  const auto c = run_sweep(figure_preset("fig3c"));
  const double ia = row_at(a, 0.0).d.intensity_total;
  const double ic = row_at(c, 0.0).d.intensity_total;
  report(std::abs(ia - 1.074) <= 1e-3, "C5a", "fig3a resonance I_d_tot = " + num(ia) + " (target 1.074 +/- 1e-3)");
  report(std::abs(ic - 1.489) <= 1e-3 && ic > ia, "C5b",
         "fig3c resonance I_d_tot = " + num(ic) + " (target 1.489 +/- 1e-3, stronger than fig3a)");

  // Under Fig. 2 conditions (|Oc| = 5, ratio 1) the generated E_td is weaker than E_ts everywhere.
  bool smaller = true;
  double worst_ratio = 0.0;
  for (auto name : {"fig2a", "fig2b", "fig2c", "fig2d"}) {
    for (const auto& r : run_sweep(figure_preset(name))) {
      smaller &= r.d.intensity_generated < r.s.intensity_generated;
      worst_ratio = std::max(worst_ratio, r.d.intensity_generated / r.s.intensity_generated);
    }
  }
  const auto& res = row_at(run_sweep(figure_preset("fig2a")), 0.0);
  report(smaller, "C5c",
         "|E_td/E_d0|^2 < |E_ts/E_s0|^2 on all fig2 grid points: at resonance " + num(res.d.intensity_generated) +
             " vs " + num(res.s.intensity_generated) + ", max ratio " + num(worst_ratio));
}

// 6. Time-evolution and steady-state hygiene.
void criterion_lindblad_hygiene() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> rate(0.0, 3.0), mag(0.1, 5.0), ph(-kPi, kPi), det(-10.0, 10.0);
  double drift = 0.0, herm = 0.0, min_eig = 1.0, residual = 0.0;
  for (int k = 0; k < 100; ++k) {
    const RelaxationRates rates(0.1 + rate(rng), rate(rng), rate(rng), rate(rng));
    DriveConfiguration c;
    c.drive_d = {mag(rng), ph(rng)};
    c.control_c = {mag(rng), ph(rng)};
    c.signal_s = {mag(rng), ph(rng)};
    c.delta_d = det(rng);
    const Liouvillian l = build_liouvillian(c, rates);
    const EvolutionResult ev = evolve(DensityMatrix3::ground_state(), l, 10.0, 1e-2);
    drift = std::max(drift, ev.trace_drift);
    herm = std::max({herm, ev.hermiticity_correction, ev.state.hermiticity_defect()});
    min_eig = std::min(min_eig, ev.state.min_eigenvalue());
    residual = std::max(residual, steady_state_residual(l, steady_state(l)));
  }
  report(drift <= 1e-8 && herm <= 1e-10 && min_eig >= -1e-9 && residual <= 1e-10, "C6",
         "Lindblad hygiene (100 evolutions, T=10, dt=1e-2): trace drift " + sci(drift) + " (1e-8), Hermiticity " +
             sci(herm) + " (1e-10), min eigenvalue " + sci(min_eig) + " (>= -1e-9), steady residual " +
             sci(residual) + " (1e-10)");
}

// 7. Phase invariances of the CSV rows.
void criterion_phase_properties() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> shift(-kPi, kPi);
  double covariance = 0.0, periodicity = 0.0;
  for (auto name : kPresetNames) {
    const SimulationConfig cfg = figure_preset(name);
    const EffectiveLinewidths lw = effective_linewidths(cfg.rates);
    const double phi = cfg.sweep.phi_values[0];
    for (int i = 0; i < cfg.sweep.points; ++i) {
      const DriveConfiguration p = cfg.sweep_point(cfg.sweep.delta_at(i), phi);
      const auto base = row_values(compute_row(p, lw, cfg.z(), phi));

      DriveConfiguration shifted = p;
      const double delta = shift(rng);
      shifted.drive_d.phase += delta;
      shifted.signal_s.phase += delta;
      const auto s = row_values(compute_row(shifted, lw, cfg.z(), phi));

      DriveConfiguration wrapped = p;
      wrapped.drive_d.phase += 2.0 * kPi;
      const auto w = row_values(compute_row(wrapped, lw, cfg.z(), phi));
      for (std::size_t k = 0; k < base.size(); ++k) {
        covariance = std::max(covariance, std::abs(base[k] - s[k]));
        periodicity = std::max(periodicity, std::abs(base[k] - w[k]));
      }
    }
  }
  report(covariance <= 1e-12, "C7a", "common phase shift, 16 CSV columns over all presets: max change " +
                                         sci(covariance) + " (tol 1e-12)");
  report(periodicity <= 1e-12, "C7b", "2*pi phase periodicity: max change " + sci(periodicity) +
                                          " (tol 1e-12, round-off of phi + 2*pi)");

  double odd = 0.0;
  const SimulationConfig cfg = figure_preset("fig2a");
  const EffectiveLinewidths lw = effective_linewidths(cfg.rates);
  for (int k = 0; k <= 64; ++k) {
    const double phi = -kPi + 2.0 * kPi * k / 64.0;
    const auto plus = interference_decomposition(cfg.sweep_point(0.0, phi), lw, cfg.z());
    const auto minus = interference_decomposition(cfg.sweep_point(0.0, -phi), lw, cfg.z());
    odd = std::max(odd, std::abs(plus.s.interference_term + minus.s.interference_term));
  }
  report(odd <= 1e-10, "C7c", "s-channel interference odd in phi at delta_d=0: max |I(phi)+I(-phi)| = " +
                                  sci(odd) + " (tol 1e-10)");
}

// 8. Both channels never amplified together on the Fig. 3 grids.
void criterion_exclusivity() {
  std::size_t violations = 0, attenuated = 0, total = 0;
  std::string where;
  for (auto name : {"fig3a", "fig3b", "fig3c", "fig3d"}) {
    const auto rows = run_sweep(figure_preset(name));
    const auto v = exclusivity_violations(rows);
    for (auto i : v) where += std::string(" ") + name + "@" + num(rows[i].delta_d);
    violations += v.size();
    for (const auto& r : rows) attenuated += r.s.intensity_total < 1.0 && r.d.intensity_total < 1.0;
    total += rows.size();
  }
  report(violations == 0, "C8",
         "exclusivity report over fig3a-d (" + std::to_string(total) + " points): " + std::to_string(violations) +
             " points with both channels amplified" + where);
  std::printf("[INFO] C8 points with both channels below unit intensity (off-resonant absorption): %zu\n",
              attenuated);
}

// 9. `figure --preset fig2a` is byte-for-byte reproducible.
void criterion_determinism(const char* cli) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "deltamix_acceptance";
  fs::create_directories(dir);
  const std::string p1 = (dir / "fig2a_run1.csv").string(), p2 = (dir / "fig2a_run2.csv").string();
  fs::remove(p1);
  fs::remove(p2);
  std::string how;
  if (cli != nullptr) {
    const std::string base = std::string("\"") + cli + "\" figure --preset fig2a --out ";
    const int r1 = std::system((base + "\"" + p1 + "\" > /dev/null").c_str());
    const int r2 = std::system((base + "\"" + p2 + "\" --threads 4 > /dev/null").c_str());
    how = "CLI runs exit " + std::to_string(r1) + "/" + std::to_string(r2);
  } else {
    emit_csv(run_sweep(figure_preset("fig2a")), p1);
    emit_csv(run_sweep(figure_preset("fig2a"), 4), p2);
    how = "library runs";
  }
  const std::string a = slurp(p1), b = slurp(p2);
  report(!a.empty() && a == b, "C9",
         "figure --preset fig2a twice: " + std::to_string(a.size()) + " bytes, " +
             (a == b ? "byte-identical" : "DIFFERENT") + " (" + how + ")");
}

}  // namespace

int main(int argc, char** argv) {
  criterion_zero_length();
  criterion_triple_oracle();
  criterion_perturbation_oracle();
  criterion_figure2();
  criterion_figure3();
  criterion_lindblad_hygiene();
  criterion_phase_properties();
  criterion_exclusivity();
  criterion_determinism(argc > 1 ? argv[1] : nullptr);
  std::printf("%s: %d failing criterion line(s)\n", g_failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED",
              g_failures);
  return g_failures ? 1 : 0;
}
