// deltamix: command-line front end for the driven three-level medium.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "deltamix/deltamix.hpp"

namespace {

using namespace deltamix;

enum ExitCode { kOk = 0, kValidationFailure = 1, kConfigError = 2, kIoError = 3 };

struct Options {
  std::string config_path;
  std::string out_path;
  std::optional<int> points;
  std::vector<double> delta_range;
  std::string phi_list;
  std::uint64_t seed = kDefaultSeed;
  std::string preset;
  bool full = false;
  unsigned threads = 1;
};

SimulationConfig resolve_config(const Options& opt) {
  SimulationConfig cfg = opt.config_path.empty() ? SimulationConfig{} : load_config(opt.config_path);
  if (opt.points) cfg.sweep.points = *opt.points;
  if (opt.delta_range.size() == 2) {
    cfg.sweep.delta_d_min = opt.delta_range[0];
    cfg.sweep.delta_d_max = opt.delta_range[1];
  }
  if (!opt.phi_list.empty()) cfg.sweep.phi_values = parse_angle_list(opt.phi_list, "--phi");
  cfg.validate();
  return cfg;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt(Complex v) { return fmt(v.real()) + (v.imag() < 0 ? " - " : " + ") + fmt(std::abs(v.imag())) + "i"; }

int cmd_steady_state(const Options& opt) {
  const SimulationConfig cfg = resolve_config(opt);
  const Liouvillian l = build_liouvillian(cfg.single_point(), cfg.rates);
  const DensityMatrix3 rho = steady_state(l);
  std::cout << "# steady state at delta_d = " << fmt(cfg.delta_d) << " (basis |1>, |2>, |3>)\n";
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      std::cout << "rho" << i << j << " = " << fmt(rho.element(i, j)) << '\n';
  std::cout << "residual = " << fmt(steady_state_residual(l, rho)) << '\n'
            << "trace_error = " << fmt(std::abs(rho.trace() - 1.0)) << '\n'
            << "min_eigenvalue = " << fmt(rho.min_eigenvalue()) << '\n';
  return kOk;
}

int cmd_coherences(const Options& opt) {
  const SimulationConfig cfg = resolve_config(opt);
  const DriveConfiguration point = cfg.single_point();
  const EffectiveLinewidths lw = effective_linewidths(cfg.rates);
  const CoherenceSet closed = closed_form_coherences(point, lw);
  const double eps[] = {Tolerances::oracle_epsilon};
  const CoherenceSet oracle = extract_weak_field_orders(point, cfg.rates, eps);

  std::cout << "# Gamma21 = " << fmt(lw.gamma21) << ", Gamma31 = " << fmt(lw.gamma31)
            << ", xi = " << fmt(xi(lw, point).xi) << '\n';
  auto line = [](const char* name, Complex c, Complex o) {
    std::cout << name << "  closed = " << fmt(c) << "  oracle = " << fmt(o)
              << "  rel_dev = " << fmt(relative_deviation(c, o)) << '\n';
  };
  line("rho21_1", closed.rho21_1, oracle.rho21_1);
  line("rho31_1", closed.rho31_1, oracle.rho31_1);
  line("rho21_2", closed.rho21_2, oracle.rho21_2);
  line("rho31_2", closed.rho31_2, oracle.rho31_2);
  std::cout << "max_dev = " << fmt(coherence_deviation(closed, oracle)) << " (eps = "
            << fmt(Tolerances::oracle_epsilon) << ")\n";
  if (weak_drive_bound_exceeded(point)) {
    std::cout << "warning: input drives exceed 0.1*|Omega_c|; closed forms assume rho11 ~ 1\n";
  }
  return kOk;
}

int cmd_propagate(const Options& opt) {
  const SimulationConfig cfg = resolve_config(opt);
  const DriveConfiguration point = cfg.single_point();
  const EffectiveLinewidths lw = effective_linewidths(cfg.rates);
  const double z = cfg.z();

  const ClosedFormOutputs cf = closed_form_outputs(point, lw, z);
  const FieldAmplitudes ex = propagate_fields(point, lw, z);
  const FieldAmplitudes rk = propagate_fields_stepwise(point, lw, z, cfg.propagation.steps);
  const InterferenceRecord rec = interference_decomposition(point, lw, z);
  const Complex s0 = point.signal_s.amplitude();
  const Complex d0 = point.drive_d.amplitude();

  std::cout << "# delta_d = " << fmt(cfg.delta_d) << ", Z = " << fmt(z)
            << ", phi = " << fmt(point.relative_phase()) << '\n';
  std::cout << "Es_tot/Es0  closed = " << fmt(cf.s_total()) << "  expm = " << fmt(ex.total_s() / s0)
            << "  rk4 = " << fmt(rk.total_s() / s0) << '\n';
  std::cout << "Ed_tot/Ed0  closed = " << fmt(cf.d_total()) << "  expm = " << fmt(ex.total_d() / d0)
            << "  rk4 = " << fmt(rk.total_d() / d0) << '\n';
  auto channel = [](const char* name, const ChannelIntensities& c) {
    std::cout << name << "  I_tot = " << fmt(c.intensity_total) << "  I_inc = " << fmt(c.intensity_incident)
              << "  I_gen = " << fmt(c.intensity_generated) << "  I_interf = " << fmt(c.interference_term)
              << '\n';
  };
  channel("s", rec.s);
  channel("d", rec.d);
  return kOk;
}

void print_sweep_summary(const SimulationConfig& cfg, const std::vector<SweepRow>& rows,
                         const std::string& path) {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.oracle_dev);
  std::cout << "wrote " << rows.size() << " rows to " << path << '\n'
            << "max closed-form vs expm deviation = " << fmt(worst) << '\n';
  if (cfg.inset_td) {
    double peak = 0.0, at = 0.0;
    for (const auto& r : rows) {
      if (r.d.intensity_generated > peak) {
        peak = r.d.intensity_generated;
        at = r.delta_d;
      }
    }
    std::cout << "peak |E_td/E_d0|^2 = " << fmt(peak) << " at delta_d = " << fmt(at) << '\n';
  }
  const auto both = exclusivity_violations(rows);
  std::cout << "points with both channels amplified: " << both.size() << '\n';
  for (auto i : both) std::cout << "  delta_d = " << fmt(rows[i].delta_d) << ", phi = " << fmt(rows[i].phi) << '\n';
}

int cmd_sweep(const Options& opt) {
  const SimulationConfig cfg = resolve_config(opt);
  const auto rows = run_sweep(cfg, opt.threads);
  emit_csv(rows, opt.out_path);
  print_sweep_summary(cfg, rows, opt.out_path);
  return kOk;
}

int cmd_figure(const Options& opt) {
  SimulationConfig cfg = figure_preset(opt.preset);
  if (opt.points) cfg.sweep.points = *opt.points;
  if (opt.delta_range.size() == 2) {
    cfg.sweep.delta_d_min = opt.delta_range[0];
    cfg.sweep.delta_d_max = opt.delta_range[1];
  }
  cfg.validate();
  const auto rows = run_sweep(cfg, opt.threads);
  emit_csv(rows, opt.out_path);
  print_sweep_summary(cfg, rows, opt.out_path);
  return kOk;
}

int cmd_validate(const Options& opt) {
  const SimulationConfig cfg = opt.preset.empty() ? resolve_config(opt) : figure_preset(opt.preset);
  const auto report = validate(cfg, opt.full ? ValidationLevel::full : ValidationLevel::quick, opt.seed);
  std::cout << report.to_text();
  return report.passed() ? kOk : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase- and frequency-controlled wave mixing in a driven three-level medium"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Configuration file (key = value)");
    sub->add_option("--seed", opt.seed, "Seed for randomized checks");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--points", opt.points, "Number of detuning grid points")->check(CLI::Range(2, 100000000));
    sub->add_option("--delta-range", opt.delta_range, "Detuning bounds a b")->expected(2);
    sub->add_option("--threads", opt.threads, "Worker threads for the sweep")->check(CLI::Range(1u, 1024u));
  };

  auto* steady = app.add_subcommand("steady-state", "Print the steady-state density matrix");
  add_common(steady);
  auto* coh = app.add_subcommand("coherences", "Closed-form coherences and their Lindblad oracle");
  add_common(coh);
  auto* prop = app.add_subcommand("propagate", "Single-point output fields");
  add_common(prop);
  auto* sweep = app.add_subcommand("sweep", "Detuning sweep written as CSV");
  add_common(sweep);
  add_grid(sweep);
  sweep->add_option("--phi", opt.phi_list, "Relative phases, comma separated (e.g. -pi/2,0)");
  sweep->add_option("--out", opt.out_path, "Output CSV path")->required();
  auto* figure = app.add_subcommand("figure", "Reproduce a published detuning scan as CSV");
  add_common(figure);
  add_grid(figure);
  figure->add_option("--preset", opt.preset, "fig2a..fig2d, fig3a..fig3d")->required();
  figure->add_option("--out", opt.out_path, "Output CSV path")->required();
  auto* val = app.add_subcommand("validate", "Cross-check all solution paths");
  add_common(val);
  val->add_option("--points", opt.points, "Number of detuning grid points");
  val->add_option("--delta-range", opt.delta_range, "Detuning bounds a b")->expected(2);
  val->add_option("--phi", opt.phi_list, "Relative phases, comma separated");
  val->add_option("--preset", opt.preset, "Validate a figure preset instead of --config");
  val->add_flag("--full", opt.full, "Every grid point plus randomized evolution checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*steady) return cmd_steady_state(opt);
    if (*coh) return cmd_coherences(opt);
    if (*prop) return cmd_propagate(opt);
    if (*sweep) return cmd_sweep(opt);
    if (*figure) return cmd_figure(opt);
    if (*val) return cmd_validate(opt);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NormalizationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kOk;
}
