// Copyright 2026 The dsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsim/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsim/config.hpp"
#include "dsim/estimation.hpp"
#include "dsim/protocols.hpp"
#include "dsim/rng.hpp"
#include "dsim/scenario.hpp"
#include "dsim/text.hpp"

namespace dsim {

namespace {

// Channel for deriving per-point seeds; trajectories use 0/1, measurement 2.
constexpr uint64_t kPointChannel = 3;

struct CommonArgs {
  std::string config_path;
  std::string scenarios_path = "data/table1.csv";
  std::string out_path;
  std::uint64_t seed = 0;
  std::int64_t trajectories = 0;
  double dt = 0.0;  // seconds; validate-rwa step override

  CLI::Option* config_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* traj_opt = nullptr;
  CLI::Option* dt_opt = nullptr;
};

void add_common(CLI::App* sub, CommonArgs& a) {
  a.config_opt = sub->add_option("--config", a.config_path, "key=value config file");
  a.out_opt = sub->add_option("--out", a.out_path, "output CSV path");
  a.seed_opt = sub->add_option("--seed", a.seed, "master RNG seed");
  a.traj_opt = sub->add_option("--trajectories", a.trajectories,
                               "noise trajectories per ensemble");
  a.dt_opt = sub->add_option("--dt", a.dt, "integration step override, seconds");
}

Config resolve_config(const CommonArgs& a) {
  Config cfg = a.config_path.empty() ? Config{} : load_config(a.config_path);
  if (a.seed_opt->count() > 0) cfg.seed = a.seed;
  if (a.out_opt->count() > 0) cfg.output = a.out_path;
  if (a.traj_opt->count() > 0) {
    if (a.trajectories < 1) throw std::invalid_argument("--trajectories must be >= 1");
    cfg.trajectories = a.trajectories;
  }
  if (a.dt_opt->count() > 0) {
    if (a.dt <= 0.0) throw std::invalid_argument("--dt must be positive");
    cfg.validate_dt_ns = a.dt * 1e9;
  }
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
  out.flush();
  if (!out.good()) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<double> scan_grid(double lo, double hi, int n, bool log_spacing) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    xs.push_back(hi);
    return xs;
  }
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    xs.push_back(log_spacing ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u);
  }
  return xs;
}

std::string point_csv(const std::vector<MeasurementRecord>& recs) {
  std::string csv = "T_s,p_hat,delta_p,n\n";
  for (const auto& r : recs) {
    csv += format_double(r.T);
    csv += ',';
    csv += format_double(r.estimated_population);
    csv += ',';
    csv += format_double(r.delta_p);
    csv += ',';
    csv += format_int(r.n);
    csv += '\n';
  }
  return csv;
}

std::string point_plot(const std::vector<MeasurementRecord>& recs) {
  std::string out = "x,y,sigma\n";
  for (const auto& r : recs) {
    out += format_double(r.T);
    out += ',';
    out += format_double(r.estimated_population);
    out += ',';
    out += format_double(r.delta_p);
    out += '\n';
  }
  return out;
}

int cmd_rabi(const Config& cfg) {
  const SystemParams p = cfg.system_params();
  const SignalParams s = cfg.signal_params();
  const NoiseModel m = cfg.noise_model();
  const PulseParams pp = cfg.pulse_params();
  const StirapParams sp = make_stirap_params(p.omega);

  const auto ts = scan_grid(cfg.rabi_t_min_ms * 1e-3, cfg.rabi_t_max_ms * 1e-3,
                            cfg.rabi_points, cfg.rabi_spacing == "log");
  std::vector<MeasurementRecord> recs;
  std::vector<FringePoint> pts;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const uint64_t seed = derive_stream_seed(cfg.seed, i, kPointChannel);
    const MeasurementRecord r =
        run_rabi(p, s, m, sp, pp, ts[i], cfg.rabi_t_add_s, cfg.rabi_n, seed);
    recs.push_back(r);
    pts.push_back({r.T, r.estimated_population, r.n});
  }

  write_file(cfg.output, point_csv(recs));
  write_file(cfg.output + ".plot", point_plot(recs));

  std::cout << "rabi sweep: " << recs.size() << " points, T = "
            << format_double(ts.front()) << ".." << format_double(ts.back())
            << " s, n = " << cfg.rabi_n << " shots/point\n";
  try {
    const RabiFit fit = fit_rabi(pts);
    std::cout << "fitted omega_g = " << format_double(fit.omega_g_hat / kTwoPi)
              << " Hz +- " << format_double(fit.omega_g_std / kTwoPi)
              << " Hz, contrast " << format_double(fit.contrast_f)
              << (fit.converged ? "" : " (fit did not converge)") << "\n";
  } catch (const std::exception& e) {
    std::cout << "fringe fit unavailable: " << e.what() << "\n";
  }
  std::cout << "wrote " << cfg.output << " and " << cfg.output << ".plot\n";
  return 0;
}

int cmd_ramsey(const Config& cfg) {
  const SystemParams p = cfg.system_params();
  const NoiseModel m = cfg.noise_model();
  const PulseParams pp = cfg.pulse_params();
  const StirapParams sp = make_stirap_params(p.omega);
  const RamseyBasis basis =
      cfg.ramsey_basis == "bare" ? RamseyBasis::bare : RamseyBasis::dressed;
  const double detuning = kTwoPi * cfg.ramsey_detuning_hz;

  std::vector<MeasurementRecord> recs;
  const auto ts = scan_grid(0.0, cfg.ramsey_t_max_s, cfg.ramsey_points, false);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const uint64_t seed = derive_stream_seed(cfg.seed, i, kPointChannel);
    recs.push_back(run_ramsey(p, m, sp, pp, ts[i], detuning, cfg.ramsey_n, seed,
                              basis, 0.0));
  }

  write_file(cfg.output, point_csv(recs));
  write_file(cfg.output + ".plot", point_plot(recs));

  std::cout << (basis == RamseyBasis::bare ? "bare" : "dressed")
            << " ramsey scan: " << recs.size() << " points, T_R up to "
            << format_double(cfg.ramsey_t_max_s) << " s\n";
  if (basis == RamseyBasis::dressed && detuning != 0.0) {
    try {
      std::vector<FringePoint> pts;
      for (const auto& r : recs) pts.push_back({r.T, r.estimated_population, r.n});
      // uniform grid: cap the scan at Nyquist so an alias can't win
      const double dx = ts.size() > 1 ? ts[1] - ts[0] : cfg.ramsey_t_max_s;
      const RabiFit fit = fit_rabi(pts, kPi / dx);
      std::cout << "fitted fringe period = "
                << format_double(kTwoPi / fit.omega_g_hat) << " s (detuning set to "
                << format_double(cfg.ramsey_detuning_hz) << " Hz -> period "
                << format_double(1.0 / cfg.ramsey_detuning_hz) << " s)\n";
    } catch (const std::exception& e) {
      std::cout << "fringe fit unavailable: " << e.what() << "\n";
    }
  }
  std::cout << "wrote " << cfg.output << " and " << cfg.output << ".plot\n";
  return 0;
}

int cmd_stirap(const Config& cfg) {
  const SystemParams p = cfg.system_params();
  const PulseParams pp = cfg.pulse_params();
  const StirapParams sp = make_stirap_params(p.omega);
  const StirapFidelity fid = stirap_fidelity(p, sp, pp);

  std::cout << "dressing ramps at Omega = " << format_double(p.omega / kTwoPi)
            << " Hz: separation " << format_double(sp.separation * 1e6)
            << " us, width " << format_double(sp.width * 1e6) << " us\n";
  std::cout << "prepare fidelity (|0> -> |B>): " << format_double(fid.prepare)
            << "\n";
  std::cout << "round-trip fidelity (|0> -> |B> -> |0>): "
            << format_double(fid.round_trip) << "\n";

  const PulseSchedule sched =
      build_stirap_schedule(sp, StirapDirection::prepare, 0.0, pp);
  write_file(cfg.output, export_schedule(sched));

  // Transfer quality across the dressing range, for plotting.
  std::string plot = "x,y,sigma\n";
  for (const double ohz : scan_grid(18e3, 40e3, 12, false)) {
    SystemParams q = p;
    q.omega = kTwoPi * ohz;
    const StirapFidelity f = stirap_fidelity(q, make_stirap_params(q.omega), pp);
    plot += format_double(ohz);
    plot += ',';
    plot += format_double(f.round_trip);
    plot += ',';
    plot += "0\n";
  }
  write_file(cfg.output + ".plot", plot);
  std::cout << "wrote " << cfg.output << " (pulse schedule) and " << cfg.output
            << ".plot (round-trip vs Omega)\n";
  return 0;
}

int cmd_sensitivity(const Config& cfg, const std::string& scenarios_path) {
  const SystemParams p = cfg.system_params();
  const PulseParams pp = cfg.pulse_params();
  const std::vector<ScenarioRow> rows = load_scenarios(scenarios_path);
  const SweepResult res = run_sensitivity_sweep(p, pp, rows, cfg.kappa_t_per_rad_s);

  for (const auto& r : res.rows)
    if (!r.ok)
      std::cerr << "row omega_g = " << format_double(r.row.omega_g_hz)
                << " Hz, T = " << format_double(r.row.t_s)
                << " s skipped: " << r.error << "\n";

  write_file(cfg.output, results_csv(res));
  write_file(cfg.output + ".plot", fringe_plot(res));

  std::cout << "sensitivity sweep over " << rows.size() << " operating points\n";
  std::cout << "global fringe fit: contrast " << format_double(res.fit.contrast_f)
            << ", frequency ratio " << format_double(res.fit.omega_g_hat) << "\n";
  const SweepRow* best = nullptr;
  for (const auto& r : res.rows)
    if (r.ok && std::isfinite(r.s_hz) && (!best || r.s_hz < best->s_hz)) best = &r;
  if (best)
    std::cout << "best sensitivity: " << format_double(best->s_hz)
              << " Hz/sqrt(Hz) (" << format_double(best->b_sens_pt)
              << " pT/sqrt(Hz)) at T = " << format_double(best->t_window) << " s\n";
  std::cout << "wrote " << cfg.output << " and " << cfg.output << ".plot\n";
  return 0;
}

int cmd_protection(const Config& cfg) {
  const SystemParams p = cfg.system_params();
  std::string csv = "delta_hz,shift_hz,contamination_u,contamination_d,gap_hz\n";
  std::string plot = "x,y,sigma\n";
  for (const double dhz : scan_grid(0.0, p.omega / kTwoPi, 101, false)) {
    const ProtectionReport rep = protection_analysis(p, kTwoPi * dhz);
    csv += format_double(dhz);
    csv += ',';
    csv += format_double(rep.b_branch_shift / kTwoPi);
    csv += ',';
    csv += format_double(rep.contamination_u);
    csv += ',';
    csv += format_double(rep.contamination_d);
    csv += ',';
    csv += format_double(rep.gap / kTwoPi);
    csv += '\n';
    plot += format_double(dhz);
    plot += ',';
    plot += format_double(rep.gap / kTwoPi);
    plot += ",0\n";
  }
  write_file(cfg.output, csv);
  write_file(cfg.output + ".plot", plot);

  const ProtectionReport at_zero = protection_analysis(p, 0.0);
  std::cout << "dressing gap at zero Zeeman shift: "
            << format_double(at_zero.gap / kTwoPi) << " Hz\n";
  const NoiseModel m = cfg.noise_model();
  if (m.enabled() && m.sigma_delta > 0.0) {
    const ProtectionReport at_sigma = protection_analysis(p, m.sigma_delta);
    std::cout << "at one noise sigma (" << format_double(m.sigma_delta / kTwoPi)
              << " Hz): branch shift "
              << format_double(at_sigma.b_branch_shift / kTwoPi)
              << " Hz, contamination " << format_double(at_sigma.contamination_u)
              << "\n";
  }
  std::cout << "wrote " << cfg.output << " and " << cfg.output << ".plot\n";
  return 0;
}

int cmd_validate(const Config& cfg) {
  SystemParams p;
  p.omega0 = kTwoPi * cfg.validate_omega0_hz;
  p.lambda_plus = kTwoPi * cfg.validate_lambda_hz;
  p.lambda_minus = kTwoPi * cfg.validate_lambda_hz;
  p.omega = kTwoPi * cfg.validate_omega_hz;
  p.theta = cfg.theta_rad;
  p.bias_field = cfg.bias_field_t;

  SignalParams s;
  s.omega_g = kTwoPi * cfg.validate_omega_g_hz;
  s.phi = cfg.phi_rad;
  s.detuning = 0.0;
  s.target = RfTarget::plus;

  const double duration = cfg.validate_duration_ms * 1e-3;
  const double dt = cfg.validate_dt_ns > 0.0 ? cfg.validate_dt_ns * 1e-9 : 0.0;
  const RwaComparison cmp =
      cross_validate_rwa(p, s, duration, dt, cfg.validate_step_budget);

  std::cout << "single-tone model vs resonant model over "
            << format_double(duration * 1e3) << " ms (" << cmp.steps
            << " steps, dt = " << format_double(cmp.dt * 1e9) << " ns)\n";
  std::cout << "max population deviation: " << format_double(cmp.max_deviation)
            << "\n";

  std::string csv = "t_s,deviation\n";
  std::string plot = "x,y,sigma\n";
  for (const auto& [t, dev] : cmp.deviation_series) {
    csv += format_double(t);
    csv += ',';
    csv += format_double(dev);
    csv += '\n';
    plot += format_double(t);
    plot += ',';
    plot += format_double(dev);
    plot += ",0\n";
  }
  write_file(cfg.output, csv);
  write_file(cfg.output + ".plot", plot);
  std::cout << "wrote " << cfg.output << " and " << cfg.output << ".plot\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"four-level dressed-state magnetometry simulator"};
  app.require_subcommand(1);

  CommonArgs rabi_args, ramsey_args, stirap_args, sens_args, prot_args, val_args;

  CLI::App* rabi = app.add_subcommand("rabi", "signal-driven fringe scan vs window");
  add_common(rabi, rabi_args);
  CLI::App* ramsey = app.add_subcommand("ramsey", "coherence scan vs free time");
  add_common(ramsey, ramsey_args);
  CLI::App* stirap = app.add_subcommand("stirap", "dressing transfer fidelity");
  add_common(stirap, stirap_args);
  CLI::App* sens = app.add_subcommand("sensitivity", "scenario table sweep");
  add_common(sens, sens_args);
  sens->add_option("--scenarios", sens_args.scenarios_path,
                   "operating-point table CSV");
  CLI::App* prot = app.add_subcommand("protection", "dressed spectrum vs shift");
  add_common(prot, prot_args);
  CLI::App* val = app.add_subcommand("validate-rwa",
                                     "compare single-tone and resonant models");
  add_common(val, val_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message and usage hint
    return 1;
  }

  try {
    if (rabi->parsed()) return cmd_rabi(resolve_config(rabi_args));
    if (ramsey->parsed()) return cmd_ramsey(resolve_config(ramsey_args));
    if (stirap->parsed()) return cmd_stirap(resolve_config(stirap_args));
    if (sens->parsed())
      return cmd_sensitivity(resolve_config(sens_args), sens_args.scenarios_path);
    if (prot->parsed()) return cmd_protection(resolve_config(prot_args));
    if (val->parsed()) return cmd_validate(resolve_config(val_args));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace dsim
