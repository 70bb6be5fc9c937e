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

#pragma once

#include <cstdint>
#include <string>

#include "dsim/model.hpp"
#include "dsim/noise.hpp"
#include "dsim/schedule.hpp"

namespace dsim {

// Flat key=value run configuration.  All frequencies are entered in Hz (or
// the unit named in the key) and converted to rad/s exactly once, inside the
// accessor methods.
struct Config {
  // Atom and dressing field.
  double omega0_hz = 12.6428121e9;
  double lambda_plus_hz = 14.076e6;
  double lambda_minus_hz = 14.124e6;
  double omega_hz = 18e3;
  double theta_rad = kPi;
  double bias_field_t = 1e-3;

  // Probe signal.
  double omega_g_hz = 7.54;
  double phi_rad = 0.0;
  double detuning_hz = 0.0;
  std::string target = "dual";

  // Magnetic noise.  bare_t2_ms > 0 calibrates sigma_delta from the analytic
  // free-evolution coherence and excludes an explicit sigma_delta_hz.
  double sigma_delta_hz = 0.0;
  double tau_c_ms = 1.0;
  double sigma_eps_hz = 0.0;
  double bare_t2_ms = 0.0;

  // State-preparation pulses.
  double mw_pi_rabi_hz = 10e3;
  double rf_pulse_rabi_hz = 200.0;

  // Run control.
  std::uint64_t seed = 12345;
  std::int64_t trajectories = 1000;
  int workers = 1;
  std::string output = "dsim_out.csv";

  // Fringe sweep.
  double rabi_t_min_ms = 0.1;
  double rabi_t_max_ms = 500.0;
  int rabi_points = 21;
  std::int64_t rabi_n = 30;
  std::string rabi_spacing = "log";
  double rabi_t_add_s = 0.028;

  // Ramsey scan.
  double ramsey_detuning_hz = 0.52;
  double ramsey_t_max_s = 2.0;
  int ramsey_points = 11;
  std::int64_t ramsey_n = 10;
  std::string ramsey_basis = "dressed";

  // Rotating-frame cross-check (compressed scales so the fast terms resolve).
  double validate_omega0_hz = 3e6;
  double validate_lambda_hz = 200e3;
  double validate_omega_hz = 2e3;
  double validate_omega_g_hz = 100.0;
  double validate_duration_ms = 5.0;
  double validate_dt_ns = 0.0;  // 0 = automatic
  std::int64_t validate_step_budget = 20000000;

  // Angular-frequency -> magnetic-field conversion.
  double kappa_t_per_rad_s = 5.63165e-12;

  SystemParams system_params() const;
  SignalParams signal_params() const;
  NoiseModel noise_model() const;
  PulseParams pulse_params() const;
};

// Parses key=value text ('#'/';' comments, blank lines ignored).  Unknown
// keys, duplicate keys, malformed values, and inconsistent settings all throw
// std::invalid_argument with the offending line number.
Config parse_config(const std::string& text);

// parse_config over the contents of a file; errors are prefixed with the path.
Config load_config(const std::string& path);

// Applies one key=value override on top of an existing config (used for
// command-line overrides); same validation as the file parser.
void apply_override(Config& cfg, const std::string& key, const std::string& value);

}  // namespace dsim
