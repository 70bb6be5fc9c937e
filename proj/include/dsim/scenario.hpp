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
#include <vector>

#include "dsim/estimation.hpp"
#include "dsim/model.hpp"
#include "dsim/schedule.hpp"

namespace dsim {

// One measured operating point: signal frequency, its reported uncertainty,
// shots per point, interrogation window, and sequence overhead.
struct ScenarioRow {
  double omega_g_hz = 0.0;
  double delta_omega_g_hz = 0.0;
  std::int64_t n = 0;
  double t_s = 0.0;
  double t_add_s = 0.0;
};

// CSV with the exact header omega_g_hz,delta_omega_g_hz,n,T_s,T_add_s.
// Malformed headers, fields, or out-of-range values throw with the row index.
std::vector<ScenarioRow> parse_scenarios(const std::string& text);
std::vector<ScenarioRow> load_scenarios(const std::string& path);
std::string write_scenarios(const std::vector<ScenarioRow>& rows);

// One evaluated operating point of a sweep.
struct SweepRow {
  ScenarioRow row;
  double phi = 0.0;        // fringe phase omega_g * window
  double t_window = 0.0;   // grid-snapped interrogation window (s)
  double p_ideal = 0.0;    // noiseless simulated population
  double p_model = 0.0;    // population on the fitted fringe
  double delta_p = 0.0;    // projection noise at p_model for this row's n
  double delta_omega_g = 0.0;  // rad/s
  double s_rad = 0.0;
  double s_hz = 0.0;
  double s_q_rad = 0.0;    // projection-noise floor 1/sqrt(window)
  double b_sens_pt = 0.0;  // field sensitivity, picotesla Hz^-1/2
  bool ok = false;
  std::string error;       // set when this row could not be evaluated
};

struct SweepResult {
  RabiFit fit;                 // global fringe fit over all evaluated rows
  std::vector<SweepRow> rows;  // sorted by phi ascending
};

// Simulates every row noiselessly through the full pulse sequence, fits one
// fringe to all of them (abscissa = fringe phase, so the fitted frequency is
// dimensionless and close to 1), then converts each row's projection noise
// into a sensitivity.  Rows that fail to simulate are reported with their
// error and excluded from the fit; fewer than five usable rows is fatal.
SweepResult run_sensitivity_sweep(const SystemParams& p, const PulseParams& pp,
                                  const std::vector<ScenarioRow>& rows,
                                  double kappa = 5.63165e-12);

// Result CSV (header phi_rad,T_s,T_add_s,n,delta_omega_rad_s,S_rad,S_hz,
// S_Q_rad,B_sens_pT), evaluated rows only, phi ascending.
std::string results_csv(const SweepResult& result);

// x,y,sigma plot data of the simulated fringe and its per-row uncertainty.
std::string fringe_plot(const SweepResult& result);

}  // namespace dsim
