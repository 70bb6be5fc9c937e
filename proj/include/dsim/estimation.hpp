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
#include <vector>

namespace dsim {

// One fringe sample: estimated population after an interrogation window x
// (seconds, or any abscissa the caller keeps consistent), with the shot count
// that produced the estimate.
struct FringePoint {
  double x = 0.0;
  double p_hat = 0.5;
  std::int64_t n = 0;
};

// Weighted fit of p(x) = (1 + f cos(w x)) / 2.
struct RabiFit {
  double omega_g_hat = 0.0;  // fitted angular frequency (rad/s per unit x)
  double contrast_f = 0.0;   // fitted fringe contrast, clamped to [0, 1.05]
  double omega_g_std = 0.0;  // 1-sigma frequency uncertainty from the normal matrix
  double residual_rms = 0.0; // weighted rms residual of the converged fit
  bool converged = false;
};

// Deterministic coarse frequency scan followed by Levenberg-Marquardt
// refinement on (omega, f).  Needs at least five points spanning half a
// period of the found frequency.  Throws std::invalid_argument on degenerate
// input (too few points, non-finite values, all populations equal).
// A positive omega_max caps the scan; use the Nyquist rate pi/dx on
// uniform grids to keep shot noise from promoting an alias.
RabiFit fit_rabi(const std::vector<FringePoint>& points, double omega_max = 0.0);

// Decay-law fit c(t) = exp(-(t/T2)^q), q in {1, 2} picked by residual.
struct DecayFit {
  double t2 = 0.0;       // 1/e time (seconds)
  int exponent = 1;      // chosen stretching exponent q
  double residual_rms = 0.0;
};

// Log-space regression through the origin; contrast samples at or below 0.02
// are discarded before fitting.  Needs at least five usable points and a
// genuinely decaying trend, else throws std::invalid_argument.
DecayFit fit_decay(const std::vector<double>& times,
                   const std::vector<double>& contrasts);

// Converts a single-point population uncertainty into a frequency
// uncertainty: delta_p / (|slope| * T).  A vanishing slope returns +infinity
// (that operating point carries no frequency information).
double delta_omega(double delta_p, double slope, double t_window);

// Sensitivity of one scenario row: S = delta_omega_g * sqrt(total time).
struct Sensitivity {
  double s_rad = 0.0;  // rad s^-1 Hz^-1/2
  double s_hz = 0.0;   // s_rad / 2 pi
};

Sensitivity sensitivity(double delta_omega_g, double total_time);

// Quantum projection-noise limit for an interrogation window T (seconds).
double sql(double t_window);

// Field equivalent of an angular-frequency sensitivity through the magnetic
// coupling kappa (tesla per rad/s).
double omega_to_field(double s_rad, double kappa = 5.63165e-12);

// Fully evaluated scenario row.
struct SensitivityPoint {
  double omega_g = 0.0;               // rad/s
  double delta_omega_g_reported = 0.0;// rad/s, from the input table
  std::int64_t n = 0;
  double t_window = 0.0;              // seconds
  double t_add = 0.0;                 // seconds
  double phi = 0.0;                   // fringe phase omega_g * t_window
  double delta_omega_g = 0.0;         // rad/s, recomputed
  double s_rad = 0.0;
  double s_hz = 0.0;
  double s_q_rad = 0.0;               // projection-noise floor for this row
};

}  // namespace dsim
