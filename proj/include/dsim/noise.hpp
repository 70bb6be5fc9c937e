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

#ifndef DSIM_NOISE_HPP
#define DSIM_NOISE_HPP

#include <cstdint>
#include <vector>

namespace dsim {

// Stationary Ornstein-Uhlenbeck noise: autocorrelation sigma^2 exp(-|lag|/tau_c).
// delta shifts the |+1>/|-1> Zeeman pair by +/-delta; eps shifts |0'>.
struct NoiseModel {
  double sigma_delta = 0.0;  // rad/s, stationary std of the Zeeman fluctuation
  double tau_c = 1e-3;       // s, correlation time
  double sigma_eps = 0.0;    // rad/s, stationary std of the |0'> shift
  uint64_t master_seed = 12345;

  bool enabled() const { return sigma_delta != 0.0 || sigma_eps != 0.0; }

  // Free-evolution dephasing exponent of a bare superposition accumulating
  // phase at rate delta(t): chi(t) = sigma^2 tau^2 (t/tau + e^{-t/tau} - 1).
  double chi_delta(double t) const;

  // sigma_delta that makes the analytic bare coherence exp(-chi(t)) cross 1/e
  // at t = t2 for the given correlation time.
  static double sigma_for_bare_t2(double t2, double tau_c);
};

// One realization of both noise channels on a uniform grid of nodes k*dt;
// the last node lands at or past the requested duration.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> delta;
  std::vector<double> eps;

  std::size_t samples() const { return delta.size(); }
  // Frozen noise value for the step whose midpoint falls in cell i (node average).
  double delta_cell(std::size_t i) const { return 0.5 * (delta[i] + delta[i + 1]); }
  double eps_cell(std::size_t i) const { return 0.5 * (eps[i] + eps[i + 1]); }
};

// Exact OU discretization x_{k+1} = x_k e^{-dt/tau} + sigma sqrt(1-e^{-2dt/tau}) xi_k,
// x_0 ~ N(0, sigma^2). Bit-reproducible from (m.master_seed, traj_index); the
// two channels use independent substreams. Requires dt <= tau_c/10 when a
// channel is active, dt > 0, duration >= 0.
Trajectory sample_ou_trajectory(const NoiseModel& m, double duration, double dt,
                                uint64_t traj_index);

}  // namespace dsim

#endif  // DSIM_NOISE_HPP
