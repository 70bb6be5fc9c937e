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

#ifndef DSIM_PROPAGATE_HPP
#define DSIM_PROPAGATE_HPP

#include <array>
#include <utility>
#include <vector>

#include "dsim/model.hpp"
#include "dsim/noise.hpp"
#include "dsim/schedule.hpp"

namespace dsim {

// Dressed-resonant-frame Hamiltonian assembled from the schedule's drive
// values at time t plus the instantaneous noise shifts. During a constant
// hold this reproduces build_rwa_hamiltonian exactly.
Operator schedule_hamiltonian(const SignalParams& s, const PulseSchedule& schedule,
                              double t, double delta, double eps);

// Piecewise-frozen propagation: steps split at segment boundaries, the noise
// grid, and gaussian-envelope subdivisions (schedule.env_dt); each step
// applies the exact unitary of the midpoint Hamiltonian, with noise taken as
// the containing cell's node average. Returns the state at each readout time
// (ascending, within [0, duration]). The trajectory must cover the schedule.
std::vector<StateVector> propagate(const SystemParams& p, const SignalParams& s,
                                   const PulseSchedule& schedule,
                                   const Trajectory& traj, const StateVector& psi0,
                                   const std::vector<double>& readout_times);

struct EnsembleResult {
  std::vector<double> times;
  std::vector<std::array<double, 4>> mean_populations;  // [time][basis state]
  std::vector<std::array<double, 4>> std_error;         // of the mean
  long trajectory_count = 0;
};

// Monte-Carlo average over trajectories 0..n_traj-1. Trajectories are summed
// in fixed 32-wide chunks merged in chunk order, so the result is
// bit-identical for any worker count. dt is the noise grid step (<= 0 picks
// tau_c/10); ignored when the noise model is disabled.
EnsembleResult run_ensemble(const SystemParams& p, const SignalParams& s,
                            const PulseSchedule& schedule, const NoiseModel& m,
                            const StateVector& psi0, long n_traj,
                            const std::vector<double>& readout_times, double dt = 0.0,
                            int workers = 1);

struct RwaComparison {
  double max_deviation = 0.0;  // max abs population difference over the run
  double dt = 0.0;             // step actually used
  long steps = 0;
  // (t, max population deviation) on a coarse comparison grid.
  std::vector<std::pair<double, double>> deviation_series;
};

// Propagates the carrier-removed single-tone model (counter-rotating terms
// retained) against the static resonant model, both starting from the
// sensing state |B>, and returns the worst population disagreement. Requires
// zero rf detuning and a single rf target; rejects runs whose step count
// exceeds step_budget.
RwaComparison cross_validate_rwa(const SystemParams& p, const SignalParams& s,
                                 double duration, double dt = 0.0,
                                 long step_budget = 20000000);

}  // namespace dsim

#endif  // DSIM_PROPAGATE_HPP
