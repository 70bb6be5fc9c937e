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

#ifndef DSIM_PROTOCOLS_HPP
#define DSIM_PROTOCOLS_HPP

#include <cstdint>

#include "dsim/propagate.hpp"

namespace dsim {

// One experimental datum: population estimate from n projective repetitions.
// n = 0 marks an ideal (sampling-free) readout.
struct MeasurementRecord {
  double estimated_population = 0.0;
  long n = 0;
  double delta_p = 0.0;  // std of the estimate, sqrt(P(1-P)/n)
  double T = 0.0;        // signal-sensitive time actually scheduled
  double T_add = 0.0;    // overhead time
};

// k ~ Binomial(n, population of target); returns k/n. Requires n >= 1; seed
// should come pre-derived so it cannot collide with trajectory streams.
MeasurementRecord measure_population(const StateVector& psi, int target, long n,
                                     uint64_t seed);

// Noiseless end-of-sequence |0> population of the full sensing sequence
// (prepare, rf window ~T, reverse, map). Runs whatever amplitude it is given;
// callers own the slow-signal validity question. Optionally reports the
// grid-snapped window duration.
double rabi_sequence_population(const SystemParams& p, const SignalParams& s,
                                const StirapParams& sp, const PulseParams& pp,
                                double T, double t_add, double* actual_T = nullptr);

// Full sensing sequence with projective readout of the mapped |0> population.
// Noise-free runs propagate once (n = 0 returns the exact population); with
// noise enabled each repetition rides its own trajectory, so n >= 1. seed is
// the per-datum master (noise streams and the measurement stream both derive
// from it). Enforces the slow-signal validity flag.
MeasurementRecord run_rabi(const SystemParams& p, const SignalParams& s,
                           const NoiseModel& m, const StirapParams& sp,
                           const PulseParams& pp, double T, double t_add, long n,
                           uint64_t seed);

enum class RamseyBasis { dressed, bare };

// Two pi/2 pulses separated by T_R. dressed: rf pulses on the prepared
// |B>,|0'> pair with the given rf detuning, readout of |0'>; bare: microwave
// pulses on |0>,|-1> at resonance (detuning must be 0), readout of |-1>.
// second_phase offsets the closing pulse. Noiseless expectation (dressed):
// P = (1 + cos(detuning*T_R - second_phase))/2.
MeasurementRecord run_ramsey(const SystemParams& p, const NoiseModel& m,
                             const StirapParams& sp, const PulseParams& pp,
                             double T_R, double detuning, long n, uint64_t seed,
                             RamseyBasis basis, double second_phase = 0.0);

// Ensemble-mean fringe contrast at one T_R from two quadrature closing
// phases: 2 sqrt((P_0 - 1/2)^2 + (P_90 - 1/2)^2). Runs at zero detuning, so
// the surviving contrast is purely the dephasing envelope.
double ramsey_contrast(const SystemParams& p, const NoiseModel& m,
                       const StirapParams& sp, const PulseParams& pp, double T_R,
                       long n_traj, RamseyBasis basis, int workers = 1);

// Noiseless dressing transfer quality: population on |B> after prepare, and
// back on |0> after an immediate reverse.
struct StirapFidelity {
  double prepare = 0.0;
  double round_trip = 0.0;
};

StirapFidelity stirap_fidelity(const SystemParams& p, const StirapParams& sp,
                               const PulseParams& pp);

}  // namespace dsim

#endif  // DSIM_PROTOCOLS_HPP
