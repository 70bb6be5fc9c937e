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

#include "dsim/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsim/rng.hpp"

namespace dsim {

namespace {

constexpr uint64_t kMeasureChannel = 2;  // trajectories use channels 0 and 1

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// Zero-noise stand-in trajectory that covers [0, duration].
Trajectory still_air(double duration) {
  Trajectory t;
  t.dt = std::max(duration, 1e-9);
  t.delta.assign(2, 0.0);
  t.eps.assign(2, 0.0);
  return t;
}

StateVector end_state(const SystemParams& p, const SignalParams& s,
                      const PulseSchedule& sched, const Trajectory& traj,
                      const StateVector& psi0) {
  return propagate(p, s, sched, traj, psi0, {sched.duration()}).front();
}

// P-hat and its binomial std from n single-shot repetitions, each riding its
// own noise trajectory when the model is active.
MeasurementRecord sample_record(const SystemParams& p, const SignalParams& s,
                                const PulseSchedule& sched, const NoiseModel& m,
                                const StateVector& psi0, int target, long n,
                                uint64_t seed, double T, double t_add) {
  MeasurementRecord rec;
  rec.T = T;
  rec.T_add = t_add;

  NoiseModel local = m;
  local.master_seed = seed;

  if (!local.enabled()) {
    const StateVector psi = end_state(p, s, sched, still_air(sched.duration()), psi0);
    if (n <= 0) {
      rec.estimated_population = clamp01(psi.population(target));
      return rec;
    }
    const MeasurementRecord draw = measure_population(
        psi, target, n, derive_stream_seed(seed, 0, kMeasureChannel));
    rec.estimated_population = draw.estimated_population;
    rec.n = n;
    rec.delta_p = draw.delta_p;
    return rec;
  }

  if (n <= 0)
    throw std::invalid_argument("ideal readout needs a noise-free run; use an ensemble");

  Xoshiro256pp rng = Xoshiro256pp::seeded(derive_stream_seed(seed, 0, kMeasureChannel));
  long hits = 0;
  for (long rep = 0; rep < n; ++rep) {
    const Trajectory traj = sample_ou_trajectory(local, sched.duration(),
                                                 local.tau_c / 10.0,
                                                 static_cast<uint64_t>(rep));
    const double p_shot = clamp01(end_state(p, s, sched, traj, psi0).population(target));
    if (rng.uniform01() < p_shot) ++hits;
  }
  const double est = static_cast<double>(hits) / static_cast<double>(n);
  rec.estimated_population = est;
  rec.n = n;
  rec.delta_p = std::sqrt(est * (1.0 - est) / static_cast<double>(n));
  return rec;
}

}  // namespace

MeasurementRecord measure_population(const StateVector& psi, int target, long n,
                                     uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one repetition");
  if (target < 0 || target > 3) throw std::invalid_argument("bad target state");
  const double p_true = clamp01(psi.population(target));

  Xoshiro256pp rng = Xoshiro256pp::seeded(seed);
  long hits = 0;
  for (long i = 0; i < n; ++i)
    if (rng.uniform01() < p_true) ++hits;

  MeasurementRecord rec;
  rec.estimated_population = static_cast<double>(hits) / static_cast<double>(n);
  rec.n = n;
  rec.delta_p = std::sqrt(rec.estimated_population *
                          (1.0 - rec.estimated_population) / static_cast<double>(n));
  return rec;
}

double rabi_sequence_population(const SystemParams& p, const SignalParams& s,
                                const StirapParams& sp, const PulseParams& pp,
                                double T, double t_add, double* actual_T) {
  SequenceTiming timing;
  const PulseSchedule sched =
      build_rabi_schedule(sp, pp, s.omega_g, s.phi, T, t_add, &timing);
  if (actual_T) *actual_T = timing.window;
  return clamp01(end_state(p, s, sched, still_air(sched.duration()),
                           StateVector::basis(kIdx0)).population(kIdx0));
}

MeasurementRecord run_rabi(const SystemParams& p, const SignalParams& s,
                           const NoiseModel& m, const StirapParams& sp,
                           const PulseParams& pp, double T, double t_add, long n,
                           uint64_t seed) {
  if (!s.valid_for(p))
    throw std::invalid_argument(
        "signal too fast for the dressed reduction (omega_g must stay two orders "
        "below the dressing and the splitting)");
  SequenceTiming timing;
  const PulseSchedule sched =
      build_rabi_schedule(sp, pp, s.omega_g, s.phi, T, t_add, &timing);
  return sample_record(p, s, sched, m, StateVector::basis(kIdx0), kIdx0, n, seed,
                       timing.window, t_add);
}

MeasurementRecord run_ramsey(const SystemParams& p, const NoiseModel& m,
                             const StirapParams& sp, const PulseParams& pp,
                             double T_R, double detuning, long n, uint64_t seed,
                             RamseyBasis basis, double second_phase) {
  SignalParams sig;
  sig.omega_g = 0.0;
  sig.detuning = detuning;

  if (basis == RamseyBasis::bare) {
    if (detuning != 0.0)
      throw std::invalid_argument(
          "bare comparison runs at resonance; use quadrature phases for contrast");
    const PulseSchedule sched = build_bare_ramsey_schedule(pp, T_R, second_phase);
    return sample_record(p, sig, sched, m, StateVector::basis(kIdx0), kIdxMinus, n,
                         seed, T_R, sched.total_T_add);
  }

  SequenceTiming timing;
  const PulseSchedule sched =
      build_ramsey_schedule(sp, pp, T_R, second_phase, &timing);
  return sample_record(p, sig, sched, m, StateVector::basis(kIdx0), kIdx0p, n, seed,
                       timing.window, sched.total_T_add);
}

double ramsey_contrast(const SystemParams& p, const NoiseModel& m,
                       const StirapParams& sp, const PulseParams& pp, double T_R,
                       long n_traj, RamseyBasis basis, int workers) {
  SignalParams sig;
  sig.omega_g = 0.0;

  double quad[2];
  const double phases[2] = {0.0, kTwoPi / 4.0};
  for (int i = 0; i < 2; ++i) {
    PulseSchedule sched;
    int target;
    if (basis == RamseyBasis::bare) {
      sched = build_bare_ramsey_schedule(pp, T_R, phases[i]);
      target = kIdxMinus;
    } else {
      sched = build_ramsey_schedule(sp, pp, T_R, phases[i]);
      target = kIdx0p;
    }
    const EnsembleResult res =
        run_ensemble(p, sig, sched, m, StateVector::basis(kIdx0), n_traj,
                     {sched.duration()}, 0.0, workers);
    quad[i] = res.mean_populations.front()[static_cast<std::size_t>(target)] - 0.5;
  }
  return 2.0 * std::sqrt(quad[0] * quad[0] + quad[1] * quad[1]);
}

StirapFidelity stirap_fidelity(const SystemParams& p, const StirapParams& sp,
                               const PulseParams& pp) {
  SignalParams sig;
  sig.omega_g = 0.0;

  const PulseSchedule prep =
      build_stirap_schedule(sp, StirapDirection::prepare, 0.0, pp);
  const StateVector after_prep =
      end_state(p, sig, prep, still_air(prep.duration()), StateVector::basis(kIdx0));

  StirapFidelity f;
  f.prepare = std::norm(inner(StateVector::bright(), after_prep));

  const PulseSchedule rev =
      build_stirap_schedule(sp, StirapDirection::reverse, 0.0, pp);
  const StateVector back =
      end_state(p, sig, rev, still_air(rev.duration()), after_prep);
  f.round_trip = back.population(kIdx0);
  return f;
}

}  // namespace dsim
