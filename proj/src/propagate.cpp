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

#include "dsim/propagate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace dsim {

namespace {

constexpr double kRfSplit = 0.35355339059327376220;  // sqrt(2)/4

bool all_zero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

}  // namespace

Operator schedule_hamiltonian(const SignalParams& s, const PulseSchedule& schedule,
                              double t, double delta, double eps) {
  const Complex dm = schedule.drive(Channel::mw_minus, t);
  const Complex dp = schedule.drive(Channel::mw_plus, t);
  const Complex dr = schedule.drive(Channel::rf_signal, t);

  Matrix4 h = Matrix4::Zero();
  h(kIdxMinus, kIdx0) = -0.5 * dm;
  h(kIdx0, kIdxMinus) = std::conj(h(kIdxMinus, kIdx0));
  h(kIdxPlus, kIdx0) = 0.5 * dp;
  h(kIdx0, kIdxPlus) = std::conj(h(kIdxPlus, kIdx0));

  // rf drive amplitude A sits on |B><0'| with element A/2; split evenly over
  // the bare pair.
  const Complex z = kRfSplit * dr;
  h(kIdxMinus, kIdx0p) = z;
  h(kIdx0p, kIdxMinus) = std::conj(z);
  h(kIdxPlus, kIdx0p) = z;
  h(kIdx0p, kIdxPlus) = std::conj(z);

  h(kIdxMinus, kIdxMinus) = -delta;
  h(kIdxPlus, kIdxPlus) = delta;
  h(kIdx0p, kIdx0p) = eps + s.detuning;
  return Operator{h, OpTag::hermitian};
}

std::vector<StateVector> propagate(const SystemParams& p, const SignalParams& s,
                                   const PulseSchedule& schedule,
                                   const Trajectory& traj, const StateVector& psi0,
                                   const std::vector<double>& readout_times) {
  p.validate();
  s.validate();
  schedule.validate();
  const double t_end = schedule.duration();
  const double tol = 1e-12 * std::max(1.0, t_end);

  if (traj.dt <= 0.0 || traj.samples() < 2)
    throw std::invalid_argument("trajectory grid is empty");
  if (traj.dt * static_cast<double>(traj.samples() - 1) < t_end - tol)
    throw std::invalid_argument("trajectory does not cover the schedule");

  for (std::size_t i = 0; i < readout_times.size(); ++i) {
    if (readout_times[i] < -tol || readout_times[i] > t_end + tol)
      throw std::invalid_argument("readout time outside the schedule");
    if (i > 0 && readout_times[i] < readout_times[i - 1])
      throw std::invalid_argument("readout times must be ascending");
  }

  const bool noisy = !(all_zero(traj.delta) && all_zero(traj.eps));

  std::vector<double> bp = schedule.boundaries();
  bp.push_back(0.0);
  bp.push_back(t_end);
  if (noisy)
    for (double t = traj.dt; t < t_end - tol; t += traj.dt) bp.push_back(t);
  for (const Segment& seg : schedule.segments) {
    if (seg.envelope != Envelope::gaussian) continue;
    if (schedule.env_dt <= 0.0)
      throw std::invalid_argument("gaussian segments need a positive env_dt");
    const int n_sub =
        std::max(1, static_cast<int>(std::ceil(seg.duration / schedule.env_dt - 1e-9)));
    for (int j = 1; j < n_sub; ++j)
      bp.push_back(seg.start + seg.duration * j / n_sub);
  }
  for (double t : readout_times) bp.push_back(std::clamp(t, 0.0, t_end));

  std::sort(bp.begin(), bp.end());
  std::vector<double> grid;
  grid.reserve(bp.size());
  for (double t : bp)
    if (grid.empty() || t - grid.back() > tol) grid.push_back(t);

  std::vector<StateVector> out;
  out.reserve(readout_times.size());
  std::size_t next_read = 0;
  StateVector psi = psi0;

  auto emit_at = [&](double t) {
    while (next_read < readout_times.size() &&
           std::clamp(readout_times[next_read], 0.0, t_end) <= t + tol) {
      out.push_back(psi);
      ++next_read;
    }
  };

  emit_at(grid.front());
  const std::size_t last_cell = traj.samples() - 2;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double a = grid[k - 1];
    const double b = grid[k];
    const double tm = 0.5 * (a + b);
    double delta = 0.0, eps = 0.0;
    if (noisy) {
      std::size_t cell = static_cast<std::size_t>(tm / traj.dt);
      cell = std::min(cell, last_cell);
      delta = traj.delta_cell(cell);
      eps = traj.eps_cell(cell);
    }
    const Operator u = expm_step(schedule_hamiltonian(s, schedule, tm, delta, eps), b - a);
    psi = apply(u, psi);
    emit_at(b);
  }
  if (next_read != readout_times.size())
    throw std::logic_error("readout time not reached");
  return out;
}

namespace {

struct Accum {
  std::vector<std::array<double, 4>> sum;
  std::vector<std::array<double, 4>> sum2;

  explicit Accum(std::size_t nt)
      : sum(nt, {0.0, 0.0, 0.0, 0.0}), sum2(nt, {0.0, 0.0, 0.0, 0.0}) {}

  void take(const std::vector<StateVector>& states) {
    for (std::size_t t = 0; t < states.size(); ++t) {
      const auto pops = states[t].populations();
      for (int k = 0; k < 4; ++k) {
        sum[t][k] += pops[k];
        sum2[t][k] += pops[k] * pops[k];
      }
    }
  }

  void merge(const Accum& o) {
    for (std::size_t t = 0; t < sum.size(); ++t)
      for (int k = 0; k < 4; ++k) {
        sum[t][k] += o.sum[t][k];
        sum2[t][k] += o.sum2[t][k];
      }
  }
};

constexpr long kChunk = 32;

}  // namespace

EnsembleResult run_ensemble(const SystemParams& p, const SignalParams& s,
                            const PulseSchedule& schedule, const NoiseModel& m,
                            const StateVector& psi0, long n_traj,
                            const std::vector<double>& readout_times, double dt,
                            int workers) {
  if (n_traj < 1) throw std::invalid_argument("need at least one trajectory");
  const double t_end = schedule.duration();
  const double traj_dt =
      m.enabled() ? (dt > 0.0 ? dt : m.tau_c / 10.0) : std::max(t_end, 1e-9);

  const std::size_t nt = readout_times.size();
  const long n_chunks = (n_traj + kChunk - 1) / kChunk;
  std::vector<Accum> partial(static_cast<std::size_t>(n_chunks), Accum(nt));

  std::atomic<long> next_chunk{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto work = [&]() {
    try {
      for (;;) {
        const long c = next_chunk.fetch_add(1);
        if (c >= n_chunks) return;
        const long lo = c * kChunk;
        const long hi = std::min(n_traj, lo + kChunk);
        for (long idx = lo; idx < hi; ++idx) {
          const Trajectory traj =
              sample_ou_trajectory(m, t_end, traj_dt, static_cast<uint64_t>(idx));
          partial[static_cast<std::size_t>(c)].take(
              propagate(p, s, schedule, traj, psi0, readout_times));
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_error) first_error = std::current_exception();
    }
  };

  const int n_workers = std::max(1, workers);
  if (n_workers == 1 || n_chunks == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const long want = std::min<long>(n_workers, n_chunks);
    pool.reserve(static_cast<std::size_t>(want));
    for (long i = 0; i < want; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  Accum total(nt);
  for (const Accum& a : partial) total.merge(a);

  EnsembleResult res;
  res.times = readout_times;
  res.trajectory_count = n_traj;
  res.mean_populations.resize(nt);
  res.std_error.resize(nt);
  const double n = static_cast<double>(n_traj);
  for (std::size_t t = 0; t < nt; ++t)
    for (int k = 0; k < 4; ++k) {
      const double mean = total.sum[t][k] / n;
      res.mean_populations[t][k] = mean;
      double se = 0.0;
      if (n_traj > 1) {
        const double var = std::max(0.0, (total.sum2[t][k] - n * mean * mean) /
                                             (n - 1.0));
        se = std::sqrt(var / n);
      }
      res.std_error[t][k] = se;
    }
  return res;
}

RwaComparison cross_validate_rwa(const SystemParams& p, const SignalParams& s,
                                 double duration, double dt, long step_budget) {
  p.validate();
  s.validate();
  if (duration <= 0.0) throw std::invalid_argument("duration must be positive");
  if (s.target == RfTarget::dual)
    throw std::invalid_argument("cross-validation drives a single rf tone");
  if (s.detuning != 0.0)
    throw std::invalid_argument("cross-validation assumes a resonant rf tone");

  const double w_minus = p.carrier_minus();
  const double w_plus = p.carrier_plus();
  const double w_fast = 2.0 * std::max(w_minus, w_plus);
  if (dt <= 0.0) dt = (kTwoPi / w_fast) / 64.0;
  const double steps_needed = std::ceil(duration / dt);
  if (steps_needed > static_cast<double>(step_budget))
    throw std::invalid_argument("step count exceeds the configured budget");
  const long steps = static_cast<long>(steps_needed);
  const double h_step = duration / static_cast<double>(steps);

  // Start from the sensing state: it spans the fringe the effective model is
  // built to describe, without artificially populating the split branches.
  const StateVector psi0 = StateVector::bright();

  // Static resonant model, solved once.
  const Spectrum ref = eig_hermitian(build_rwa_hamiltonian(p, s, 0.0, 0.0));
  const Vector4 ref_coef = ref.vectors.adjoint() * psi0.a;
  auto reference_pops = [&](double t) {
    Vector4 phases;
    for (int k = 0; k < 4; ++k)
      phases[k] = std::polar(1.0, -ref.values[static_cast<std::size_t>(k)] * t) *
                  ref_coef[k];
    const Vector4 a = ref.vectors * phases;
    return std::array<double, 4>{std::norm(a[0]), std::norm(a[1]), std::norm(a[2]),
                                 std::norm(a[3])};
  };

  // Carrier-removed frame of the lab model: co-rotating terms are static,
  // counter-rotating terms oscillate at twice the carriers; the detuned half
  // of the single rf tone rides on the untargeted transition's splitting.
  const double half_mw = 0.5 * p.omega;
  const double rf_amp = 0.5 * std::sqrt(2.0) * s.omega_g;  // lab amplitude / 2
  const bool on_plus = s.target == RfTarget::plus;
  const double lambda_t = on_plus ? p.lambda_plus : p.lambda_minus;
  auto model_a = [&](double t) {
    Matrix4 h = Matrix4::Zero();
    h(kIdxMinus, kIdx0) =
        -half_mw * (1.0 + std::polar(1.0, -2.0 * w_minus * t));
    h(kIdx0, kIdxMinus) = std::conj(h(kIdxMinus, kIdx0));
    h(kIdxPlus, kIdx0) = half_mw * (1.0 + std::polar(1.0, -2.0 * w_plus * t));
    h(kIdx0, kIdxPlus) = std::conj(h(kIdxPlus, kIdx0));
    // |+1> rotates at +lambda_plus, |-1> at -lambda_minus, so the leftover
    // fast term conjugates between the two targets.
    const Complex rf =
        on_plus ? rf_amp * (std::polar(1.0, -s.phi) +
                            std::polar(1.0, 2.0 * lambda_t * t + s.phi))
                : rf_amp * (std::polar(1.0, s.phi) +
                            std::polar(1.0, -(2.0 * lambda_t * t + s.phi)));
    const int row = on_plus ? kIdxPlus : kIdxMinus;
    h(row, kIdx0p) = rf;
    h(kIdx0p, row) = std::conj(rf);
    return Operator{h, OpTag::hermitian};
  };

  RwaComparison cmp;
  cmp.dt = h_step;
  cmp.steps = steps;
  const long cmp_every = std::max<long>(1, steps / 4096);

  StateVector psi = psi0;
  for (long k = 0; k < steps; ++k) {
    const double tm = (static_cast<double>(k) + 0.5) * h_step;
    psi = apply(expm_step(model_a(tm), h_step), psi);
    if (k % cmp_every == cmp_every - 1 || k == steps - 1) {
      const double t = static_cast<double>(k + 1) * h_step;
      const auto pa = psi.populations();
      const auto pb = reference_pops(t);
      double dev = 0.0;
      for (int i = 0; i < 4; ++i) dev = std::max(dev, std::abs(pa[i] - pb[i]));
      cmp.deviation_series.emplace_back(t, dev);
      cmp.max_deviation = std::max(cmp.max_deviation, dev);
    }
  }
  return cmp;
}

}  // namespace dsim
